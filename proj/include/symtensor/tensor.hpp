#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "symtensor/random.hpp"

namespace symtensor {

/// Default cap on dense materialization (number of entries).
inline constexpr std::size_t kDefaultDenseBudget = 10'000'000;

/// Tolerance for "is this a unit vector" preconditions on user input.
inline constexpr double kUnitNormTol = 1e-8;

// ---------------------------------------------------------------------------
// Tensor representations.
//
// All three types are immutable once constructed (mutation is confined to
// builders); every operation on them is a pure function, so concurrent use
// from many threads is safe.
// ---------------------------------------------------------------------------

/// Fully materialized symmetric tensor with `modes` indices, each ranging
/// over [0, dim). Entries are stored row-major over all dim^modes index
/// tuples; symmetry means the value is the same across every permutation
/// of a tuple. This is the small-scale reference representation.
class SymTensorDense {
public:
    /// Zero tensor of the given shape.
    SymTensorDense(int modes, int dim);

    /// Wraps an explicit entry array (size must equal dim^modes).
    /// Symmetry of the data is the caller's responsibility; use
    /// is_symmetric() to check.
    static SymTensorDense from_entries(int modes, int dim,
                                       std::vector<double> entries);

    int modes() const { return modes_; }
    int dim() const { return dim_; }
    std::size_t entry_count() const { return entries_.size(); }

    double at(std::span<const int> index) const {
        return entries_[flat_index(index)];
    }
    double& at(std::span<const int> index) { return entries_[flat_index(index)]; }

    const std::vector<double>& entries() const { return entries_; }
    std::vector<double>& entries() { return entries_; }

    /// Exhaustive permutation-invariance check: every entry equals the
    /// entry at its sorted (canonical) tuple to within tol.
    bool is_symmetric(double tol = 0.0) const;

private:
    std::size_t flat_index(std::span<const int> index) const;

    int modes_ = 0;
    int dim_ = 0;
    std::vector<double> entries_;
};

/// Coordinate-form symmetric tensor. Each stored term is the canonical
/// (non-decreasing) representative of its permutation orbit; the logical
/// dense tensor carries the value at every distinct permutation of the
/// tuple. This is the representation that scales to large dimension.
class SymTensorSparse {
public:
    struct Term {
        std::vector<int> index;  // non-decreasing, 0-based, length == modes
        double value = 0.0;
    };

    /// Validates: every tuple sorted non-decreasing, in range, length
    /// `modes`, no duplicate tuples. Terms are stored sorted
    /// lexicographically so equal tensors compare equal term-by-term.
    SymTensorSparse(int modes, int dim, std::vector<Term> terms);

    int modes() const { return modes_; }
    int dim() const { return dim_; }
    const std::vector<Term>& terms() const { return terms_; }

private:
    int modes_ = 0;
    int dim_ = 0;
    std::vector<Term> terms_;
};

/// Structured tensor  lambda * a^(x)m + noise  held as its parts, never
/// materialized. `direction` must be unit length to within 1e-12
/// (normalize before constructing; see make_rank_one). Contractions use
/// the rank-one product identity plus the sparse noise contraction.
class RankOnePlusNoise {
public:
    RankOnePlusNoise(double lambda, Eigen::VectorXd direction,
                     SymTensorSparse noise);

    double lambda() const { return lambda_; }
    const Eigen::VectorXd& direction() const { return direction_; }
    const SymTensorSparse& noise() const { return noise_; }
    int modes() const { return noise_.modes(); }
    int dim() const { return noise_.dim(); }

private:
    double lambda_ = 0.0;
    Eigen::VectorXd direction_;
    SymTensorSparse noise_;
};

/// Result of contracting a tensor down to r remaining modes:
/// a scalar (r=0), vector (r=1), or symmetric matrix (r=2).
class LowModeResult {
public:
    static LowModeResult scalar(double v) { return LowModeResult(v); }
    static LowModeResult vector(Eigen::VectorXd v) {
        return LowModeResult(std::move(v));
    }
    static LowModeResult matrix(Eigen::MatrixXd m) {
        return LowModeResult(std::move(m));
    }

    int order() const { return static_cast<int>(value_.index()); }

    double as_scalar() const { return std::get<double>(value_); }
    const Eigen::VectorXd& as_vector() const {
        return std::get<Eigen::VectorXd>(value_);
    }
    const Eigen::MatrixXd& as_matrix() const {
        return std::get<Eigen::MatrixXd>(value_);
    }

private:
    template <class T>
    explicit LowModeResult(T v) : value_(std::move(v)) {}

    std::variant<double, Eigen::VectorXd, Eigen::MatrixXd> value_;
};

// ---------------------------------------------------------------------------
// Contraction. contract_scalar/vector/matrix compute the tensor-vector
// product with 0, 1, or 2 free modes. The sparse forms weight each
// canonical term by the exact multinomial count of orbit members whose
// free slots carry the free indices.
// ---------------------------------------------------------------------------

double contract_scalar(const SymTensorDense& t, const Eigen::VectorXd& x);
Eigen::VectorXd contract_vector(const SymTensorDense& t, const Eigen::VectorXd& x);
Eigen::MatrixXd contract_matrix(const SymTensorDense& t, const Eigen::VectorXd& x);

double contract_scalar(const SymTensorSparse& t, const Eigen::VectorXd& x);
Eigen::VectorXd contract_vector(const SymTensorSparse& t, const Eigen::VectorXd& x);
Eigen::MatrixXd contract_matrix(const SymTensorSparse& t, const Eigen::VectorXd& x);

double contract_scalar(const RankOnePlusNoise& t, const Eigen::VectorXd& x);
Eigen::VectorXd contract_vector(const RankOnePlusNoise& t, const Eigen::VectorXd& x);
Eigen::MatrixXd contract_matrix(const RankOnePlusNoise& t, const Eigen::VectorXd& x);

/// Generic entry point: r in {0, 1, 2}, r <= modes.
template <class Tensor>
LowModeResult contract(const Tensor& t, const Eigen::VectorXd& x, int r) {
    if (r < 0 || r > 2 || r > t.modes())
        throw std::invalid_argument("contract: r must be in {0,1,2} and <= modes");
    switch (r) {
        case 0: return LowModeResult::scalar(contract_scalar(t, x));
        case 1: return LowModeResult::vector(contract_vector(t, x));
        default: return LowModeResult::matrix(contract_matrix(t, x));
    }
}

/// Homogeneous form evaluated at a unit vector. Rejects non-unit input
/// (callers normalize); the scalar contraction itself has no such
/// restriction.
template <class Tensor>
double rayleigh_quotient(const Tensor& t, const Eigen::VectorXd& x) {
    if (std::abs(x.norm() - 1.0) > kUnitNormTol)
        throw std::invalid_argument("rayleigh_quotient: x must be unit length");
    return contract_scalar(t, x);
}

/// Gradient of x -> (tensor) x^m, namely m * (tensor) x^(m-1).
template <class Tensor>
Eigen::VectorXd gradient(const Tensor& t, const Eigen::VectorXd& x) {
    return static_cast<double>(t.modes()) * contract_vector(t, x);
}

/// Hessian of x -> (tensor) x^m, namely m(m-1) * (tensor) x^(m-2).
template <class Tensor>
Eigen::MatrixXd hessian(const Tensor& t, const Eigen::VectorXd& x) {
    const double m = static_cast<double>(t.modes());
    return m * (m - 1.0) * contract_matrix(t, x);
}

// ---------------------------------------------------------------------------
// Materialization.
// ---------------------------------------------------------------------------

/// Full symmetric materialization: each canonical term is copied to all
/// distinct permutations of its tuple, so permutation invariance holds
/// exactly. Refuses when dim^modes exceeds the budget.
SymTensorDense densify(const SymTensorSparse& t,
                       std::size_t budget = kDefaultDenseBudget);
SymTensorDense densify(const RankOnePlusNoise& t,
                       std::size_t budget = kDefaultDenseBudget);

/// Extracts canonical terms with |value| > tol from a dense tensor.
/// Inverse of densify on canonical terms.
SymTensorSparse sparsify(const SymTensorDense& t, double tol = 0.0);

// ---------------------------------------------------------------------------
// Convergence-shift bounds. beta_hat is the entrywise-sum upper bound
// (m-1) * sum over all m-tuples of |entry|; a shift above it guarantees
// monotone convergence of the shifted power iteration. beta_estimate
// brackets the sharp (but not directly computable) spectral bound
// between a sampled lower value and beta_hat.
// ---------------------------------------------------------------------------

double beta_hat(const SymTensorDense& t);
double beta_hat(const SymTensorSparse& t);
double beta_hat(const RankOnePlusNoise& t);

struct BetaBracket {
    double lower = 0.0;
    double upper = 0.0;
};

namespace detail {

double spectral_radius(const Eigen::MatrixXd& m);

template <class Tensor>
double beta_lower_from_samples(const Tensor& t, int samples, std::uint64_t seed,
                               const std::vector<Eigen::VectorXd>& extra) {
    RandomStream rng(seed);
    double best = 0.0;
    for (const auto& x : extra)
        best = std::max(best, spectral_radius(contract_matrix(t, x)));
    for (int s = 0; s < samples; ++s) {
        const Eigen::VectorXd x = sample_sphere(t.dim(), rng);
        best = std::max(best, spectral_radius(contract_matrix(t, x)));
    }
    return (t.modes() - 1) * best;
}

}  // namespace detail

template <class Tensor>
BetaBracket beta_estimate(const Tensor& t, int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("beta_estimate: samples >= 1");
    return {detail::beta_lower_from_samples(t, samples, seed, {}), beta_hat(t)};
}

/// The structured form also probes +/-direction, where the rank-one part
/// attains its extreme spectral radius.
BetaBracket beta_estimate(const RankOnePlusNoise& t, int samples,
                          std::uint64_t seed);

// ---------------------------------------------------------------------------
// Combinatorial helpers shared by the sparse kernels.
// ---------------------------------------------------------------------------

namespace detail {

/// x^e for small non-negative integer e.
inline double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

/// Number of distinct arrangements of a multiset: total! / prod(counts!).
/// Exact in 64-bit for total <= 20, which bounds the supported mode count.
double multinomial(int total, std::span<const int> counts);

/// Distinct-permutation count of a sorted index tuple.
double orbit_size(std::span<const int> sorted_index);

/// (index, multiplicity) compression of a sorted tuple.
std::vector<std::pair<int, int>> index_counts(std::span<const int> sorted_index);

/// Visits every m-tuple over [0, dim) in row-major order.
template <class Fn>
void for_each_index(int modes, int dim, Fn&& fn) {
    std::vector<int> idx(modes, 0);
    while (true) {
        fn(std::span<const int>(idx));
        int pos = modes - 1;
        while (pos >= 0 && ++idx[pos] == dim) idx[pos--] = 0;
        if (pos < 0) break;
    }
}

}  // namespace detail

}  // namespace symtensor
