#include "symtensor/tensor.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>

namespace symtensor {

namespace {

std::size_t checked_entry_count(int modes, int dim,
                                std::size_t cap = std::numeric_limits<std::size_t>::max()) {
    if (modes < 2) throw std::invalid_argument("tensor: modes must be >= 2");
    if (dim < 1) throw std::invalid_argument("tensor: dim must be >= 1");
    std::size_t count = 1;
    for (int k = 0; k < modes; ++k) {
        if (count > cap / static_cast<std::size_t>(dim))
            throw std::invalid_argument("tensor: dim^modes exceeds size limit");
        count *= static_cast<std::size_t>(dim);
    }
    return count;
}

void check_dim(int dim, const Eigen::VectorXd& x, const char* who) {
    if (x.size() != dim)
        throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

}  // namespace

// ---------------------------------------------------------------------------
// Combinatorics
// ---------------------------------------------------------------------------

namespace detail {

namespace {

// Exact binomial coefficient; all intermediates fit in 64 bits for n <= 62.
std::uint64_t binomial_u64(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<std::uint64_t>(n - k + i) /
                 static_cast<std::uint64_t>(i);
    }
    return result;
}

}  // namespace

double multinomial(int total, std::span<const int> counts) {
    if (total > 20)
        throw std::invalid_argument("multinomial: mode count above 20 unsupported");
    std::uint64_t result = 1;
    int remaining = total;
    for (int c : counts) {
        result *= binomial_u64(remaining, c);
        remaining -= c;
    }
    if (remaining != 0)
        throw std::invalid_argument("multinomial: counts do not sum to total");
    return static_cast<double>(result);
}

std::vector<std::pair<int, int>> index_counts(std::span<const int> sorted_index) {
    std::vector<std::pair<int, int>> counts;
    for (int i : sorted_index) {
        if (!counts.empty() && counts.back().first == i)
            ++counts.back().second;
        else
            counts.emplace_back(i, 1);
    }
    return counts;
}

double orbit_size(std::span<const int> sorted_index) {
    const auto counts = index_counts(sorted_index);
    std::vector<int> just_counts;
    just_counts.reserve(counts.size());
    for (const auto& [idx, c] : counts) just_counts.push_back(c);
    return multinomial(static_cast<int>(sorted_index.size()), just_counts);
}

double spectral_radius(const Eigen::MatrixXd& m) {
    if (m.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// SymTensorDense
// ---------------------------------------------------------------------------

SymTensorDense::SymTensorDense(int modes, int dim)
    : modes_(modes), dim_(dim), entries_(checked_entry_count(modes, dim), 0.0) {}

SymTensorDense SymTensorDense::from_entries(int modes, int dim,
                                            std::vector<double> entries) {
    if (entries.size() != checked_entry_count(modes, dim))
        throw std::invalid_argument("from_entries: entry count != dim^modes");
    SymTensorDense t(modes, dim);
    t.entries_ = std::move(entries);
    return t;
}

std::size_t SymTensorDense::flat_index(std::span<const int> index) const {
    std::size_t flat = 0;
    for (int i : index) {
        if (i < 0 || i >= dim_)
            throw std::invalid_argument("dense at: index out of range");
        flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    }
    return flat;
}

bool SymTensorDense::is_symmetric(double tol) const {
    bool ok = true;
    std::vector<int> sorted(modes_);
    detail::for_each_index(modes_, dim_, [&](std::span<const int> idx) {
        if (!ok) return;
        sorted.assign(idx.begin(), idx.end());
        std::sort(sorted.begin(), sorted.end());
        if (std::abs(at(idx) - at(sorted)) > tol) ok = false;
    });
    return ok;
}

// ---------------------------------------------------------------------------
// SymTensorSparse
// ---------------------------------------------------------------------------

SymTensorSparse::SymTensorSparse(int modes, int dim, std::vector<Term> terms)
    : modes_(modes), dim_(dim), terms_(std::move(terms)) {
    if (modes < 2) throw std::invalid_argument("sparse: modes must be >= 2");
    if (modes > 20) throw std::invalid_argument("sparse: modes above 20 unsupported");
    if (dim < 1) throw std::invalid_argument("sparse: dim must be >= 1");
    for (const Term& term : terms_) {
        if (static_cast<int>(term.index.size()) != modes)
            throw std::invalid_argument("sparse: tuple length != modes");
        for (std::size_t k = 0; k < term.index.size(); ++k) {
            if (term.index[k] < 0 || term.index[k] >= dim)
                throw std::invalid_argument("sparse: index out of range");
            if (k > 0 && term.index[k] < term.index[k - 1])
                throw std::invalid_argument("sparse: tuple not non-decreasing");
        }
    }
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.index < b.index; });
    for (std::size_t i = 1; i < terms_.size(); ++i) {
        if (terms_[i].index == terms_[i - 1].index)
            throw std::invalid_argument("sparse: duplicate canonical tuple");
    }
}

// ---------------------------------------------------------------------------
// RankOnePlusNoise
// ---------------------------------------------------------------------------

RankOnePlusNoise::RankOnePlusNoise(double lambda, Eigen::VectorXd direction,
                                   SymTensorSparse noise)
    : lambda_(lambda), direction_(std::move(direction)), noise_(std::move(noise)) {
    if (direction_.size() != noise_.dim())
        throw std::invalid_argument("rank-one: direction/noise dimension mismatch");
    if (std::abs(direction_.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("rank-one: direction must be unit length");
}

// ---------------------------------------------------------------------------
// Dense contraction: sequential last-axis reduction against x. After
// m - r reductions the working buffer holds the r-mode result.
// ---------------------------------------------------------------------------

namespace {

std::vector<double> reduce_axes(const SymTensorDense& t, const Eigen::VectorXd& x,
                                int target_modes) {
    check_dim(t.dim(), x, "contract");
    const int n = t.dim();
    std::vector<double> buf = t.entries();
    for (int mode = t.modes(); mode > target_modes; --mode) {
        const std::size_t outer = buf.size() / static_cast<std::size_t>(n);
        std::vector<double> next(outer);
        for (std::size_t i = 0; i < outer; ++i) {
            const double* row = buf.data() + i * static_cast<std::size_t>(n);
            double sum = 0.0;
            for (int j = 0; j < n; ++j) sum += row[j] * x[j];
            next[i] = sum;
        }
        buf = std::move(next);
    }
    return buf;
}

}  // namespace

double contract_scalar(const SymTensorDense& t, const Eigen::VectorXd& x) {
    return reduce_axes(t, x, 0)[0];
}

Eigen::VectorXd contract_vector(const SymTensorDense& t, const Eigen::VectorXd& x) {
    const std::vector<double> buf = reduce_axes(t, x, 1);
    return Eigen::Map<const Eigen::VectorXd>(buf.data(), t.dim());
}

Eigen::MatrixXd contract_matrix(const SymTensorDense& t, const Eigen::VectorXd& x) {
    if (t.modes() < 2)
        throw std::invalid_argument("contract_matrix: needs modes >= 2");
    const std::vector<double> buf = reduce_axes(t, x, 2);
    const int n = t.dim();
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = buf[static_cast<std::size_t>(i) * n + j];
    return out;
}

// ---------------------------------------------------------------------------
// Sparse contraction. A canonical term with index multiset S contributes
// through every distinct arrangement of S. All arrangements share the
// same product of x over the contracted slots once the free slots are
// fixed, so the per-term work is: choose which indices sit in the free
// slots, multiply by the count of arrangements of the remainder.
//
// Counts live in fixed-size stack buffers; these loops sit inside every
// solver iteration.
// ---------------------------------------------------------------------------

namespace {

constexpr int kMaxModes = 20;

struct TermCounts {
    int index[kMaxModes];
    int count[kMaxModes];
    int distinct = 0;
};

TermCounts compress(const std::vector<int>& sorted_index) {
    TermCounts c;
    for (int i : sorted_index) {
        if (c.distinct > 0 && c.index[c.distinct - 1] == i) {
            ++c.count[c.distinct - 1];
        } else {
            c.index[c.distinct] = i;
            c.count[c.distinct] = 1;
            ++c.distinct;
        }
    }
    return c;
}

double product_over_counts(const TermCounts& c, const Eigen::VectorXd& x) {
    double p = 1.0;
    for (int k = 0; k < c.distinct; ++k) p *= detail::ipow(x[c.index[k]], c.count[k]);
    return p;
}

double arrangements(int slots, const TermCounts& c) {
    int positive[kMaxModes];
    int used = 0;
    for (int k = 0; k < c.distinct; ++k)
        if (c.count[k] > 0) positive[used++] = c.count[k];
    return detail::multinomial(slots, std::span<const int>(positive, used));
}

}  // namespace

double contract_scalar(const SymTensorSparse& t, const Eigen::VectorXd& x) {
    check_dim(t.dim(), x, "contract");
    double sum = 0.0;
    for (const auto& term : t.terms()) {
        const TermCounts counts = compress(term.index);
        sum += term.value * arrangements(t.modes(), counts) *
               product_over_counts(counts, x);
    }
    return sum;
}

Eigen::VectorXd contract_vector(const SymTensorSparse& t, const Eigen::VectorXd& x) {
    check_dim(t.dim(), x, "contract");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(t.dim());
    for (const auto& term : t.terms()) {
        TermCounts counts = compress(term.index);
        for (int k = 0; k < counts.distinct; ++k) {
            --counts.count[k];  // this index occupies the free slot
            const double w = arrangements(t.modes() - 1, counts);
            out[counts.index[k]] +=
                term.value * w * product_over_counts(counts, x);
            ++counts.count[k];
        }
    }
    return out;
}

Eigen::MatrixXd contract_matrix(const SymTensorSparse& t, const Eigen::VectorXd& x) {
    check_dim(t.dim(), x, "contract");
    const int n = t.dim();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (const auto& term : t.terms()) {
        TermCounts counts = compress(term.index);
        for (int a = 0; a < counts.distinct; ++a) {
            for (int b = a; b < counts.distinct; ++b) {
                if (a == b && counts.count[a] < 2) continue;
                --counts.count[a];
                --counts.count[b];
                const double w = arrangements(t.modes() - 2, counts);
                const double v = term.value * w * product_over_counts(counts, x);
                const int i = counts.index[a];
                const int j = counts.index[b];
                out(i, j) += v;
                if (i != j) out(j, i) += v;
                ++counts.count[a];
                ++counts.count[b];
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Structured contraction: lambda (a.x)^(m-r) a^(x)r + noise x^(m-r).
// ---------------------------------------------------------------------------

double contract_scalar(const RankOnePlusNoise& t, const Eigen::VectorXd& x) {
    check_dim(t.dim(), x, "contract");
    const double ax = t.direction().dot(x);
    return t.lambda() * detail::ipow(ax, t.modes()) + contract_scalar(t.noise(), x);
}

Eigen::VectorXd contract_vector(const RankOnePlusNoise& t, const Eigen::VectorXd& x) {
    check_dim(t.dim(), x, "contract");
    const double ax = t.direction().dot(x);
    return t.lambda() * detail::ipow(ax, t.modes() - 1) * t.direction() +
           contract_vector(t.noise(), x);
}

Eigen::MatrixXd contract_matrix(const RankOnePlusNoise& t, const Eigen::VectorXd& x) {
    check_dim(t.dim(), x, "contract");
    const double ax = t.direction().dot(x);
    return t.lambda() * detail::ipow(ax, t.modes() - 2) * t.direction() *
               t.direction().transpose() +
           contract_matrix(t.noise(), x);
}

// ---------------------------------------------------------------------------
// Materialization
// ---------------------------------------------------------------------------

SymTensorDense densify(const SymTensorSparse& t, std::size_t budget) {
    checked_entry_count(t.modes(), t.dim(), budget);
    SymTensorDense out(t.modes(), t.dim());
    std::vector<int> perm;
    for (const auto& term : t.terms()) {
        perm = term.index;  // sorted, so next_permutation visits the orbit once
        do {
            out.at(perm) = term.value;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return out;
}

SymTensorDense densify(const RankOnePlusNoise& t, std::size_t budget) {
    SymTensorDense out = densify(t.noise(), budget);
    const Eigen::VectorXd& a = t.direction();
    detail::for_each_index(t.modes(), t.dim(), [&](std::span<const int> idx) {
        double p = t.lambda();
        for (int i : idx) p *= a[i];
        out.at(idx) += p;
    });
    return out;
}

SymTensorSparse sparsify(const SymTensorDense& t, double tol) {
    std::vector<SymTensorSparse::Term> terms;
    std::vector<int> idx(t.modes(), 0);
    // Walk canonical (non-decreasing) tuples only.
    while (true) {
        const double v = t.at(idx);
        if (std::abs(v) > tol) terms.push_back({idx, v});
        int pos = t.modes() - 1;
        while (pos >= 0 && idx[pos] == t.dim() - 1) --pos;
        if (pos < 0) break;
        const int next = idx[pos] + 1;
        for (int k = pos; k < t.modes(); ++k) idx[k] = next;
    }
    return SymTensorSparse(t.modes(), t.dim(), std::move(terms));
}

// ---------------------------------------------------------------------------
// Shift bounds
// ---------------------------------------------------------------------------

double beta_hat(const SymTensorDense& t) {
    double sum = 0.0;
    for (double v : t.entries()) sum += std::abs(v);
    return (t.modes() - 1) * sum;
}

double beta_hat(const SymTensorSparse& t) {
    double sum = 0.0;
    for (const auto& term : t.terms())
        sum += detail::orbit_size(term.index) * std::abs(term.value);
    return (t.modes() - 1) * sum;
}

double beta_hat(const RankOnePlusNoise& t) {
    // Entrywise sum of |lambda a_i1...a_im + e| = |lambda| (sum|a_i|)^m,
    // corrected on the orbits where the noise overlaps the rank-one part.
    const Eigen::VectorXd& a = t.direction();
    double sum = std::abs(t.lambda()) *
                 detail::ipow(a.cwiseAbs().sum(), t.modes());
    for (const auto& term : t.noise().terms()) {
        double rank_one_entry = t.lambda();
        for (int i : term.index) rank_one_entry *= a[i];
        sum += detail::orbit_size(term.index) *
               (std::abs(rank_one_entry + term.value) - std::abs(rank_one_entry));
    }
    return (t.modes() - 1) * sum;
}

BetaBracket beta_estimate(const RankOnePlusNoise& t, int samples,
                          std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("beta_estimate: samples >= 1");
    const std::vector<Eigen::VectorXd> poles = {t.direction(), -t.direction()};
    return {detail::beta_lower_from_samples(t, samples, seed, poles), beta_hat(t)};
}

}  // namespace symtensor
