#include "symtensor/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "symtensor/random.hpp"

namespace symtensor {

SymTensorSparse random_sparse_noise(const NoiseGenSpec& spec) {
    if (spec.nnz_draws < 1)
        throw std::invalid_argument("noise spec: nnz_draws must be >= 1");
    if (spec.beta_hat_target <= 0.0)
        throw std::invalid_argument("noise spec: beta_hat_target must be > 0");
    if (spec.dim < 1 || spec.modes < 2)
        throw std::invalid_argument("noise spec: bad dimensions");

    RandomStream rng(spec.seed);
    std::map<std::vector<int>, double> canonical;  // collisions keep first value
    std::vector<int> tuple(spec.modes);
    for (int draw = 0; draw < spec.nnz_draws; ++draw) {
        for (int k = 0; k < spec.modes; ++k)
            tuple[k] = rng.uniform_int(0, spec.dim - 1);
        const double value = rng.normal();
        std::sort(tuple.begin(), tuple.end());
        canonical.emplace(tuple, value);
    }

    std::vector<SymTensorSparse::Term> terms;
    terms.reserve(canonical.size());
    double weighted_abs_sum = 0.0;
    for (const auto& [index, value] : canonical) {
        terms.push_back({index, value});
        weighted_abs_sum += detail::orbit_size(index) * std::abs(value);
    }
    if (weighted_abs_sum <= 0.0)
        throw std::runtime_error("noise generation produced an all-zero tensor");
    const double scale =
        spec.beta_hat_target / ((spec.modes - 1) * weighted_abs_sum);
    for (auto& term : terms) term.value *= scale;
    return SymTensorSparse(spec.modes, spec.dim, std::move(terms));
}

RankOnePlusNoise make_rank_one(double lambda, const Eigen::VectorXd& a, int modes) {
    const double norm = a.norm();
    if (norm <= 0.0)
        throw std::invalid_argument("make_rank_one: direction must be nonzero");
    return RankOnePlusNoise(
        lambda, a / norm,
        SymTensorSparse(modes, static_cast<int>(a.size()), {}));
}

SymTensorDense build_tvca2(const Tvca2Input& input, std::size_t budget) {
    if (input.matrices.empty())
        throw std::invalid_argument("tvca2: at least one matrix required");
    const int n = static_cast<int>(input.matrices.front().rows());
    for (const auto& m : input.matrices) {
        if (m.rows() != n || m.cols() != n)
            throw std::invalid_argument("tvca2: matrices must be n x n, equal sizes");
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument("tvca2: matrices must be symmetric");
    }
    std::size_t entry_count = 1;
    for (int k = 0; k < 4; ++k) {
        if (entry_count > budget / static_cast<std::size_t>(n))
            throw std::invalid_argument("tvca2: dim^4 exceeds dense budget");
        entry_count *= static_cast<std::size_t>(n);
    }

    // Average sum_t A_t (x) A_t over each tuple's distinct arrangements
    // (equivalent to averaging over all 4! permutations), then copy the
    // value across the orbit so symmetry holds exactly.
    SymTensorDense out(4, n);
    std::vector<int> canon(4), perm(4);
    for (canon[0] = 0; canon[0] < n; ++canon[0])
        for (canon[1] = canon[0]; canon[1] < n; ++canon[1])
            for (canon[2] = canon[1]; canon[2] < n; ++canon[2])
                for (canon[3] = canon[2]; canon[3] < n; ++canon[3]) {
                    double sum = 0.0;
                    int arrangements = 0;
                    perm = canon;
                    do {
                        for (const auto& a : input.matrices)
                            sum += a(perm[0], perm[1]) * a(perm[2], perm[3]);
                        ++arrangements;
                    } while (std::next_permutation(perm.begin(), perm.end()));
                    const double value = sum / arrangements;
                    perm = canon;
                    do {
                        out.at(perm) = value;
                    } while (std::next_permutation(perm.begin(), perm.end()));
                }
    return out;
}

}  // namespace symtensor
