#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "symtensor/tensor.hpp"

namespace symtensor {

/// Recipe for a random sparse symmetric noise tensor: draw nnz_draws
/// index tuples uniformly over all dim^modes tuples, canonicalize,
/// fill with standard normals, and rescale so beta_hat hits the target
/// exactly.
struct NoiseGenSpec {
    int dim = 100;
    int modes = 4;
    int nnz_draws = 500;
    double beta_hat_target = 0.03;
    std::uint64_t seed = 0;
};

SymTensorSparse random_sparse_noise(const NoiseGenSpec& spec);

/// lambda * a^(x)m with no noise; a is normalized here (lambda is kept
/// as given, not rescaled).
RankOnePlusNoise make_rank_one(double lambda, const Eigen::VectorXd& a, int modes);

/// Covariance matrices for the degree-4 sphere-maximization problem
///   max over unit x of sum_t (x' A_t x)^2.
struct Tvca2Input {
    std::vector<Eigen::MatrixXd> matrices;
};

/// Symmetric 4-tensor whose homogeneous form equals
/// sum_t (x' A_t x)^2, built by symmetrizing sum_t A_t (x) A_t over all
/// index permutations. Requires symmetric inputs of equal dimension and
/// dim^4 within the dense budget.
SymTensorDense build_tvca2(const Tvca2Input& input,
                           std::size_t budget = kDefaultDenseBudget);

}  // namespace symtensor
