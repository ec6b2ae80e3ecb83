#pragma once

#include <Eigen/Core>

#include <functional>
#include <stdexcept>
#include <vector>

#include "symtensor/tensor.hpp"

namespace symtensor::oracle {

// Brute-force reference implementations for cross-checking the library.
// Nothing here calls the optimized paths it is used to validate.

/// Literal nested summation of the tensor-vector product over all
/// dim^modes tuples, with no symmetry exploitation. Dense input only.
LowModeResult naive_contract(const SymTensorDense& t, const Eigen::VectorXd& x,
                             int r);

/// Central finite differences of a scalar field.
Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double step);
Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& x, double step);

/// Finite differences of the homogeneous form t x^m, evaluated through
/// the naive summation above (independent of the contraction kernels).
Eigen::VectorXd fd_gradient(const SymTensorDense& t, const Eigen::VectorXd& x,
                            double step = 1e-5);
Eigen::MatrixXd fd_hessian(const SymTensorDense& t, const Eigen::VectorXd& x,
                           double step = 1e-4);

struct GridSearchResult {
    Eigen::VectorXd best_x;
    double best_value = 0.0;   // homogeneous form at best_x (signed)
    double resolution = 0.0;   // angular spacing of the grid
};

/// Lipschitz-style bound on how far the grid optimum can sit below the
/// true optimum: resolution * m * beta_hat / (m - 1).
double grid_value_error(double resolution, double beta_hat_value, int modes);

namespace detail {

/// Deterministic quasi-uniform sphere covers: angle grid (n = 2),
/// Fibonacci lattice (n = 3), hyperspherical product grid (n = 4).
std::vector<Eigen::VectorXd> sphere_grid(int n, double resolution);

}  // namespace detail

/// Scans a sphere grid for the extreme of the homogeneous form.
/// `absolute` selects |value| (principal search) vs signed maximum.
template <class Tensor>
GridSearchResult grid_search(const Tensor& t, double resolution, bool absolute) {
    if (t.dim() > 4)
        throw std::invalid_argument("grid_search: dim must be <= 4");
    if (resolution <= 0.0)
        throw std::invalid_argument("grid_search: resolution must be > 0");
    GridSearchResult result;
    result.resolution = resolution;
    double best_key = -1.0;
    for (const Eigen::VectorXd& x : detail::sphere_grid(t.dim(), resolution)) {
        const double value = contract_scalar(t, x);
        const double key = absolute ? std::abs(value) : value;
        if (key > best_key) {
            best_key = key;
            result.best_value = value;
            result.best_x = x;
        }
    }
    return result;
}

/// Largest-|value| point of the homogeneous form (principal eigenpair
/// up to grid error).
template <class Tensor>
GridSearchResult grid_search_principal(const Tensor& t, double resolution = 0.02) {
    return grid_search(t, resolution, /*absolute=*/true);
}

/// Largest signed value (maximum of the generalized Rayleigh quotient).
template <class Tensor>
GridSearchResult grid_search_max(const Tensor& t, double resolution = 0.02) {
    return grid_search(t, resolution, /*absolute=*/false);
}

}  // namespace symtensor::oracle
