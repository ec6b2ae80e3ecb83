#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symtensor/random.hpp"
#include "symtensor/tensor.hpp"

namespace symtensor {

/// Raised when the shifted update vector vanishes and the iteration has
/// no defined next point.
struct DegenerateStepError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Second-order character of an eigenpair: local maximum of the
/// generalized Rayleigh quotient (negative stable), local minimum
/// (positive stable), saddle (unstable), or not determined.
enum class Stability { NegativeStable, PositiveStable, Unstable, Unclassified };

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::NegativeStable: return "negative-stable";
        case Stability::PositiveStable: return "positive-stable";
        case Stability::Unstable: return "unstable";
        default: return "unclassified";
    }
}

struct SshopmConfig {
    double alpha = 0.0;        // shift parameter
    double tol = 1e-10;        // stop when successive quotients differ by <= tol
    int max_iters = 1000;
    std::uint64_t seed = 0;    // start-vector seed when no start is supplied
    double residual_gate = 1e-6;   // required to attempt classification
    double stability_margin = 1e-9;
};

struct EigenPair {
    Eigen::VectorXd x;
    double lambda = 0.0;
    double residual = 0.0;  // ||t x^(m-1) - lambda x||
    Stability stability = Stability::Unclassified;
};

struct TracePoint {
    int iteration = 0;
    double lambda = 0.0;
    double alignment = std::numeric_limits<double>::quiet_NaN();  // |a.x| if a given
};

struct SolveTrace {
    std::vector<TracePoint> points;
    bool converged = false;
    int iterations = 0;
};

struct SolveResult {
    EigenPair pair;
    SolveTrace trace;
};

struct StabilityReport {
    Stability kind = Stability::Unclassified;
    bool stable_fixed_point = false;  // spectral ratio < 1 - margin
    double spectral_ratio = std::numeric_limits<double>::quiet_NaN();
    std::string note;
};

/// One shifted power update: normalize(t x^(m-1) + alpha x).
template <class Tensor>
Eigen::VectorXd sshopm_step(const Tensor& t, const Eigen::VectorXd& x,
                            double alpha) {
    Eigen::VectorXd update = contract_vector(t, x) + alpha * x;
    const double norm = update.norm();
    if (norm <= 1e-14)
        throw DegenerateStepError("sshopm_step: update vector vanishes");
    return update / norm;
}

namespace detail {

/// Orthonormal basis of the complement of unit x, built by deterministic
/// Gram-Schmidt over the standard basis with the largest-|x_i| axis
/// dropped (ties broken toward the smallest index).
inline Eigen::MatrixXd complement_basis(const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size());
    int drop = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(x[i]) > std::abs(x[drop])) drop = i;
    Eigen::MatrixXd basis(n, n - 1);
    int col = 0;
    for (int axis = 0; axis < n; ++axis) {
        if (axis == drop) continue;
        Eigen::VectorXd v = Eigen::VectorXd::Unit(n, axis);
        v -= x.dot(v) * x;
        for (int c = 0; c < col; ++c) v -= basis.col(c).dot(v) * basis.col(c);
        const double norm = v.norm();
        if (norm <= 1e-13)
            throw std::runtime_error("complement_basis: degenerate basis vector");
        basis.col(col++) = v / norm;
    }
    return basis;
}

}  // namespace detail

/// Classifies a converged eigenpair. The fixed-point test projects
/// y -> ((m-1) y' (t x^(m-2)) y + alpha) / (lambda + alpha) onto the
/// complement of x and requires spectral radius < 1 - margin; the
/// kind compares the projected (m-1) t x^(m-2) block against lambda
/// (below: local maximum, above: local minimum).
template <class Tensor>
StabilityReport classify_stability(const Tensor& t, const EigenPair& pair,
                                   double alpha, double margin = 1e-9) {
    if (pair.residual > 1e-6)
        throw std::invalid_argument("classify_stability: residual above 1e-6 gate");
    StabilityReport report;
    const double shifted = pair.lambda + alpha;
    if (std::abs(shifted) <= 1e-12 * (1.0 + std::abs(pair.lambda) + std::abs(alpha))) {
        report.note = "lambda + alpha is numerically zero";
        return report;
    }
    const int n = static_cast<int>(pair.x.size());
    if (n == 1) {
        // No complement directions; the fixed point is trivially stable.
        report.kind = Stability::NegativeStable;
        report.stable_fixed_point = true;
        report.spectral_ratio = 0.0;
        return report;
    }
    const Eigen::MatrixXd basis = detail::complement_basis(pair.x);
    const Eigen::MatrixXd projected =
        (t.modes() - 1) *
        (basis.transpose() * contract_matrix(t, pair.x) * basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(projected,
                                                          Eigen::EigenvaluesOnly);
    const Eigen::VectorXd eigs = solver.eigenvalues();

    report.spectral_ratio =
        ((eigs.array() + alpha) / shifted).abs().maxCoeff();
    report.stable_fixed_point = report.spectral_ratio < 1.0 - margin;
    if (eigs.maxCoeff() < pair.lambda)
        report.kind = Stability::NegativeStable;
    else if (eigs.minCoeff() > pair.lambda)
        report.kind = Stability::PositiveStable;
    else
        report.kind = Stability::Unstable;
    return report;
}

/// Runs the shifted power iteration until successive Rayleigh quotients
/// agree to cfg.tol (and the eigenproblem residual has dropped below
/// cfg.residual_gate, so a pair labeled converged really is an
/// eigenpair) or max_iters is reached. Each iterate costs one
/// tensor-vector contraction: the quotient is x.g and the residual
/// ||g - (x.g) x|| for g = t x^(m-1), which is also the step direction.
/// The final eigenvalue is recomputed from the last iterate. When
/// alignment_ref is given, each trace point records |alignment_ref . x_k|.
template <class Tensor>
SolveResult sshopm_solve(const Tensor& t, const SshopmConfig& cfg,
                         std::optional<Eigen::VectorXd> start = std::nullopt,
                         const Eigen::VectorXd* alignment_ref = nullptr) {
    if (cfg.tol <= 0.0) throw std::invalid_argument("sshopm: tol must be > 0");
    if (cfg.max_iters < 1)
        throw std::invalid_argument("sshopm: max_iters must be >= 1");

    Eigen::VectorXd x;
    if (start) {
        if (start->size() != t.dim())
            throw std::invalid_argument("sshopm: start vector dimension mismatch");
        if (std::abs(start->norm() - 1.0) > kUnitNormTol)
            throw std::invalid_argument("sshopm: start vector must be unit length");
        x = *start;
    } else {
        x = sample_sphere(t.dim(), cfg.seed);
    }

    SolveResult result;
    auto record = [&](int k, double lambda) {
        TracePoint p;
        p.iteration = k;
        p.lambda = lambda;
        if (alignment_ref) p.alignment = std::abs(alignment_ref->dot(x));
        result.trace.points.push_back(p);
    };

    Eigen::VectorXd g = contract_vector(t, x);
    double lambda_prev = x.dot(g);
    record(0, lambda_prev);
    for (int k = 1; k <= cfg.max_iters; ++k) {
        Eigen::VectorXd update = g + cfg.alpha * x;
        const double norm = update.norm();
        if (norm <= 1e-14)
            throw DegenerateStepError("sshopm_step: update vector vanishes");
        x = update / norm;

        g = contract_vector(t, x);
        const double lambda = x.dot(g);
        record(k, lambda);
        result.trace.iterations = k;
        if (std::abs(lambda - lambda_prev) <= cfg.tol &&
            (g - lambda * x).norm() <= cfg.residual_gate) {
            result.trace.converged = true;
            break;
        }
        lambda_prev = lambda;
    }

    x /= x.norm();
    EigenPair& pair = result.pair;
    pair.x = x;
    pair.lambda = contract_scalar(t, x);
    pair.residual = (contract_vector(t, x) - pair.lambda * x).norm();
    if (result.trace.converged && pair.residual <= cfg.residual_gate) {
        pair.stability =
            classify_stability(t, pair, cfg.alpha, cfg.stability_margin).kind;
    }
    return result;
}

}  // namespace symtensor
