#pragma once

#include <string>

#include "symtensor/tensor.hpp"

namespace symtensor {

/// Parameters of the planted-rank-one noise model: a weight lambda > 0
/// on a unit direction, mode count, dimension, and an upper bound on the
/// spectral shift bound of the noise term (beta_hat of the noise is the
/// usual choice; a tighter sampled estimate is also valid).
struct NoiseModelParams {
    double lambda = 1.0;
    int modes = 4;
    int dim = 100;
    double beta_noise = 0.0;
};

/// Interval for the magnitude of a principal eigenvalue and a lower
/// bound on |cos theta|^m, theta being the angle between the planted
/// direction and a principal eigenvector. The angle bound is vacuous
/// (no information) once it drops to zero or below; it is reported
/// as-is, never clamped.
struct PrincipalBounds {
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    double cos_m_lo = 0.0;
    bool vacuous = false;
};

PrincipalBounds principal_perturbation_bounds(const NoiseModelParams& p);

/// Threshold epsilon^m + beta/(m-1). A Rayleigh-quotient magnitude at or
/// above it certifies |a.x| >= epsilon; below it certifies nothing.
double alignment_certificate_threshold(const NoiseModelParams& p, double epsilon);
bool alignment_certificate(const NoiseModelParams& p, double rayleigh_value,
                           double epsilon);

/// Chebyshev tail bound min(1, 1/(n epsilon^2)) on Pr(|a.x| > epsilon)
/// for x uniform on the unit sphere in R^n.
double random_alignment_tail(int n, double epsilon);

/// Sufficient shift for a negative-stable eigenpair (lambda_p, angle
/// theta to the planted direction) to be a stable fixed point:
///   alpha > (-lambda_p + (m-1) lambda |sin cos^(m-2)| + beta) / 2.
double stable_shift_threshold(const NoiseModelParams& p, double lambda_p,
                              double sin_theta, double cos_theta);

/// Composition of the perturbation bounds with the threshold above,
/// taking the worst feasible (lambda_p, theta): lambda_p at the bottom
/// of the eigenvalue interval and theta as far from zero as the angle
/// bound allows (unbounded when the angle bound is vacuous).
double worst_case_stable_shift(const NoiseModelParams& p);

/// Same threshold maximized over all angles with lambda_p = 0: an
/// envelope over eigenpairs unrelated to the planted direction.
double spurious_stable_shift_envelope(const NoiseModelParams& p);

/// max over theta of |sin theta cos^(m-2) theta|.
double peak_mixed_angle_term(int modes);

/// Noise-free limits of the stability threshold: -lambda/2 for the
/// planted pair, lambda (m/2 - 1) for the large-angle regime.
double small_noise_principal_shift(double lambda);
double small_noise_spurious_shift(double lambda, int modes);

/// For a pure rank-one tensor with weight lambda > 0 and start
/// alignment gamma (gamma^(m-2) > 0 required): any shift above
/// -lambda gamma^(m-2) / 2 strictly improves the alignment in one step.
double improvement_shift_threshold(double lambda, double gamma, int modes);

/// Closed-form alignment after one shifted power step on a pure
/// rank-one tensor:
///   a.x2 = (lambda g^(m-1) + alpha g) /
///          sqrt((lambda g^(m-1) + alpha g)^2 + alpha^2 (1 - g^2)).
double rank_one_step_alignment(double lambda, double gamma, int modes,
                               double alpha);

/// For the noise model with even mode count and lambda > 0, any shift
/// above beta_noise yields a monotone, convergent iteration. Rejects
/// odd mode counts.
double even_mode_convergence_shift(const NoiseModelParams& p);

/// Reference thresholds reported alongside the computed ones for the
/// n=100, m=4, beta=0.03 benchmark; kept for comparison, not enforced.
inline constexpr double kReferencePrincipalShift = -0.3365;
inline constexpr double kReferenceSpuriousShift = 1.015;

/// Everything the `bounds` command prints, in one struct.
struct ShiftReport {
    NoiseModelParams params;
    PrincipalBounds principal;
    double epsilon = 0.9;
    double certificate_threshold = 0.0;
    double tail_bound = 0.0;
    double gamma = 1.0;
    double improvement_threshold = 0.0;
    double worst_case_principal = 0.0;
    double spurious_envelope = 0.0;
    double small_noise_principal = 0.0;
    double small_noise_spurious = 0.0;
    double even_mode_shift = 0.0;  // NaN when modes is odd
    double reference_principal = kReferencePrincipalShift;
    double reference_spurious = kReferenceSpuriousShift;
};

ShiftReport make_shift_report(const NoiseModelParams& p, double epsilon = 0.9,
                              double gamma = 1.0);
std::string format_shift_report(const ShiftReport& r);

}  // namespace symtensor
