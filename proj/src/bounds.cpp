#include "symtensor/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace symtensor {

namespace {

void check_params(const NoiseModelParams& p) {
    if (p.modes < 3)
        throw std::invalid_argument("noise model: modes must be >= 3");
    if (p.beta_noise < 0.0)
        throw std::invalid_argument("noise model: beta_noise must be >= 0");
    if (p.lambda <= 0.0)
        throw std::invalid_argument("noise model: lambda must be > 0");
}

}  // namespace

PrincipalBounds principal_perturbation_bounds(const NoiseModelParams& p) {
    check_params(p);
    const double margin = p.beta_noise / (p.modes - 1);
    PrincipalBounds b;
    b.lambda_lo = std::abs(p.lambda) - margin;
    b.lambda_hi = std::abs(p.lambda) + margin;
    b.cos_m_lo = 1.0 - 2.0 * p.beta_noise / (std::abs(p.lambda) * (p.modes - 1));
    b.vacuous = b.cos_m_lo <= 0.0;
    return b;
}

double alignment_certificate_threshold(const NoiseModelParams& p, double epsilon) {
    check_params(p);
    if (epsilon <= 0.0)
        throw std::invalid_argument("certificate: epsilon must be > 0");
    return detail::ipow(epsilon, p.modes) + p.beta_noise / (p.modes - 1);
}

bool alignment_certificate(const NoiseModelParams& p, double rayleigh_value,
                           double epsilon) {
    return std::abs(rayleigh_value) >= alignment_certificate_threshold(p, epsilon);
}

double random_alignment_tail(int n, double epsilon) {
    if (n < 1) throw std::invalid_argument("tail bound: n must be >= 1");
    if (epsilon <= 0.0)
        throw std::invalid_argument("tail bound: epsilon must be > 0");
    return std::min(1.0, 1.0 / (n * epsilon * epsilon));
}

double stable_shift_threshold(const NoiseModelParams& p, double lambda_p,
                              double sin_theta, double cos_theta) {
    check_params(p);
    if (std::abs(sin_theta * sin_theta + cos_theta * cos_theta - 1.0) > 1e-9)
        throw std::invalid_argument("stable shift: sin/cos must describe an angle");
    const double mixed =
        std::abs(sin_theta * detail::ipow(cos_theta, p.modes - 2));
    return (-lambda_p + (p.modes - 1) * p.lambda * mixed + p.beta_noise) / 2.0;
}

double peak_mixed_angle_term(int modes) {
    if (modes < 3) throw std::invalid_argument("peak mixed term: modes must be >= 3");
    // Stationary at sin^2 = 1/(m-1).
    const double m = modes;
    return (1.0 / std::sqrt(m - 1.0)) *
           std::pow((m - 2.0) / (m - 1.0), (m - 2.0) / 2.0);
}

double worst_case_stable_shift(const NoiseModelParams& p) {
    const PrincipalBounds b = principal_perturbation_bounds(p);
    double mixed = peak_mixed_angle_term(p.modes);
    if (!b.vacuous) {
        const double cos_lb = std::pow(b.cos_m_lo, 1.0 / p.modes);
        const double sin_ub = std::sqrt(std::max(0.0, 1.0 - cos_lb * cos_lb));
        // The mixed term grows with theta until sin^2 = 1/(m-1); the
        // feasible angle is capped, so evaluate at whichever is smaller.
        if (sin_ub * sin_ub <= 1.0 / (p.modes - 1.0))
            mixed = sin_ub * detail::ipow(cos_lb, p.modes - 2);
    }
    return (-b.lambda_lo + (p.modes - 1) * p.lambda * mixed + p.beta_noise) / 2.0;
}

double spurious_stable_shift_envelope(const NoiseModelParams& p) {
    check_params(p);
    return ((p.modes - 1) * p.lambda * peak_mixed_angle_term(p.modes) +
            p.beta_noise) /
           2.0;
}

double small_noise_principal_shift(double lambda) { return -lambda / 2.0; }

double small_noise_spurious_shift(double lambda, int modes) {
    if (modes < 3)
        throw std::invalid_argument("spurious shift: modes must be >= 3");
    return lambda * (modes - 2) / 2.0;
}

double improvement_shift_threshold(double lambda, double gamma, int modes) {
    if (lambda <= 0.0)
        throw std::invalid_argument("improvement shift: lambda must be > 0");
    if (modes < 3)
        throw std::invalid_argument("improvement shift: modes must be >= 3");
    const double g = detail::ipow(gamma, modes - 2);
    if (g <= 0.0)
        throw std::invalid_argument("improvement shift: gamma^(m-2) must be > 0");
    return -lambda * g / 2.0;
}

double rank_one_step_alignment(double lambda, double gamma, int modes,
                               double alpha) {
    const double along = lambda * detail::ipow(gamma, modes - 1) + alpha * gamma;
    const double across2 = alpha * alpha * (1.0 - gamma * gamma);
    const double norm = std::sqrt(along * along + across2);
    if (norm <= 1e-14)
        throw std::domain_error("rank_one_step_alignment: update vanishes");
    return along / norm;
}

double even_mode_convergence_shift(const NoiseModelParams& p) {
    check_params(p);
    if (p.modes % 2 != 0)
        throw std::invalid_argument(
            "even-mode convergence shift requires an even mode count");
    return p.beta_noise;
}

ShiftReport make_shift_report(const NoiseModelParams& p, double epsilon,
                              double gamma) {
    ShiftReport r;
    r.params = p;
    r.principal = principal_perturbation_bounds(p);
    r.epsilon = epsilon;
    r.certificate_threshold = alignment_certificate_threshold(p, epsilon);
    r.tail_bound = random_alignment_tail(p.dim, epsilon);
    r.gamma = gamma;
    r.improvement_threshold = improvement_shift_threshold(p.lambda, gamma, p.modes);
    r.worst_case_principal = worst_case_stable_shift(p);
    r.spurious_envelope = spurious_stable_shift_envelope(p);
    r.small_noise_principal = small_noise_principal_shift(p.lambda);
    r.small_noise_spurious = small_noise_spurious_shift(p.lambda, p.modes);
    r.even_mode_shift = p.modes % 2 == 0
                            ? even_mode_convergence_shift(p)
                            : std::numeric_limits<double>::quiet_NaN();
    return r;
}

namespace {

// Display precision for the report; file formats use format_double.
std::string disp(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string format_shift_report(const ShiftReport& r) {
    std::ostringstream out;
    out << "model: lambda=" << disp(r.params.lambda) << " m=" << r.params.modes
        << " n=" << r.params.dim << " beta_noise=" << disp(r.params.beta_noise)
        << "\n";
    out << "principal eigenvalue interval: [" << disp(r.principal.lambda_lo)
        << ", " << disp(r.principal.lambda_hi) << "]\n";
    out << "alignment bound: |cos theta|^m >= " << disp(r.principal.cos_m_lo)
        << (r.principal.vacuous ? "  (vacuous)" : "") << "\n";
    out << "certificate threshold (epsilon=" << disp(r.epsilon)
        << "): |quotient| >= " << disp(r.certificate_threshold)
        << " implies |a.x| >= epsilon\n";
    out << "random-start tail bound: Pr(|a.x| > epsilon) <= "
        << disp(r.tail_bound) << "\n";
    out << "one-step improvement shift (gamma=" << disp(r.gamma) << "): alpha > "
        << disp(r.improvement_threshold) << "\n";
    out << "stability shift, worst-case principal: alpha > "
        << disp(r.worst_case_principal) << "\n";
    out << "stability shift, spurious envelope: alpha > "
        << disp(r.spurious_envelope) << "\n";
    out << "small-noise limits: principal " << disp(r.small_noise_principal)
        << ", spurious " << disp(r.small_noise_spurious) << "\n";
    if (r.params.modes % 2 == 0)
        out << "even-mode convergence shift: alpha > " << disp(r.even_mode_shift)
            << "\n";
    out << "reference thresholds (n=100 benchmark): principal "
        << disp(r.reference_principal) << ", spurious "
        << disp(r.reference_spurious) << "\n";
    return out.str();
}

}  // namespace symtensor
