#include "symtensor/oracle.hpp"

#include <cmath>

namespace symtensor::oracle {

LowModeResult naive_contract(const SymTensorDense& t, const Eigen::VectorXd& x,
                             int r) {
    if (r < 0 || r > 2 || r > t.modes())
        throw std::invalid_argument("naive_contract: r must be in {0,1,2} and <= modes");
    if (x.size() != t.dim())
        throw std::invalid_argument("naive_contract: dimension mismatch");
    const int n = t.dim();
    double scalar = 0.0;
    Eigen::VectorXd vec = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(n, n);
    symtensor::detail::for_each_index(t.modes(), n, [&](std::span<const int> idx) {
        double product = t.at(idx);
        for (int k = r; k < t.modes(); ++k) product *= x[idx[k]];
        switch (r) {
            case 0: scalar += product; break;
            case 1: vec[idx[0]] += product; break;
            default: mat(idx[0], idx[1]) += product; break;
        }
    });
    switch (r) {
        case 0: return LowModeResult::scalar(scalar);
        case 1: return LowModeResult::vector(std::move(vec));
        default: return LowModeResult::matrix(std::move(mat));
    }
}

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double step) {
    if (step <= 0.0) throw std::invalid_argument("fd_gradient: step must be > 0");
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd probe = x;
    for (int i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + step;
        const double hi = f(probe);
        probe[i] = x[i] - step;
        const double lo = f(probe);
        probe[i] = x[i];
        g[i] = (hi - lo) / (2.0 * step);
    }
    return g;
}

Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& x, double step) {
    if (step <= 0.0) throw std::invalid_argument("fd_hessian: step must be > 0");
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd h(n, n);
    Eigen::VectorXd probe = x;
    const double center = f(x);
    for (int i = 0; i < n; ++i) {
        probe[i] = x[i] + step;
        const double hi = f(probe);
        probe[i] = x[i] - step;
        const double lo = f(probe);
        probe[i] = x[i];
        h(i, i) = (hi - 2.0 * center + lo) / (step * step);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double quad[4];
            const double si[4] = {step, step, -step, -step};
            const double sj[4] = {step, -step, step, -step};
            for (int q = 0; q < 4; ++q) {
                probe[i] = x[i] + si[q];
                probe[j] = x[j] + sj[q];
                quad[q] = f(probe);
                probe[i] = x[i];
                probe[j] = x[j];
            }
            h(i, j) = (quad[0] - quad[1] - quad[2] + quad[3]) / (4.0 * step * step);
            h(j, i) = h(i, j);
        }
    }
    return h;
}

namespace {

double naive_scalar(const SymTensorDense& t, const Eigen::VectorXd& x) {
    return naive_contract(t, x, 0).as_scalar();
}

}  // namespace

Eigen::VectorXd fd_gradient(const SymTensorDense& t, const Eigen::VectorXd& x,
                            double step) {
    return fd_gradient([&](const Eigen::VectorXd& p) { return naive_scalar(t, p); },
                       x, step);
}

Eigen::MatrixXd fd_hessian(const SymTensorDense& t, const Eigen::VectorXd& x,
                           double step) {
    return fd_hessian([&](const Eigen::VectorXd& p) { return naive_scalar(t, p); },
                      x, step);
}

double grid_value_error(double resolution, double beta_hat_value, int modes) {
    return resolution * modes * beta_hat_value / (modes - 1);
}

namespace detail {

std::vector<Eigen::VectorXd> sphere_grid(int n, double resolution) {
    constexpr double kPi = 3.14159265358979323846;
    std::vector<Eigen::VectorXd> points;
    switch (n) {
        case 1: {
            points.push_back(Eigen::VectorXd::Constant(1, 1.0));
            points.push_back(Eigen::VectorXd::Constant(1, -1.0));
            break;
        }
        case 2: {
            const int steps = std::max(4, static_cast<int>(std::ceil(2.0 * kPi / resolution)));
            for (int i = 0; i < steps; ++i) {
                const double theta = 2.0 * kPi * i / steps;
                Eigen::VectorXd x(2);
                x << std::cos(theta), std::sin(theta);
                points.push_back(std::move(x));
            }
            break;
        }
        case 3: {
            // Fibonacci lattice; mean spacing ~ sqrt(4 pi / count).
            const int count =
                std::max(16, static_cast<int>(std::ceil(4.0 * kPi / (resolution * resolution))));
            const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
            points.reserve(count);
            for (int i = 0; i < count; ++i) {
                const double z = 1.0 - 2.0 * (i + 0.5) / count;
                const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
                const double phi = golden_angle * i;
                Eigen::VectorXd x(3);
                x << rad * std::cos(phi), rad * std::sin(phi), z;
                points.push_back(std::move(x));
            }
            break;
        }
        case 4: {
            // Product grid in hyperspherical angles.
            const int s1 = std::max(3, static_cast<int>(std::ceil(kPi / resolution)));
            const int s2 = s1;
            const int s3 = std::max(4, static_cast<int>(std::ceil(2.0 * kPi / resolution)));
            points.reserve(static_cast<std::size_t>(s1) * s2 * s3);
            for (int i = 0; i <= s1; ++i) {
                const double t1 = kPi * i / s1;
                for (int j = 0; j <= s2; ++j) {
                    const double t2 = kPi * j / s2;
                    for (int k = 0; k < s3; ++k) {
                        const double t3 = 2.0 * kPi * k / s3;
                        Eigen::VectorXd x(4);
                        x << std::cos(t1), std::sin(t1) * std::cos(t2),
                            std::sin(t1) * std::sin(t2) * std::cos(t3),
                            std::sin(t1) * std::sin(t2) * std::sin(t3);
                        points.push_back(std::move(x));
                    }
                }
            }
            break;
        }
        default:
            throw std::invalid_argument("sphere_grid: n must be in 1..4");
    }
    return points;
}

}  // namespace detail

}  // namespace symtensor::oracle
