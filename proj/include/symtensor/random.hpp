#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace symtensor {

/// Mixes a salt into a seed (splitmix64 finalizer). Used to derive
/// independent child seeds from a master seed, e.g. one per trial of a
/// sweep, so parallel and serial execution see the same streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic random stream: mt19937_64 engine with explicit
/// variate transforms. The standard pins the engine output bit-exactly;
/// the transforms below avoid the implementation-defined std::
/// distributions so that a fixed seed reproduces identical values.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi] inclusive, by rejection (no modulo bias).
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return lo + static_cast<int>(v % span);
    }

    /// Standard normal via Box-Muller; generates pairs, caches the second.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log1p(-u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Uniform draw from the unit sphere in R^n (normalized isotropic
/// Gaussian). The result has unit norm to within 1e-12.
inline Eigen::VectorXd sample_sphere(int n, RandomStream& rng) {
    if (n < 1) throw std::invalid_argument("sample_sphere: n must be >= 1");
    Eigen::VectorXd x(n);
    double norm2 = 0.0;
    do {
        for (int i = 0; i < n; ++i) x[i] = rng.normal();
        norm2 = x.squaredNorm();
    } while (norm2 == 0.0);
    return x / std::sqrt(norm2);
}

inline Eigen::VectorXd sample_sphere(int n, std::uint64_t seed) {
    RandomStream rng(seed);
    return sample_sphere(n, rng);
}

}  // namespace symtensor
