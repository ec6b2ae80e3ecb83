#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "symtensor/bounds.hpp"
#include "symtensor/models.hpp"
#include "symtensor/oracle.hpp"
#include "symtensor/random.hpp"

using namespace symtensor;

TEST_CASE("make_rank_one normalizes the direction and keeps the weight") {
    const RankOnePlusNoise t =
        make_rank_one(1.0, Eigen::VectorXd(2.0 * Eigen::VectorXd::Unit(4, 0)), 4);
    CHECK(t.lambda() == 1.0);
    CHECK((t.direction() - Eigen::VectorXd::Unit(4, 0)).norm() == 0.0);
    CHECK(contract_scalar(t, Eigen::VectorXd::Unit(4, 0)) == 1.0);
    CHECK_THROWS_AS(make_rank_one(1.0, Eigen::VectorXd::Zero(3), 4),
                    std::invalid_argument);
}

TEST_CASE("rank-one quotient follows the closed form") {
    RandomStream rng(2);
    const Eigen::VectorXd a = sample_sphere(5, rng);
    const RankOnePlusNoise t = make_rank_one(1.7, a, 3);
    for (int rep = 0; rep < 10; ++rep) {
        const Eigen::VectorXd x = sample_sphere(5, rng);
        CHECK(rayleigh_quotient(t, x) ==
              doctest::Approx(1.7 * std::pow(a.dot(x), 3)).epsilon(1e-12));
    }
}

TEST_CASE("noise generator hits the beta_hat target exactly") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const SymTensorSparse noise = random_sparse_noise({50, 4, 120, 0.03, seed});
        CHECK(std::abs(beta_hat(noise) - 0.03) <= 1e-12 * 0.03);
        for (std::size_t i = 1; i < noise.terms().size(); ++i)
            CHECK(noise.terms()[i - 1].index < noise.terms()[i].index);
    }
}

TEST_CASE("noise generator is deterministic in the seed") {
    const NoiseGenSpec spec{10, 3, 40, 0.5, 987};
    const SymTensorSparse first = random_sparse_noise(spec);
    const SymTensorSparse second = random_sparse_noise(spec);
    REQUIRE(first.terms().size() == second.terms().size());
    for (std::size_t i = 0; i < first.terms().size(); ++i) {
        CHECK(first.terms()[i].index == second.terms()[i].index);
        CHECK(first.terms()[i].value == second.terms()[i].value);  // bitwise
    }
    const SymTensorSparse other = random_sparse_noise({10, 3, 40, 0.5, 988});
    bool identical = first.terms().size() == other.terms().size();
    if (identical)
        for (std::size_t i = 0; i < first.terms().size(); ++i)
            identical = identical && first.terms()[i].value == other.terms()[i].value;
    CHECK_FALSE(identical);
}

TEST_CASE("densified noise is permutation invariant") {
    const SymTensorSparse noise = random_sparse_noise({4, 3, 10, 1.0, 5});
    CHECK(densify(noise).is_symmetric());
}

TEST_CASE("noise generator validates its spec") {
    CHECK_THROWS_AS(random_sparse_noise({10, 4, 0, 0.03, 0}), std::invalid_argument);
    CHECK_THROWS_AS(random_sparse_noise({10, 4, 5, 0.0, 0}), std::invalid_argument);
}

TEST_CASE("sphere samples are unit length with the stated moments") {
    RandomStream rng(77);
    const int n = 100;
    const Eigen::VectorXd a = sample_sphere(n, rng);

    const int samples = 100000;
    double sum = 0.0, sum_sq = 0.0;
    RandomStream draw(13);
    for (int s = 0; s < samples; ++s) {
        const Eigen::VectorXd x = sample_sphere(n, draw);
        CHECK(std::abs(x.norm() - 1.0) <= 1e-12);
        const double dot = a.dot(x);
        sum += dot;
        sum_sq += dot * dot;
    }
    const double mean = sum / samples;
    const double var = sum_sq / samples - mean * mean;
    // Var(a.x) = 1/n; the mean of `samples` draws has sd 1/sqrt(n*samples).
    CHECK(std::abs(mean) <= 3.0 / std::sqrt(static_cast<double>(n) * samples));
    CHECK(var >= 0.9 / n);
    CHECK(var <= 1.1 / n);
}

TEST_CASE("degree-4 builder: identity matrix gives the squared norm form") {
    const Tvca2Input input{{Eigen::MatrixXd::Identity(2, 2)}};
    const SymTensorDense t = build_tvca2(input);
    CHECK(t.is_symmetric());
    RandomStream rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        const Eigen::VectorXd x = sample_sphere(2, rng);
        CHECK(rayleigh_quotient(t, x) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("degree-4 builder: rank-one input gives the planted power tensor") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
    a(0, 0) = 1.0;
    const SymTensorDense t = build_tvca2({{a}});
    const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(3, 0);
    CHECK(rayleigh_quotient(t, e1) == doctest::Approx(1.0).epsilon(1e-14));
    const int peak[4] = {0, 0, 0, 0};
    CHECK(t.at(peak) == doctest::Approx(1.0).epsilon(1e-14));
    double total = 0.0;
    for (double v : t.entries()) total += std::abs(v);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));  // single nonzero entry
}

TEST_CASE("degree-4 builder matches direct polynomial evaluation") {
    RandomStream rng(21);
    for (int rep = 0; rep < 5; ++rep) {
        const int n = 3, count = 3;
        Tvca2Input input;
        for (int k = 0; k < count; ++k) {
            Eigen::MatrixXd m(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) m(i, j) = m(j, i) = rng.normal();
            input.matrices.push_back(std::move(m));
        }
        const SymTensorDense t = build_tvca2(input);
        CHECK(t.is_symmetric());
        for (int probe = 0; probe < 100; ++probe) {
            const Eigen::VectorXd x = sample_sphere(n, rng);
            double direct = 0.0;
            for (const auto& m : input.matrices) {
                const double q = x.dot(m * x);
                direct += q * q;
            }
            const double via_tensor = rayleigh_quotient(t, x);
            const double scale = std::max({std::abs(direct), std::abs(via_tensor), 1e-30});
            CHECK(std::abs(direct - via_tensor) / scale < 1e-10);
        }
    }
}

TEST_CASE("degree-4 builder validates input") {
    Eigen::MatrixXd skew(2, 2);
    skew << 0.0, 1.0, -1.0, 0.0;
    CHECK_THROWS_AS(build_tvca2({{skew}}), std::invalid_argument);
    CHECK_THROWS_AS(build_tvca2({{}}), std::invalid_argument);
    CHECK_THROWS_AS(
        build_tvca2({{Eigen::MatrixXd::Identity(2, 2),
                      Eigen::MatrixXd::Identity(3, 3)}}),
        std::invalid_argument);
    CHECK_THROWS_AS(build_tvca2({{Eigen::MatrixXd::Identity(100, 100)}}, 1000),
                    std::invalid_argument);
}
