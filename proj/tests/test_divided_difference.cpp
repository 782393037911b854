#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "lazyens/divided_difference.hpp"
#include "lazyens/rng.hpp"
#include "support/oracles.hpp"

using lazyens::divided_diff_exp;
using lazyens::log_simplex_exp_average;
using lazyens::Xoshiro256PlusPlus;

TEST_CASE("single node and confluent pairs") {
    CHECK(divided_diff_exp(std::vector<double>{1.3}) == Catch::Approx(std::exp(1.3)));
    CHECK(divided_diff_exp(std::vector<double>{0.7, 0.7}) == Catch::Approx(std::exp(0.7)));
    // m coincident nodes: e^a / (m-1)!
    CHECK(divided_diff_exp(std::vector<double>{-2.0, -2.0, -2.0}) ==
          Catch::Approx(std::exp(-2.0) / 2.0).epsilon(1e-13));
    CHECK(divided_diff_exp(std::vector<double>{0.0, 0.0, 0.0, 0.0}) ==
          Catch::Approx(1.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("hand-computed small tables") {
    const double e = std::exp(1.0);
    CHECK(divided_diff_exp(std::vector<double>{0.0, 1.0}) ==
          Catch::Approx(e - 1.0).epsilon(1e-14));
    CHECK(divided_diff_exp(std::vector<double>{0.0, 1.0, 2.0}) ==
          Catch::Approx((e * e - 2.0 * e + 1.0) / 2.0).epsilon(1e-14));
    // node order must not matter
    CHECK(divided_diff_exp(std::vector<double>{2.0, 0.0, 1.0}) ==
          Catch::Approx((e * e - 2.0 * e + 1.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("agrees with the long-double recursion on separated nodes") {
    Xoshiro256PlusPlus rng(42);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform01() * 5.0);
        std::vector<double> nodes(m);
        std::vector<long double> nodes_ld(m);
        double base = -6.0 * rng.uniform01();
        for (std::size_t i = 0; i < m; ++i) {
            base += 1.2 + 2.0 * rng.uniform01();  // gaps in [1.2, 3.2]
            nodes[i] = base;
            nodes_ld[i] = base;
        }
        const double expected = static_cast<double>(testsupport::dd_exp_naive(nodes_ld));
        CHECK(divided_diff_exp(nodes) == Catch::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("bidiagonal path agrees with the recursion on moderately spaced nodes") {
    // gaps below 1 force the matrix-exponential path; gaps near 1 are still
    // safe for the long-double recursion, giving an independent cross-check
    Xoshiro256PlusPlus rng(43);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform01() * 4.0);
        std::vector<double> nodes(m);
        std::vector<long double> nodes_ld(m);
        double base = 2.0 * rng.uniform01();
        for (std::size_t i = 0; i < m; ++i) {
            base += 0.6 + 0.39 * rng.uniform01();  // gaps in [0.6, 0.99]
            nodes[i] = base;
            nodes_ld[i] = base;
        }
        const double expected = static_cast<double>(testsupport::dd_exp_naive(nodes_ld));
        CHECK(divided_diff_exp(nodes) == Catch::Approx(expected).epsilon(1e-11));
    }
}

TEST_CASE("coincidence continuity for clustered pairs") {
    for (double a : {-1.5, 0.0, 2.0}) {
        const double limit = divided_diff_exp(std::vector<double>{a, a});
        for (double eps : {1e-4, 1e-8, 1e-12}) {
            const double value = divided_diff_exp(std::vector<double>{a, a + eps});
            // exact pair value e^a (e^eps - 1)/eps, stable via expm1
            const double exact = std::exp(a) * std::expm1(eps) / eps;
            CHECK(std::abs(value - exact) <= 1e-9 * std::max(1.0, std::abs(exact)));
            // and the limit is approached at the expected linear rate
            CHECK(std::abs(value - limit) <= eps * std::exp(a) + 1e-9);
        }
    }
}

TEST_CASE("coincidence continuity for clustered triples") {
    const double a = 0.4;
    for (double eps : {1e-4, 1e-8, 1e-12}) {
        const double value = divided_diff_exp(std::vector<double>{a, a + eps, a + 2 * eps});
        const double ratio = std::expm1(eps) / eps;
        const double exact = 0.5 * std::exp(a) * ratio * ratio;
        CHECK(std::abs(value - exact) <= 1e-9 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("mixed cluster next to a far node") {
    // one tight cluster plus one distant node stresses both paths' handoff
    const std::vector<double> nodes{0.0, 1e-9, 5.0};
    // exp[0, eps, 5] -> exp[0, 0, 5] = (e^5 - 1 - 5)/25 as eps -> 0
    const double confluent = (std::exp(5.0) - 6.0) / 25.0;
    CHECK(divided_diff_exp(nodes) == Catch::Approx(confluent).epsilon(1e-8));
}

TEST_CASE("simplex average endpoints and bounds") {
    Xoshiro256PlusPlus rng(44);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform01() * 6.0);
        std::vector<double> nodes(m);
        double lo = 1e300, hi = -1e300;
        for (double& v : nodes) {
            v = 20.0 * (rng.uniform01() - 0.5);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double log_avg = log_simplex_exp_average(nodes);
        CHECK(log_avg >= lo - 1e-12);
        CHECK(log_avg <= hi + 1e-12);
    }
}

TEST_CASE("invalid nodes are rejected") {
    CHECK_THROWS_AS(log_simplex_exp_average(std::vector<double>{}), lazyens::Error);
    CHECK_THROWS_AS(
        log_simplex_exp_average(std::vector<double>{1.0, std::nan("")}),
        lazyens::Error);
}
