#include <doctest.h>

#include <cmath>

#include "mkzfrac/analysis.hpp"
#include "mkzfrac/error.hpp"
#include "mkzfrac/functions.hpp"

using namespace mkzfrac;

TEST_SUITE("analysis") {
TEST_CASE("modulus of continuity") {
    const IntervalSpec I(0.0, 1.0);
    const auto x = GridFunction::sample(I, 4001, [](double t) { return t; });
    CHECK(modulus_of_continuity(x, 0.25) == doctest::Approx(0.25).epsilon(1e-12));
    const auto s = make_germ("sin").sample(I, 4001);
    // sin is concave and increasing on [0, 1]: the largest rise starts at 0
    CHECK(modulus_of_continuity(s, 0.25) == doctest::Approx(std::sin(0.25)).epsilon(1e-12));
    CHECK_THROWS_AS(modulus_of_continuity(s, 0.0), PreconditionError);
}

TEST_CASE("L^p modulus of the identity") {
    const IntervalSpec I(0.0, 1.0);
    const auto x = GridFunction::sample(I, 1001, [](double t) { return t; });
    CHECK(lp_modulus(x, 0.2, 1.0) == doctest::Approx(0.2 * 0.8).epsilon(1e-9));
    CHECK(lp_modulus(x, 0.2, 2.0) == doctest::Approx(0.2 * std::sqrt(0.8)).epsilon(1e-9));
}

TEST_CASE("dimension bound formulas") {
    auto b = dimension_bounds(2.0, 1.0, 4);
    CHECK(b.lower == doctest::Approx(1.5));
    CHECK(b.upper == doctest::Approx(1.5));
    b = dimension_bounds(0.8, 1.0, 3);
    CHECK(b.lower == 1.0);
    CHECK(b.upper == 1.0);
    b = dimension_bounds(2.5, 0.5, 4);
    CHECK(b.upper == doctest::Approx(1.0 + std::log(2.5) / std::log(4.0)));
    CHECK_THROWS_AS(dimension_bounds(2.0, 0.0, 4), PreconditionError);
}

TEST_CASE("box counting a straight segment") {
    GraphPoints g;
    for (int i = 0; i <= 100000; ++i) {
        g.x.push_back(i / 100000.0);
        g.y.push_back(0.3 * i / 100000.0);
    }
    const auto e = box_dimension(g, {0.0, 1.0});
    CHECK(e.slope == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("box counting a Weierstrass-type curve") {
    // W(x) = sum_k 2^{-k/2} cos(4^k pi x) has graph dimension 2 - 1/4 = 1.75.
    GraphPoints g;
    const int n = 1 << 20;
    for (int i = 0; i <= n; ++i) {
        const double x = static_cast<double>(i) / n;
        double y = 0.0;
        for (int k = 0; k < 10; ++k) y += std::pow(4.0, -0.25 * k) * std::cos(std::pow(4.0, k) * M_PI * x);
        g.x.push_back(x);
        g.y.push_back(y);
    }
    const auto e = box_dimension(g, {0.0, 1.0}, 3, 12);
    CHECK(e.slope == doctest::Approx(1.75).epsilon(0.1));
}

TEST_CASE("rate exponent of a 1/n sequence") {
    std::vector<ConvergenceRow> rows;
    for (int n = 2; n <= 40; ++n) rows.push_back({n, 1.0, 3.0 / n, 1.0, true});
    CHECK(rate_exponent(rows) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("quantum bound rejects small orders") {
    const IntervalSpec I(0.0, 1.0);
    FractalSpec s{make_germ("sin").sample(I, default_grid_size(2)), Partition(), ScalingVector::constants({0.3, 0.3}),
                  QuantumBase{}};
    CHECK(alpha_factor(s.alpha, I) == doctest::Approx(0.3 / 0.7));
    CHECK_THROWS_AS(check_uniform_bound(s, s.germ, {2, 3}, [](int) { return 0.9; }), PreconditionError);
    const auto rows = check_uniform_bound(s, s.germ, {3, 10}, [](int) { return 0.9; });
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].q_n == 0.9);
    CHECK(rows[0].satisfied);
}

TEST_CASE("monotone check needs a convex germ") {
    const IntervalSpec I(0.0, 1.0);
    FractalSpec s{make_germ("sin").sample(I, default_grid_size(2)), Partition(), ScalingVector::constants({0.3, 0.3}),
                  QuantumBase{}};
    CHECK_THROWS_AS(monotone_sequence_check(s, {1, 2}, 0.8), PreconditionError);
}
}
