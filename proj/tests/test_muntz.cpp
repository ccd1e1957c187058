#include <doctest.h>

#include <cmath>

#include "mkzfrac/error.hpp"
#include "mkzfrac/functions.hpp"
#include "mkzfrac/muntz.hpp"

using namespace mkzfrac;

TEST_SUITE("muntz") {
TEST_CASE("least squares recovers an exact combination") {
    const IntervalSpec I(0.0, 1.0);
    const auto one = GridFunction::constant(I, 501, 1.0);
    const auto x = GridFunction::sample(I, 501, [](double t) { return t; });
    const auto target = GridFunction::sample(I, 501, [](double t) { return 2.0 + 3.0 * t; });
    const auto fit = least_squares_fit(target, {one, x});
    REQUIRE(fit.coefficients.size() == 2);
    CHECK(fit.coefficients[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.coefficients[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.residual_sup < 1e-12);
    CHECK_FALSE(fit.rank_warning);
}

TEST_CASE("classification of exponent sequences") {
    CHECK(classify_lambda(LambdaSequence::harmonic(10)).cls == LambdaClass::divergent);
    CHECK(classify_lambda(LambdaSequence::geometric(10)).cls == LambdaClass::convergent);
    CHECK(classify_lambda(LambdaSequence::custom({1.0, 2.5})).cls == LambdaClass::undetermined);
    CHECK(classify_lambda(LambdaSequence::harmonic(10), 2.0).cls == LambdaClass::divergent);
    CHECK(to_string(LambdaClass::divergent) == "divergent-sum");
    CHECK_THROWS_AS(LambdaSequence::custom({2.0, 1.0}).validate(), PreconditionError);
    CHECK_THROWS_AS(LambdaSequence::geometric(4, 1.0), PreconditionError);
}

TEST_CASE("zero scaling gives plain monomials") {
    const IntervalSpec I(0.0, 1.0);
    FractalSpec s{GridFunction::constant(I, default_grid_size(3), 0.0), Partition::uniform(I, 3),
                  ScalingVector::zero(3), QuantumBase{3, 0.8}};
    const auto m = fractal_monomial(2.5, s);
    for (std::size_t j = 0; j < m.size(); j += 97) CHECK(m[j] == doctest::Approx(std::pow(m.x_at(j), 2.5)).epsilon(1e-15));
}

TEST_CASE("density experiment reproduces a polynomial target") {
    const IntervalSpec I(0.0, 1.0);
    const auto target = make_germ("poly", {1, -2, 0.5}).sample(I, default_grid_size(3));
    FractalSpec s{target, Partition::uniform(I, 3), ScalingVector::zero(3), ClassicalBase{1}};
    DensityOptions o;
    o.m_values = {1, 2};
    const auto rows = density_experiment(target, LambdaSequence::harmonic(2), s, o);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].residual_sup > 1e-3);
    CHECK(rows[1].residual_sup < 1e-10);
    CHECK(rows[1].n == 10);
}
}
