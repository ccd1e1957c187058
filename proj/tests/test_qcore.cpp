#include <doctest.h>

#include <cmath>

#include "mkzfrac/error.hpp"
#include "mkzfrac/qcore.hpp"

using namespace mkzfrac;

TEST_SUITE("qcore") {
TEST_CASE("q-integers against hand values") {
    CHECK(q_integer(5, QParam(0.5)) == doctest::Approx(1.9375).epsilon(1e-15));
    CHECK(q_integer(0, QParam(0.5)) == 0.0);
    CHECK(q_integer(7, QParam(1.0)) == 7.0);
    CHECK(q_factorial(3, QParam(0.5)) == doctest::Approx(1.0 * 1.5 * 1.75).epsilon(1e-15));
    CHECK(q_factorial(0, QParam(0.3)) == 1.0);
}

TEST_CASE("Gaussian binomial closed forms") {
    for (double qv : {0.2, 0.5, 0.9, 1.0}) {
        const QParam q(qv);
        // [4 choose 2]_q = (1 + q^2)(1 + q + q^2)
        CHECK(q_binomial(4, 2, q) == doctest::Approx((1 + qv * qv) * (1 + qv + qv * qv)).epsilon(1e-14));
        CHECK(q_binomial(6, 0, q) == 1.0);
        CHECK(q_binomial(6, 6, q) == 1.0);
        CHECK_THROWS_AS(q_binomial(3, 5, q), PreconditionError);
    }
}

TEST_CASE("q-Pascal identity") {
    for (double qv : {0.3, 0.8, 1.0}) {
        const QParam q(qv);
        for (int n = 1; n <= 40; ++n)
            for (int k = 1; k < n; ++k) {
                const double lhs = q_binomial(n, k, q);
                const double rhs = q_binomial(n - 1, k - 1, q) + std::pow(qv, k) * q_binomial(n - 1, k, q);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
            }
    }
}

TEST_CASE("QParam rejects values outside (0, 1]") {
    CHECK_THROWS_AS(QParam(0.0), PreconditionError);
    CHECK_THROWS_AS(QParam(1.5), PreconditionError);
    CHECK_THROWS_AS(QParam(std::nan("")), PreconditionError);
}

TEST_CASE("arctan schedule") {
    CHECK(arctan_q_schedule(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(arctan_q_schedule(50) < 1.0);
    CHECK(arctan_q_schedule(50) > arctan_q_schedule(3));
}
}
