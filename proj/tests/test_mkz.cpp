#include <doctest.h>

#include <cmath>

#include "mkzfrac/functions.hpp"
#include "mkzfrac/mkz.hpp"

using namespace mkzfrac;

namespace {

// w_k = prod_{j=0}^{n} (1 - q^j t) [n+k choose k]_q t^k, products taken directly.
long double brute_weight(int n, long double q, long double t, int k) {
    long double lead = 1.0L;
    for (int j = 0; j <= n; ++j) lead *= 1.0L - std::pow(q, j) * t;
    long double binom = 1.0L;
    for (int i = 1; i <= k; ++i) binom *= (1.0L - std::pow(q, n + i)) / (1.0L - std::pow(q, i));
    if (q == 1.0L) {
        binom = 1.0L;
        for (int i = 1; i <= k; ++i) binom *= static_cast<long double>(n + i) / i;
    }
    return lead * binom * std::pow(t, k);
}

}  // namespace

TEST_SUITE("mkz") {
TEST_CASE("weights match the brute-force product") {
    for (int n : {1, 3, 10}) {
        for (double q : {0.5, 0.9, 1.0}) {
            for (double t : {0.1, 0.5, 0.8}) {
                const auto w = mkz_weights(n, QParam(q), t, 1e-12);
                for (int k = 0; k < 12 && k < static_cast<int>(w.weights.size()); ++k)
                    CHECK(w.weights[k] == doctest::Approx(static_cast<double>(brute_weight(n, q, t, k))).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("weights sum to one") {
    for (int n = 1; n <= 50; n += 7)
        for (double q : {0.5, 0.9, 1.0})
            for (int i = 0; i <= 9; ++i) {
                const auto w = mkz_weights(n, QParam(q), 0.1 * i, 1e-12, 10'000'000);
                CHECK(std::fabs(w.mass() - 1.0) <= 1e-10);
            }
}

TEST_CASE("end points are reproduced exactly") {
    const IntervalSpec I(-1.0, 2.0);
    const auto f = make_germ("sin", {3}).sample(I, 301);
    const MkzOptions opts{1e-10, 10'000'000};
    CHECK(eval_quantum_mkz(f, 4, QParam(0.7), I.x1, I, opts) == f[0]);
    CHECK(eval_quantum_mkz(f, 4, QParam(0.7), I.xN, I, opts) == f[300]);
    const auto b = apply_quantum_mkz(f, 4, QParam(0.7), opts);
    CHECK(b[0] == f[0]);
    CHECK(b[300] == f[300]);
}

TEST_CASE("linear functions are preserved") {
    const IntervalSpec I(0.0, 1.0);
    const auto e1 = GridFunction::sample(I, 1001, [](double x) { return x; });
    const MkzOptions opts{1e-13, 10'000'000};
    const auto bq = apply_quantum_mkz(e1, 5, QParam(0.8), opts);
    const auto bc = apply_classical_mkz(e1, 5, opts);
    CHECK(sup_distance(bq, e1) < 1e-9);
    CHECK(sup_distance(bc, e1) < 1e-9);
}

TEST_CASE("classical operator agrees with q = 1") {
    const IntervalSpec I(0.0, 1.0);
    const auto f = make_germ("sinpi").sample(I, 513);
    const auto a = apply_classical_mkz(f, 6);
    const auto b = apply_quantum_mkz(f, 6, QParam(1.0));
    CHECK(sup_distance(a, b) < 1e-14);
}

TEST_CASE("integral kernel has unit mass") {
    for (int n : {1, 4, 20})
        for (double x : {0.0, 0.25, 0.5, 0.9}) {
            const auto row = integral_kernel_row(n, x, 1e-12, 10'000'000);
            CHECK(row.mass == doctest::Approx(1.0).epsilon(1e-10));
        }
    const IntervalSpec I(0.0, 1.0);
    const auto one = GridFunction::constant(I, 257, 1.0);
    const auto img = apply_integral_mkz(one, 3, {1e-12, 10'000'000});
    for (std::size_t j = 0; j < img.size(); ++j) CHECK(img[j] == doctest::Approx(1.0).epsilon(1e-9));
}
}
