#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "mkzfrac/simd/kernels.hpp"

using namespace mkzfrac::simd;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

}  // namespace

TEST_SUITE("simd") {
TEST_CASE("scalar table is always present") {
    CHECK(scalar_kernels().isa == Isa::scalar);
    CHECK(isa_name(Isa::avx2) == "avx2");
}

TEST_CASE("AVX2 kernels match the scalar reference bit for bit") {
    const KernelTable* avx = avx2_kernels();
    if (!avx) {
        MESSAGE("AVX2 variants unavailable; nothing to compare");
        return;
    }
    const KernelTable& ref = scalar_kernels();
    std::mt19937_64 rng(1234);

    SUBCASE("series") {
        const std::size_t terms = 4000;
        std::vector<double> ratio(terms), value = uniform(rng, terms, -2.0, 2.0);
        for (std::size_t k = 0; k < terms; ++k) ratio[k] = 1.0 + 3.0 / (k + 1.0);
        for (std::size_t lanes : {1u, 3u, 4u, 7u, 64u}) {
            auto t = uniform(rng, lanes, 0.0, 0.9);
            auto start = uniform(rng, lanes, 0.05, 1.0);
            std::vector<SeriesResult> a(lanes), b(lanes);
            const SeriesTable table{ratio, value};
            ref.series(table, t, start, 1e-12, a);
            avx->series(table, t, start, 1e-12, b);
            for (std::size_t i = 0; i < lanes; ++i) {
                CHECK(same_bits(a[i].sum, b[i].sum));
                CHECK(same_bits(a[i].mass, b[i].mass));
                CHECK(same_bits(a[i].tail_bound, b[i].tail_bound));
                CHECK(a[i].terms == b[i].terms);
                CHECK(a[i].exhausted == b[i].exhausted);
            }
        }
    }
    SUBCASE("rb_apply") {
        const std::size_t m = 1001;
        auto g = uniform(rng, m + 1, -1.0, 1.0);
        std::vector<std::int32_t> index(m);
        std::uniform_int_distribution<std::int32_t> pick(0, static_cast<std::int32_t>(m - 2));
        for (auto& i : index) i = pick(rng);
        auto weight = uniform(rng, m, 0.0, 1.0), alpha = uniform(rng, m, -0.9, 0.9);
        auto base = uniform(rng, m, -1.0, 1.0), germ = uniform(rng, m, -1.0, 1.0);
        const RbPlanView plan{index, weight, alpha, base, germ};
        std::vector<double> a(m), b(m);
        ref.rb_apply(plan, g, a);
        avx->rb_apply(plan, g, b);
        for (std::size_t j = 0; j < m; ++j) CHECK(same_bits(a[j], b[j]));
    }
    SUBCASE("max_abs_diff") {
        for (std::size_t n : {1u, 5u, 1023u}) {
            auto x = uniform(rng, n, -5.0, 5.0), y = uniform(rng, n, -5.0, 5.0);
            CHECK(same_bits(ref.max_abs_diff(x, y), avx->max_abs_diff(x, y)));
        }
    }
    SUBCASE("box_cells") {
        const std::size_t n = 999;
        auto x = uniform(rng, n, 0.0, 1.0), y = uniform(rng, n, -2.0, 3.0);
        std::vector<std::int32_t> ia(n), ja(n), ib(n), jb(n);
        ref.box_cells(x, y, 0.0, -2.0, 1.0 / 512, ia, ja);
        avx->box_cells(x, y, 0.0, -2.0, 1.0 / 512, ib, jb);
        CHECK(ia == ib);
        CHECK(ja == jb);
    }
}
}
