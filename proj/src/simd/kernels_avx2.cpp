// AVX2 variants. Compiled with -mavx2 only (no FMA) and selected at runtime.

#include <immintrin.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "mkzfrac/simd/kernels.hpp"
#include "series_lane.hpp"

namespace mkzfrac::simd {

namespace {

void series_avx2(const SeriesTable& table, std::span<const double> t, std::span<const double> start, double eps,
                 std::span<SeriesResult> out) {
    const std::size_t kmax = std::min(table.ratio.size(), table.value.size());
    const __m256d target = _mm256_set1_pd(1.0 - eps);
    const __m256d epsv = _mm256_set1_pd(eps);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();

    for (std::size_t base = 0; base < t.size(); base += 4) {
        const std::size_t lanes = std::min<std::size_t>(4, t.size() - base);
        alignas(32) std::array<double, 4> tl{0.0, 0.0, 0.0, 0.0};
        alignas(32) std::array<double, 4> wl{1.0, 1.0, 1.0, 1.0};
        for (std::size_t l = 0; l < lanes; ++l) {
            tl[l] = t[base + l];
            wl[l] = start[base + l];
        }
        __m256d tv = _mm256_load_pd(tl.data());
        __m256d w = _mm256_load_pd(wl.data());
        __m256d s = zero, c = zero, mass = zero, mc = zero;
        // All-ones for live lanes, zero for padding.
        alignas(32) std::array<std::int64_t, 4> live{};
        for (std::size_t l = 0; l < lanes; ++l) live[l] = -1;
        __m256d active = _mm256_castsi256_pd(_mm256_load_si256(reinterpret_cast<const __m256i*>(live.data())));

        std::array<SeriesResult, 4> res{};
        for (auto& r : res) r.exhausted = true;

        for (std::size_t k = 0; k < kmax; ++k) {
            const __m256d v = _mm256_set1_pd(table.value[k]);
            const __m256d rk = _mm256_set1_pd(table.ratio[k]);

            const __m256d y = _mm256_sub_pd(_mm256_mul_pd(w, v), c);
            const __m256d ts = _mm256_add_pd(s, y);
            const __m256d cn = _mm256_sub_pd(_mm256_sub_pd(ts, s), y);
            s = _mm256_blendv_pd(s, ts, active);
            c = _mm256_blendv_pd(c, cn, active);

            const __m256d ym = _mm256_sub_pd(w, mc);
            const __m256d tm = _mm256_add_pd(mass, ym);
            const __m256d mcn = _mm256_sub_pd(_mm256_sub_pd(tm, mass), ym);
            mass = _mm256_blendv_pd(mass, tm, active);
            mc = _mm256_blendv_pd(mc, mcn, active);

            const __m256d rho = _mm256_mul_pd(tv, rk);
            const __m256d by_mass = _mm256_cmp_pd(mass, target, _CMP_GE_OQ);
            const __m256d lhs = _mm256_mul_pd(w, rho);
            const __m256d rhs = _mm256_mul_pd(epsv, _mm256_sub_pd(one, rho));
            const __m256d by_tail =
                _mm256_and_pd(_mm256_cmp_pd(rho, one, _CMP_LT_OQ), _mm256_cmp_pd(lhs, rhs, _CMP_LE_OQ));
            const __m256d stop = _mm256_and_pd(_mm256_or_pd(by_mass, by_tail), active);
            const int stop_bits = _mm256_movemask_pd(stop);
            if (stop_bits != 0) {
                alignas(32) std::array<double, 4> ms, ws, rs;
                _mm256_store_pd(ms.data(), mass);
                _mm256_store_pd(ws.data(), w);
                _mm256_store_pd(rs.data(), rho);
                const int mass_bits = _mm256_movemask_pd(by_mass);
                for (int l = 0; l < 4; ++l) {
                    if (!(stop_bits & (1 << l))) continue;
                    res[l].exhausted = false;
                    res[l].terms = static_cast<std::uint32_t>(k + 1);
                    res[l].tail_bound = detail::tail_at_stop((mass_bits >> l) & 1, ms[l], ws[l], rs[l]);
                }
                active = _mm256_andnot_pd(stop, active);
                if (_mm256_movemask_pd(active) == 0) break;
            }
            w = _mm256_blendv_pd(w, _mm256_mul_pd(w, rho), active);
        }

        alignas(32) std::array<double, 4> sums, masses;
        _mm256_store_pd(sums.data(), s);
        _mm256_store_pd(masses.data(), mass);
        for (std::size_t l = 0; l < lanes; ++l) {
            SeriesResult r = res[l];
            if (r.exhausted) r.terms = static_cast<std::uint32_t>(kmax);
            r.sum = sums[l];
            r.mass = masses[l];
            out[base + l] = r;
        }
    }
}

void rb_apply_avx2(const RbPlanView& plan, std::span<const double> g, std::span<double> out) {
    const std::size_t m = plan.index.size();
    const double* gp = g.data();
    std::size_t j = 0;
    for (; j + 4 <= m; j += 4) {
        const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(plan.index.data() + j));
        const __m256d g0 = _mm256_i32gather_pd(gp, idx, 8);
        const __m256d g1 = _mm256_i32gather_pd(gp + 1, idx, 8);
        const __m256d w = _mm256_loadu_pd(plan.weight.data() + j);
        const __m256d interp = _mm256_add_pd(g0, _mm256_mul_pd(w, _mm256_sub_pd(g1, g0)));
        const __m256d diff = _mm256_sub_pd(interp, _mm256_loadu_pd(plan.base.data() + j));
        const __m256d res =
            _mm256_add_pd(_mm256_loadu_pd(plan.germ.data() + j), _mm256_mul_pd(_mm256_loadu_pd(plan.alpha.data() + j), diff));
        _mm256_storeu_pd(out.data() + j, res);
    }
    for (; j < m; ++j) {
        const std::int32_t i = plan.index[j];
        const double g0 = g[i];
        const double g1 = g[i + 1];
        const double interp = g0 + plan.weight[j] * (g1 - g0);
        out[j] = plan.germ[j] + plan.alpha[j] * (interp - plan.base[j]);
    }
}

double max_abs_diff_avx2(std::span<const double> a, std::span<const double> b) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= a.size(); j += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + j), _mm256_loadu_pd(b.data() + j));
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign, d));
    }
    alignas(32) std::array<double, 4> lanes;
    _mm256_store_pd(lanes.data(), acc);
    double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; j < a.size(); ++j) m = std::max(m, std::fabs(a[j] - b[j]));
    return m;
}

void box_cells_avx2(std::span<const double> x, std::span<const double> y, double x0, double y0, double eps,
                    std::span<std::int32_t> ix, std::span<std::int32_t> iy) {
    const __m256d x0v = _mm256_set1_pd(x0);
    const __m256d y0v = _mm256_set1_pd(y0);
    const __m256d ev = _mm256_set1_pd(eps);
    std::size_t j = 0;
    for (; j + 4 <= x.size(); j += 4) {
        const __m256d fx = _mm256_floor_pd(_mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(x.data() + j), x0v), ev));
        const __m256d fy = _mm256_floor_pd(_mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(y.data() + j), y0v), ev));
        _mm_storeu_si128(reinterpret_cast<__m128i*>(ix.data() + j), _mm256_cvttpd_epi32(fx));
        _mm_storeu_si128(reinterpret_cast<__m128i*>(iy.data() + j), _mm256_cvttpd_epi32(fy));
    }
    for (; j < x.size(); ++j) {
        ix[j] = static_cast<std::int32_t>(std::floor((x[j] - x0) / eps));
        iy[j] = static_cast<std::int32_t>(std::floor((y[j] - y0) / eps));
    }
}

constexpr KernelTable kAvx2{Isa::avx2, series_avx2, rb_apply_avx2, max_abs_diff_avx2, box_cells_avx2};

}  // namespace

const KernelTable* avx2_kernel_table() noexcept { return &kAvx2; }

}  // namespace mkzfrac::simd
