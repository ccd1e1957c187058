#include <algorithm>
#include <cmath>

#include "mkzfrac/simd/kernels.hpp"
#include "series_lane.hpp"

namespace mkzfrac::simd {

namespace {

void series_scalar(const SeriesTable& table, std::span<const double> t, std::span<const double> start,
                   double eps, std::span<SeriesResult> out) {
    const std::size_t kmax = std::min(table.ratio.size(), table.value.size());
    const double target = 1.0 - eps;
    for (std::size_t lane = 0; lane < t.size(); ++lane) {
        const double tl = t[lane];
        double w = start[lane];
        double s = 0.0, c = 0.0, mass = 0.0, mc = 0.0;
        SeriesResult r;
        r.exhausted = true;
        for (std::size_t k = 0; k < kmax; ++k) {
            const double y = w * table.value[k] - c;
            const double ts = s + y;
            c = (ts - s) - y;
            s = ts;
            const double ym = w - mc;
            const double tm = mass + ym;
            mc = (tm - mass) - ym;
            mass = tm;
            const double rho = tl * table.ratio[k];
            const bool by_mass = mass >= target;
            const bool by_tail = rho < 1.0 && w * rho <= eps * (1.0 - rho);
            if (by_mass || by_tail) {
                r.exhausted = false;
                r.terms = static_cast<std::uint32_t>(k + 1);
                r.tail_bound = detail::tail_at_stop(by_mass, mass, w, rho);
                break;
            }
            w = w * rho;
        }
        if (r.exhausted) r.terms = static_cast<std::uint32_t>(kmax);
        r.sum = s;
        r.mass = mass;
        out[lane] = r;
    }
}

void rb_apply_scalar(const RbPlanView& plan, std::span<const double> g, std::span<double> out) {
    const std::size_t m = plan.index.size();
    for (std::size_t j = 0; j < m; ++j) {
        const std::int32_t i = plan.index[j];
        const double g0 = g[i];
        const double g1 = g[i + 1];
        const double interp = g0 + plan.weight[j] * (g1 - g0);
        out[j] = plan.germ[j] + plan.alpha[j] * (interp - plan.base[j]);
    }
}

double max_abs_diff_scalar(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::fabs(a[j] - b[j]));
    return m;
}

void box_cells_scalar(std::span<const double> x, std::span<const double> y, double x0, double y0, double eps,
                      std::span<std::int32_t> ix, std::span<std::int32_t> iy) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        ix[j] = static_cast<std::int32_t>(std::floor((x[j] - x0) / eps));
        iy[j] = static_cast<std::int32_t>(std::floor((y[j] - y0) / eps));
    }
}

constexpr KernelTable kScalar{Isa::scalar, series_scalar, rb_apply_scalar, max_abs_diff_scalar, box_cells_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace mkzfrac::simd
