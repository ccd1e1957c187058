#include "mkzfrac/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numbers>
#include <ostream>
#include <sstream>

#include "mkzfrac/error.hpp"
#include "mkzfrac/parallel.hpp"
#include "mkzfrac/qcore.hpp"
#include "mkzfrac/simd/kernels.hpp"

namespace mkzfrac {

namespace {

constexpr double kRowSlack = 1e-9;

std::size_t cells_within(const GridFunction& f, double delta) {
    return static_cast<std::size_t>(std::floor(delta / f.step() + 1e-9));
}

// 2(2 + 3 sqrt 3) / 27
const double kLupasMuller = 2.0 * (2.0 + 3.0 * std::sqrt(3.0)) / 27.0;

}  // namespace

double modulus_of_continuity(const GridFunction& f, double delta) {
    if (!(delta > 0.0) || delta > f.interval().length() * (1.0 + 1e-12))
        throw PreconditionError("modulus of continuity needs 0 < delta <= |I|");
    const std::size_t m = f.size();
    const std::size_t w = std::min(cells_within(f, delta), m - 1);
    if (w == 0) return 0.0;
    // Sliding max - min over windows of w + 1 consecutive samples.
    std::deque<std::size_t> hi, lo;
    double best = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        while (!hi.empty() && f[hi.back()] <= f[j]) hi.pop_back();
        while (!lo.empty() && f[lo.back()] >= f[j]) lo.pop_back();
        hi.push_back(j);
        lo.push_back(j);
        if (hi.front() + w < j) hi.pop_front();
        if (lo.front() + w < j) lo.pop_front();
        if (j >= w) best = std::max(best, f[hi.front()] - f[lo.front()]);
    }
    return best;
}

double lp_modulus(const GridFunction& f, double t, double p) {
    if (!(p >= 1.0)) throw PreconditionError("omega_{1,p} needs p >= 1");
    if (!(t > 0.0)) throw PreconditionError("omega_{1,p} needs t > 0");
    const std::size_t m = f.size();
    const std::size_t kmax = std::min(cells_within(f, t), m - 2);
    std::vector<double> per(kmax + 1, 0.0);
    parallel_for(kmax, 16, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b + 1; k <= e; ++k) {
            const std::size_t len = m - k;
            auto term = [&](std::size_t j) {
                const double d = std::fabs(f[j + k] - f[j]);
                return p == 1.0 ? d : (p == 2.0 ? d * d : std::pow(d, p));
            };
            double s = 0.5 * (term(0) + term(len - 1));
            for (std::size_t j = 1; j + 1 < len; ++j) s += term(j);
            per[k] = std::pow(s * f.step(), 1.0 / p);
        }
    });
    return *std::max_element(per.begin(), per.end());
}

double alpha_factor(const ScalingVector& alpha, const IntervalSpec& interval) {
    const double a = alpha.sup_norm(interval);
    if (!(a < 1.0)) throw NonContractionError("||alpha|| must be below 1 for the error bounds");
    return a / (1.0 - a);
}

std::vector<ConvergenceRow> check_uniform_bound(const FractalSpec& spec, const GridFunction& omega_source,
                                                const std::vector<int>& orders,
                                                const std::function<double(int)>& q_rule) {
    const double factor = alpha_factor(spec.alpha, spec.germ.interval());
    std::vector<ConvergenceRow> rows;
    for (int n : orders) {
        if (n < 3) throw PreconditionError("the quantum uniform bound needs n >= 3");
        const double q = q_rule(n);
        FractalSpec s = spec;
        s.base = QuantumBase{n, q};
        const FixedPointResult r = solve_fixed_point(s);
        ConvergenceRow row;
        row.n = n;
        row.q_n = q;
        row.sup_error = sup_distance(r.function, spec.germ);
        const double delta = std::min(1.0 / std::sqrt(q_integer(n, QParam(q))), omega_source.interval().length());
        row.bound = 2.5 * modulus_of_continuity(omega_source, delta) * factor;
        row.satisfied = row.sup_error <= row.bound + kRowSlack;
        rows.push_back(row);
    }
    return rows;
}

ClassicalRows check_classical_bounds(const FractalSpec& spec, const GridFunction& omega_source,
                                     const DerivativeData& derivative, const std::vector<int>& orders) {
    const double factor = alpha_factor(spec.alpha, spec.germ.interval());
    const double len = omega_source.interval().length();
    ClassicalRows out;
    for (int n : orders) {
        if (n < 1) throw PreconditionError("classical bounds need n >= 1");
        FractalSpec s = spec;
        s.base = ClassicalBase{n};
        const FixedPointResult r = solve_fixed_point(s);
        const double err = sup_distance(r.function, spec.germ);
        const double rn = std::sqrt(static_cast<double>(n));
        const double delta = std::min(1.0 / rn, len);
        auto row = [&](double bound) {
            return ConvergenceRow{n, 1.0, err, bound, err <= bound + kRowSlack};
        };
        out.c0.push_back(row(31.0 / 27.0 * modulus_of_continuity(omega_source, delta) * factor));
        out.c1.push_back(row(kLupasMuller / rn * modulus_of_continuity(derivative.samples, delta) * factor));
        out.holder.push_back(row(kLupasMuller / rn * derivative.lip_constant *
                                 std::pow(static_cast<double>(n), -(derivative.beta + 1.0) / 2.0) * factor));
    }
    return out;
}

double rate_exponent(const std::vector<ConvergenceRow>& rows) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t k = 0;
    for (const auto& r : rows) {
        if (!(r.sup_error > 0.0)) continue;
        const double x = std::log(static_cast<double>(r.n)), y = std::log(r.sup_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    if (k < 2) throw DegenerateError("rate fit needs two rows with positive error");
    const double kk = static_cast<double>(k);
    return (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
}

MonotoneReport monotone_sequence_check(const FractalSpec& spec, const std::vector<int>& orders, double q,
                                       double slack) {
    const GridFunction& f = spec.germ;
    const double scale = std::max(1.0, f.sup_norm());
    for (std::size_t j = 1; j + 1 < f.size(); ++j) {
        if (f[j - 1] - 2.0 * f[j] + f[j + 1] < -1e-9 * scale)
            throw PreconditionError("monotone check needs a convex germ (negative second difference at node " +
                                    std::to_string(j) + ")");
    }
    for (std::size_t i = 0; i < spec.alpha.size(); ++i) {
        for (std::size_t j = 0; j < f.size(); ++j) {
            if (spec.alpha[i](f.x_at(j)) < 0.0)
                throw PreconditionError("monotone check needs alpha_i >= 0 (interval " + std::to_string(i + 1) + ")");
        }
    }
    if (orders.size() < 2) throw PreconditionError("monotone check needs at least two orders");

    MonotoneReport rep;
    rep.max_increase = -INFINITY;
    rep.max_decrease = -INFINITY;
    rep.envelope_min = INFINITY;
    rep.envelope_max = -INFINITY;
    double base_gap = INFINITY;
    double base_rise = -INFINITY;
    GridFunction prev, prev_base;
    for (std::size_t k = 0; k < orders.size(); ++k) {
        FractalSpec s = spec;
        s.base = QuantumBase{orders[k], q};
        const FixedPointResult r = solve_fixed_point(s);
        const GridFunction d = r.function - f;
        MonotoneRow row{orders[k], d.max(), d.min(), 0.0};
        rep.envelope_min = std::min(rep.envelope_min, d.min());
        rep.envelope_max = std::max(rep.envelope_max, d.max());
        base_gap = std::min(base_gap, (r.base - f).min());
        if (k > 0) {
            const GridFunction step = r.function - prev;
            row.step_up = step.max();
            rep.max_increase = std::max(rep.max_increase, step.max());
            rep.max_decrease = std::max(rep.max_decrease, -step.min());
            base_rise = std::max(base_rise, (r.base - prev_base).max());
        }
        rep.rows.push_back(row);
        prev = r.function;
        prev_base = r.base;
    }
    rep.max_increase += 0.0;
    rep.max_decrease += 0.0;
    rep.non_increasing = rep.max_increase <= slack;
    rep.non_decreasing = rep.max_decrease <= slack;
    rep.envelope = rep.envelope_max <= slack ? "below" : (rep.envelope_min >= -slack ? "above" : "mixed");
    rep.base_above_germ = base_gap >= -slack;
    rep.base_non_increasing = base_rise <= slack;
    return rep;
}

std::vector<LpRow> lp_error_check(const FractalSpec& spec, double p, const std::vector<int>& orders) {
    const double lambda = lp_contraction_factor(spec, p);
    if (!(lambda < 1.0)) throw NonContractionError("L^p error check needs Lambda < 1");
    std::vector<LpRow> rows;
    for (int n : orders) {
        FractalSpec s = spec;
        s.base = IntegralBase{n};
        const FixedPointResult r = solve_lp_fixed_point(s, p);
        LpRow row;
        row.n = n;
        row.p = p;
        row.lp_error = lp_distance(r.function, spec.germ, p);
        row.rhs_bound = lambda / (1.0 - lambda) * lp_distance(spec.germ, r.base, p);
        row.satisfied = row.lp_error <= row.rhs_bound + kRowSlack;
        row.omega = lp_modulus(spec.germ, 1.0 / std::sqrt(static_cast<double>(n)), p);
        rows.push_back(row);
    }
    return rows;
}

namespace {

// Boxes of side eps met by the polyline through the x-sorted points. Inside one
// column a connected curve meets every box between its lowest and highest one,
// so each column contributes hi - lo + 1 cells; segments crossing a column
// boundary add their crossing height to both columns.
std::size_t polyline_boxes(const GraphPoints& g, std::span<const std::int32_t> ix, std::span<const std::int32_t> iy,
                           double x0, double y0, double eps) {
    std::size_t total = 0;
    std::int32_t col = ix[0], lo = iy[0], hi = iy[0];
    for (std::size_t k = 1; k < ix.size(); ++k) {
        if (ix[k] == col) {
            lo = std::min(lo, iy[k]);
            hi = std::max(hi, iy[k]);
            continue;
        }
        // Walk every column boundary between the two points.
        const double xa = g.x[k - 1], ya = g.y[k - 1], xb = g.x[k], yb = g.y[k];
        for (std::int32_t c = col; c < ix[k]; ++c) {
            const double xc = x0 + eps * static_cast<double>(c + 1);
            const double w = std::clamp((xc - xa) / (xb - xa), 0.0, 1.0);
            const auto cy = static_cast<std::int32_t>(std::floor((ya + w * (yb - ya) - y0) / eps));
            lo = std::min(lo, cy);
            hi = std::max(hi, cy);
            total += static_cast<std::size_t>(hi - lo + 1);
            lo = hi = cy;
        }
        col = ix[k];
        lo = std::min(lo, iy[k]);
        hi = std::max(hi, iy[k]);
    }
    return total + static_cast<std::size_t>(hi - lo + 1);
}

}  // namespace

DimensionEstimate box_dimension(const GraphPoints& graph, const IntervalSpec& interval, int j_min, int j_max) {
    if (graph.x.size() != graph.y.size() || graph.x.size() < 2) throw PreconditionError("graph point set is empty");
    if (j_max - j_min + 1 < 5) throw PreconditionError("box counting needs at least 5 scales");
    if (!std::is_sorted(graph.x.begin(), graph.x.end())) throw PreconditionError("graph points must be sorted by x");
    const double y0 = *std::min_element(graph.y.begin(), graph.y.end());
    const std::size_t scales = static_cast<std::size_t>(j_max - j_min + 1);
    DimensionEstimate est;
    est.points = graph.x.size();
    est.epsilons.resize(scales);
    est.counts.resize(scales);
    const auto& kern = simd::active();
    parallel_for(scales, 1, [&](std::size_t b, std::size_t e) {
        std::vector<std::int32_t> ix(graph.x.size()), iy(graph.x.size());
        for (std::size_t s = b; s < e; ++s) {
            const double eps = std::ldexp(interval.length(), -(j_min + static_cast<int>(s)));
            kern.box_cells(graph.x, graph.y, interval.x1, y0, eps, ix, iy);
            // The right end x = xN closes the last column.
            const std::int32_t last = static_cast<std::int32_t>(std::ldexp(1.0, j_min + static_cast<int>(s))) - 1;
            for (std::size_t k = ix.size(); k-- > 0 && ix[k] > last;) ix[k] = last;
            est.epsilons[s] = eps;
            est.counts[s] = polyline_boxes(graph, ix, iy, interval.x1, y0, eps);
        }
    });
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t s = 0; s < scales; ++s) {
        const double x = std::log(1.0 / est.epsilons[s]), y = std::log(static_cast<double>(est.counts[s]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = static_cast<double>(scales);
    est.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    return est;
}

DimensionBounds dimension_bounds(double gamma, double beta, std::size_t maps) {
    if (!(beta > 0.0 && beta <= 1.0)) throw PreconditionError("Hoelder exponent must lie in (0, 1]");
    if (maps < 2) throw PreconditionError("dimension bounds need at least 2 maps");
    const double N = static_cast<double>(maps);
    DimensionBounds b;
    if (gamma <= 1.0) {
        b.upper = 2.0 - beta;
        return b;
    }
    const double lg = std::log(gamma) / std::log(N);
    if (gamma * std::pow(N, beta - 1.0) <= 1.0) b.upper = 2.0 - beta + lg;
    else b.upper = 1.0 + lg;
    if (beta == 1.0) b.lower = 1.0 + lg;
    return b;
}

void attach_bounds(DimensionEstimate& est, const FractalSpec& spec, double beta) {
    est.beta = beta;
    est.maps = spec.partition.interval_count();
    if (!spec.alpha.all_constant() || !spec.partition.is_uniform(1e-9)) return;
    for (std::size_t i = 0; i < spec.alpha.size(); ++i)
        if (spec.alpha[i].coefficient() == 0.0) return;
    // Interpolation points (x_j, f(x_j)) must not lie on one line.
    const auto idx = node_indices(spec);
    const auto& x = spec.partition.nodes();
    const double slope = (spec.germ[idx.back()] - spec.germ[idx.front()]) / (x.back() - x.front());
    bool collinear = true;
    for (std::size_t j = 1; j + 1 < idx.size(); ++j) {
        const double line = spec.germ[idx.front()] + slope * (x[j] - x.front());
        if (std::fabs(spec.germ[idx[j]] - line) > 1e-12 * std::max(1.0, spec.germ.sup_norm())) collinear = false;
    }
    if (collinear) throw DegenerateError("interpolation points are collinear; the dimension bounds do not apply");
    est.gamma = spec.alpha.gamma();
    const DimensionBounds b = dimension_bounds(est.gamma, beta, est.maps);
    est.has_bounds = true;
    est.lower = b.lower;
    est.upper = b.upper;
    est.upper_finite = b.upper_finite;
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
    os << "n,q_n,sup_error,bound,satisfied\n";
    for (const auto& r : rows)
        os << r.n << ',' << format_double(r.q_n) << ',' << format_double(r.sup_error) << ','
           << format_double(r.bound) << ',' << (r.satisfied ? "true" : "false") << '\n';
}

void write_lp_csv(std::ostream& os, const std::vector<LpRow>& rows) {
    os << "n,p,lp_error,rhs_bound,satisfied\n";
    for (const auto& r : rows)
        os << r.n << ',' << format_double(r.p) << ',' << format_double(r.lp_error) << ','
           << format_double(r.rhs_bound) << ',' << (r.satisfied ? "true" : "false") << '\n';
}

void write_dimension_csv(std::ostream& os, const DimensionEstimate& est) {
    os << "epsilon,count\n";
    for (std::size_t s = 0; s < est.epsilons.size(); ++s)
        os << format_double(est.epsilons[s]) << ',' << est.counts[s] << '\n';
    os << "# slope=" << format_double(est.slope) << " points=" << est.points;
    if (est.has_bounds) {
        os << " gamma=" << format_double(est.gamma) << " beta=" << format_double(est.beta) << " maps=" << est.maps
           << " lower=" << format_double(est.lower) << " upper=" << format_double(est.upper);
    } else {
        os << " bounds=none";
    }
    os << '\n';
}

}  // namespace mkzfrac
