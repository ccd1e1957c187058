#include "mkzfrac/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mkzfrac/error.hpp"
#include "mkzfrac/parallel.hpp"
#include "mkzfrac/simd/kernels.hpp"

namespace mkzfrac {

Partition::Partition(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 3) throw PreconditionError("partition needs at least 3 nodes");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!std::isfinite(nodes_[i])) throw PreconditionError("partition nodes must be finite");
        if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
            throw PreconditionError("partition nodes must be strictly increasing (node " + std::to_string(i) + ")");
    }
}

Partition Partition::uniform(IntervalSpec interval, std::size_t intervals) {
    if (intervals < 2) throw PreconditionError("partition needs at least 2 intervals");
    std::vector<double> nodes(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i)
        nodes[i] = interval.x1 + interval.length() * static_cast<double>(i) / static_cast<double>(intervals);
    nodes.back() = interval.xN;
    return Partition(std::move(nodes));
}

bool Partition::is_uniform(double tol) const noexcept {
    const double h = (nodes_.back() - nodes_.front()) / static_cast<double>(interval_count());
    for (std::size_t i = 1; i < nodes_.size(); ++i)
        if (std::fabs((nodes_[i] - nodes_[i - 1]) - h) > tol * (nodes_.back() - nodes_.front())) return false;
    return true;
}

std::vector<AffineMap> build_maps(const Partition& partition) {
    const auto& x = partition.nodes();
    const double x1 = x.front(), xN = x.back(), L = xN - x1;
    std::vector<AffineMap> maps(partition.interval_count());
    for (std::size_t i = 0; i < maps.size(); ++i) {
        maps[i].a = (x[i + 1] - x[i]) / L;
        maps[i].b = (xN * x[i] - x1 * x[i + 1]) / L;
    }
    return maps;
}

std::string describe(const BaseOperator& base) {
    std::ostringstream os;
    if (const auto* b = std::get_if<QuantumBase>(&base)) os << "quantum(n=" << b->n << ",q=" << b->q << ")";
    else if (const auto* c = std::get_if<ClassicalBase>(&base)) os << "classical(n=" << c->n << ")";
    else os << "integral(n=" << std::get<IntegralBase>(base).n << ")";
    return os.str();
}

GridFunction compute_base(const GridFunction& germ, const BaseOperator& base, const MkzOptions& opts) {
    if (const auto* b = std::get_if<QuantumBase>(&base)) return apply_quantum_mkz(germ, b->n, QParam(b->q), opts);
    if (const auto* c = std::get_if<ClassicalBase>(&base)) return apply_classical_mkz(germ, c->n, opts);
    return apply_integral_mkz(germ, std::get<IntegralBase>(base).n, opts);
}

std::size_t default_grid_size(std::size_t intervals) {
    if (intervals == 0) throw PreconditionError("interval count must be positive");
    const std::size_t target = 4374;
    return intervals * ((target + intervals - 1) / intervals) + 1;
}

namespace {

// Position of x on the grid in cells, snapped to an integer within 1e-9.
double grid_position(const IntervalSpec& I, std::size_t m, double x) {
    const double pos = (x - I.x1) / I.length() * static_cast<double>(m - 1);
    const double r = std::round(pos);
    return std::fabs(pos - r) <= 1e-9 ? r : pos;
}

}  // namespace

std::vector<std::size_t> node_indices(const FractalSpec& spec) {
    const auto& I = spec.germ.interval();
    const std::size_t m = spec.germ.size();
    std::vector<std::size_t> idx;
    for (double node : spec.partition.nodes()) {
        const double pos = (node - I.x1) / I.length() * static_cast<double>(m - 1);
        const double r = std::round(pos);
        if (std::fabs(pos - r) > 1e-6) {
            std::ostringstream os;
            os << "partition node " << node << " is not a grid node for grid size " << m
               << "; choose a size with (M-1) a multiple of the node spacing";
            throw PreconditionError(os.str());
        }
        idx.push_back(static_cast<std::size_t>(r));
    }
    return idx;
}

void FractalSpec::validate() const {
    if (germ.size() < 2) throw PreconditionError("germ grid is empty");
    if (alpha.size() != partition.interval_count()) {
        std::ostringstream os;
        os << "alpha has " << alpha.size() << " members but the partition has " << partition.interval_count()
           << " intervals";
        throw PreconditionError(os.str());
    }
    const IntervalSpec P = partition.interval();
    const IntervalSpec& G = germ.interval();
    if (std::fabs(P.x1 - G.x1) > 1e-12 * G.length() || std::fabs(P.xN - G.xN) > 1e-12 * G.length())
        throw PreconditionError("partition end points do not match the germ interval");
    if (!(tol > 0.0)) throw PreconditionError("solver tolerance must be positive");
    if (max_iter < 1) throw PreconditionError("max_iter must be at least 1");
    (void)node_indices(*this);
    std::visit(
        [](const auto& b) {
            if (b.n < 1) throw PreconditionError("base order n must be a positive integer");
        },
        base);
    if (const auto* qb = std::get_if<QuantumBase>(&base)) (void)QParam(qb->q);
}

RbPlan make_rb_plan(const FractalSpec& spec, const GridFunction& base) {
    spec.validate();
    if (!base.same_grid(spec.germ)) throw PreconditionError("base function is not on the germ grid");
    const auto& I = spec.germ.interval();
    const std::size_t m = spec.germ.size();
    const auto maps = build_maps(spec.partition);
    const auto nodes = node_indices(spec);

    RbPlan plan;
    plan.index.resize(m);
    plan.weight.resize(m);
    plan.alpha.resize(m);
    plan.base.resize(m);
    plan.germ.resize(m);
    parallel_for(m, 1024, [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            // Left-closed intervals, last one closed on both ends.
            std::size_t i = std::upper_bound(nodes.begin(), nodes.end(), j) - nodes.begin();
            i = std::min(i == 0 ? 0 : i - 1, maps.size() - 1);
            const double xi = std::clamp(maps[i].inverse(spec.germ.x_at(j)), I.x1, I.xN);
            const double pos = grid_position(I, m, xi);
            std::size_t cell = static_cast<std::size_t>(std::floor(pos));
            double w = pos - static_cast<double>(cell);
            if (cell >= m - 1) {
                // Reads the padding slot g[M] with zero weight.
                cell = m - 1;
                w = 0.0;
            }
            plan.index[j] = static_cast<std::int32_t>(cell);
            plan.weight[j] = w;
            plan.alpha[j] = spec.alpha[i](xi);
            plan.base[j] = w == 0.0 ? base[cell] : base(xi);
            plan.germ[j] = spec.germ[j];
        }
    });
    return plan;
}

namespace {

simd::RbPlanView view_of(const RbPlan& plan) {
    return {plan.index, plan.weight, plan.alpha, plan.base, plan.germ};
}

// Working buffer of M samples plus one padding slot equal to the last sample.
std::vector<double> padded(std::span<const double> v) {
    std::vector<double> out(v.begin(), v.end());
    out.push_back(v.back());
    return out;
}

void apply_plan(const RbPlan& plan, const std::vector<double>& g, std::vector<double>& out) {
    const auto& kern = simd::active();
    const simd::RbPlanView view = view_of(plan);
    const std::size_t m = plan.index.size();
    parallel_for(m, 4096, [&](std::size_t b, std::size_t e) {
        const simd::RbPlanView part{view.index.subspan(b, e - b), view.weight.subspan(b, e - b),
                                    view.alpha.subspan(b, e - b), view.base.subspan(b, e - b),
                                    view.germ.subspan(b, e - b)};
        kern.rb_apply(part, g, std::span<double>(out).subspan(b, e - b));
    });
    out[m] = out[m - 1];
}

double sup_change(const std::vector<double>& a, const std::vector<double>& b, std::size_t m) {
    return simd::active().max_abs_diff(std::span<const double>(a).first(m), std::span<const double>(b).first(m));
}

void check_endpoints(const FractalSpec& spec, const GridFunction& base) {
    const auto& f = spec.germ;
    const double scale = std::max(1.0, f.sup_norm());
    if (std::fabs(base[0] - f[0]) > 1e-12 * scale || std::fabs(base[base.size() - 1] - f[f.size() - 1]) > 1e-12 * scale)
        throw PreconditionError("base function must agree with the germ at both end points in the uniform setting");
}

bool grid_aligned(const RbPlan& plan) {
    return std::all_of(plan.weight.begin(), plan.weight.end(), [](double w) { return w == 0.0; });
}

// Exact solution of g_j = c_j + a_j g_{s(j)}, c_j = f_j - a_j b_j, s(j) = index[j].
// Every component of the map j -> s(j) holds one cycle; the cycle is closed
// through g_{v0} = S / (1 - P) and the trees hanging off it are back-substituted.
std::vector<double> solve_grid_system(const RbPlan& plan) {
    const std::size_t m = plan.index.size();
    std::vector<double> c(m);
    for (std::size_t j = 0; j < m; ++j) c[j] = plan.germ[j] - plan.alpha[j] * plan.base[j];
    auto next = [&](std::size_t j) { return std::min<std::size_t>(static_cast<std::size_t>(plan.index[j]), m - 1); };

    std::vector<double> g(m + 1, 0.0);
    std::vector<unsigned char> state(m, 0);  // 0 new, 1 on the current path, 2 solved
    std::vector<std::size_t> path;
    for (std::size_t start = 0; start < m; ++start) {
        if (state[start] != 0) continue;
        path.clear();
        std::size_t j = start;
        while (state[j] == 0) {
            state[j] = 1;
            path.push_back(j);
            j = next(j);
        }
        std::size_t tail = path.size();
        if (state[j] == 1) {
            const std::size_t head = static_cast<std::size_t>(std::find(path.begin(), path.end(), j) - path.begin());
            double S = 0.0, P = 1.0;
            for (std::size_t k = head; k < path.size(); ++k) {
                S += P * c[path[k]];
                P *= plan.alpha[path[k]];
            }
            g[path[head]] = S / (1.0 - P);
            state[path[head]] = 2;
            for (std::size_t k = path.size(); k-- > head + 1;) {
                g[path[k]] = c[path[k]] + plan.alpha[path[k]] * g[next(path[k])];
                state[path[k]] = 2;
            }
            tail = head;
        }
        for (std::size_t k = tail; k-- > 0;) {
            g[path[k]] = c[path[k]] + plan.alpha[path[k]] * g[next(path[k])];
            state[path[k]] = 2;
        }
    }
    g[m] = g[m - 1];
    return g;
}

[[noreturn]] void not_converged(int iters, double residual, double tol) {
    std::ostringstream os;
    os << "fixed-point iteration stopped after " << iters << " iterations with change " << residual
       << " above tolerance " << tol;
    throw NonConvergenceError(os.str());
}

}  // namespace

GridFunction rb_apply(const GridFunction& g, const FractalSpec& spec, const GridFunction& base) {
    if (!g.same_grid(spec.germ)) throw PreconditionError("rb_apply: g is not on the germ grid");
    const RbPlan plan = make_rb_plan(spec, base);
    const auto in = padded(g.values());
    std::vector<double> out(in.size());
    apply_plan(plan, in, out);
    out.pop_back();
    return GridFunction(g.interval(), std::move(out));
}

FixedPointResult solve_fixed_point(const FractalSpec& spec) {
    spec.validate();
    return solve_fixed_point(spec, compute_base(spec.germ, spec.base, spec.mkz));
}

FixedPointResult solve_fixed_point(const FractalSpec& spec, const GridFunction& base) {
    spec.validate();
    const double norm = spec.alpha.sup_norm(spec.germ.interval());
    if (!(norm < 1.0)) {
        std::ostringstream os;
        os << "scaling functions have sup norm " << norm << " >= 1; the RB map is not a contraction";
        throw NonContractionError(os.str());
    }
    check_endpoints(spec, base);
    const RbPlan plan = make_rb_plan(spec, base);
    const std::size_t m = spec.germ.size();

    FixedPointResult r;
    r.base = base;
    std::vector<double> g;
    if (spec.direct && grid_aligned(plan)) {
        g = solve_grid_system(plan);
        r.direct = true;
    } else {
        g = padded(spec.germ.values());
    }
    std::vector<double> next(g.size());
    for (int it = 1;; ++it) {
        apply_plan(plan, g, next);
        const double change = sup_change(next, g, m);
        r.residuals.push_back(change);
        g.swap(next);
        r.iterations = it;
        if (change <= spec.tol) break;
        if (it >= spec.max_iter) not_converged(it, change, spec.tol);
    }
    apply_plan(plan, g, next);
    r.residual = sup_change(next, g, m);
    g.pop_back();
    r.function = GridFunction(spec.germ.interval(), std::move(g));
    return r;
}

double lp_contraction_factor(const FractalSpec& spec, double p) {
    if (!(p >= 1.0)) throw PreconditionError("L^p contraction needs p >= 1");
    const auto maps = build_maps(spec.partition);
    if (spec.alpha.size() != maps.size()) throw PreconditionError("alpha size does not match the partition");
    const IntervalSpec I = spec.partition.interval();
    double s = 0.0;
    for (std::size_t i = 0; i < maps.size(); ++i) s += maps[i].a * std::pow(spec.alpha[i].sup_norm(I), p);
    return std::pow(s, 1.0 / p);
}

FixedPointResult solve_lp_fixed_point(const FractalSpec& spec, double p) {
    const double lambda = lp_contraction_factor(spec, p);
    spec.validate();
    if (!std::holds_alternative<IntegralBase>(spec.base))
        throw PreconditionError("the L^p fixed point uses the integral base operator");
    if (!(lambda < 1.0)) {
        std::ostringstream os;
        os << "L^p contraction factor " << lambda << " >= 1";
        throw NonContractionError(os.str());
    }
    const GridFunction base = compute_base(spec.germ, spec.base, spec.mkz);
    const RbPlan plan = make_rb_plan(spec, base);
    const std::size_t m = spec.germ.size();
    const IntervalSpec I = spec.germ.interval();

    auto lp_change = [&](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> d(m);
        for (std::size_t j = 0; j < m; ++j) d[j] = a[j] - b[j];
        return lp_norm(GridFunction(I, std::move(d)), p);
    };

    FixedPointResult r;
    r.base = base;
    std::vector<double> g;
    if (spec.direct && grid_aligned(plan)) {
        g = solve_grid_system(plan);
        r.direct = true;
    } else {
        g = padded(spec.germ.values());
    }
    std::vector<double> next(g.size());
    for (int it = 1;; ++it) {
        apply_plan(plan, g, next);
        const double change = lp_change(next, g);
        r.residuals.push_back(change);
        g.swap(next);
        r.iterations = it;
        if (change <= spec.tol) break;
        if (it >= spec.max_iter) not_converged(it, change, spec.tol);
    }
    apply_plan(plan, g, next);
    r.residual = lp_change(next, g);
    g.pop_back();
    r.function = GridFunction(I, std::move(g));
    return r;
}

GraphPoints graph_points(const FractalSpec& spec, const FixedPointResult& solved, int levels) {
    if (levels < 0) throw PreconditionError("graph export needs levels >= 0");
    const auto maps = build_maps(spec.partition);
    const GridFunction& f = spec.germ;
    const GridFunction& b = solved.base;
    GraphPoints pts;
    const std::size_t m = solved.function.size();
    pts.x.resize(m);
    pts.y.assign(solved.function.values().begin(), solved.function.values().end());
    for (std::size_t j = 0; j < m; ++j) pts.x[j] = solved.function.x_at(j);

    for (int level = 0; level < levels; ++level) {
        const std::size_t P = pts.x.size();
        const std::size_t per = P - 1;
        GraphPoints next;
        next.x.resize(per * maps.size() + 1);
        next.y.resize(next.x.size());
        parallel_for(maps.size(), 1, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                const std::size_t first = i == 0 ? 0 : 1;
                for (std::size_t k = first; k < P; ++k) {
                    const double x = pts.x[k];
                    const double ux = maps[i](x);
                    const std::size_t slot = i * per + k;
                    next.x[slot] = ux;
                    next.y[slot] = f(ux) + spec.alpha[i](x) * (pts.y[k] - b(x));
                }
            }
        });
        pts = std::move(next);
    }
    return pts;
}

}  // namespace mkzfrac
