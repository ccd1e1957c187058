#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "mkzfrac/analysis.hpp"
#include "mkzfrac/constraints.hpp"
#include "mkzfrac/error.hpp"
#include "mkzfrac/muntz.hpp"
#include "mkzfrac/qcore.hpp"
#include "plot.hpp"

namespace mkzfrac::app {

namespace fs = std::filesystem;

namespace {

constexpr double kOrderSlack = 1e-6;

template <class F>
auto field(const std::string& name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const PreconditionError& e) {
        throw ConfigError(name + ": " + e.what());
    }
}

std::ofstream open_out(const fs::path& out, const std::string& name) {
    std::ofstream os(out / name, std::ios::binary);
    if (!os) throw Error("cannot write " + (out / name).string());
    return os;
}

/// key=value lines written to summary.txt and echoed to the log.
class Summary {
public:
    template <class T>
    Summary& add(const std::string& key, const T& value) {
        os_ << key << '=' << value << '\n';
        return *this;
    }
    Summary& num(const std::string& key, double value) { return add(key, format_double(value)); }
    void write(const fs::path& out, std::ostream& log) const {
        open_out(out, "summary.txt") << os_.str();
        log << os_.str();
    }

private:
    std::ostringstream os_;
};

std::vector<double> broadcast(const Config& cfg, const std::string& key, std::size_t count,
                              const std::vector<double>& fallback) {
    std::vector<double> v = cfg.has(key) ? cfg.numbers(key) : fallback;
    if (v.size() == 1) v.assign(count, v.front());
    if (v.size() != count)
        throw ConfigError(key + ": expected 1 or " + std::to_string(count) + " values, got " + std::to_string(v.size()));
    return v;
}

ScalingVector build_alpha(const Config& cfg, std::size_t count) {
    std::vector<std::string> kinds = cfg.has("alpha.kind") ? cfg.words("alpha.kind") : std::vector<std::string>{"constant"};
    if (kinds.size() == 1) kinds.assign(count, kinds.front());
    if (kinds.size() != count)
        throw ConfigError("alpha.kind: expected 1 or " + std::to_string(count) + " values");
    const auto c = broadcast(cfg, "alpha.c", count, {0.0});
    std::vector<double> rate(count, std::nan(""));
    if (cfg.has("alpha.rate")) rate = broadcast(cfg, "alpha.rate", count, {});
    std::vector<ScalingFunction> funcs;
    for (std::size_t i = 0; i < count; ++i) {
        if (kinds[i] == "constant") {
            funcs.push_back(ScalingFunction::constant(c[i]));
        } else if (kinds[i] == "sigmoid") {
            funcs.push_back(ScalingFunction::sigmoid(c[i], std::isnan(rate[i]) ? 10.0 : rate[i]));
        } else if (kinds[i] == "lorentzian") {
            const double r = std::isnan(rate[i]) ? 1.0 : rate[i];
            funcs.push_back(field("alpha.rate", [&] { return ScalingFunction::lorentzian(c[i], r); }));
        } else {
            throw ConfigError("alpha.kind: unknown kind '" + kinds[i] + "' (constant, sigmoid, lorentzian)");
        }
    }
    return ScalingVector(std::move(funcs));
}

BaseOperator build_base(const Config& cfg) {
    const std::string kind = cfg.str("base.kind", "quantum");
    const long long n = cfg.integer("base.n", 3);
    if (n < 1) throw ConfigError("base.n: must be a positive integer");
    if (kind == "quantum") {
        const double q = q_rule(cfg, "base.q", "arctan")(static_cast<int>(n));
        return QuantumBase{static_cast<int>(n), q};
    }
    if (cfg.has("base.q")) throw ConfigError("base.q: only the quantum base takes q");
    if (kind == "classical") return ClassicalBase{static_cast<int>(n)};
    if (kind == "integral") return IntegralBase{static_cast<int>(n)};
    throw ConfigError("base.kind: unknown kind '" + kind + "' (quantum, classical, integral)");
}

std::vector<int> range(int a, int b) {
    std::vector<int> v;
    for (int i = a; i <= b; ++i) v.push_back(i);
    return v;
}

Series grid_series(const std::string& name, const GridFunction& g) {
    Series s{name, {}, {}};
    for (std::size_t j = 0; j < g.size(); ++j) {
        s.x.push_back(g.x_at(j));
        s.y.push_back(g[j]);
    }
    return s;
}

Series row_series(const std::string& name, const std::vector<ConvergenceRow>& rows, bool bound) {
    Series s{name, {}, {}};
    for (const auto& r : rows) {
        s.x.push_back(r.n);
        s.y.push_back(bound ? r.bound : r.sup_error);
    }
    return s;
}

std::size_t count_failed(const std::vector<ConvergenceRow>& rows) {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.satisfied; }));
}

void write_rows(const fs::path& out, const std::string& name, const std::vector<ConvergenceRow>& rows) {
    auto os = open_out(out, name);
    write_convergence_csv(os, rows);
}

/// Uniform double in [0, 1) from the top 53 bits, independent of the standard library.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

LambdaSequence build_lambda(const Config& cfg, const std::string& kind, std::size_t count) {
    if (kind == "harmonic") return field("muntz.step", [&] { return LambdaSequence::harmonic(count, cfg.num("muntz.step", 1.0)); });
    if (kind == "geometric") return field("muntz.ratio", [&] { return LambdaSequence::geometric(count, cfg.num("muntz.ratio", 2.0)); });
    if (kind == "custom") {
        auto seq = LambdaSequence::custom(cfg.numbers("muntz.values"));
        field("muntz.values", [&] { seq.validate(); return 0; });
        return seq;
    }
    throw ConfigError("muntz.lambda: unknown sequence '" + kind + "' (harmonic, geometric, custom)");
}

}  // namespace

std::function<double(int)> q_rule(const Config& cfg, const std::string& key, const std::string& fallback) {
    const std::string v = cfg.str(key, fallback);
    if (v == "arctan") return [](int n) { return arctan_q_schedule(n); };
    const double q = cfg.has(key) ? cfg.num(key) : parse_number(v);
    if (!(q > 0.0 && q <= 1.0)) throw ConfigError(key + ": q must lie in (0, 1] or be 'arctan'");
    return [q](int) { return q; };
}

GermSource build_germ(const Config& cfg, const std::string& prefix, IntervalSpec interval, std::size_t m) {
    GermSource src;
    const std::string name = cfg.str(prefix + ".name", prefix == "germ" ? "sin" : "");
    if (name.empty()) throw ConfigError(prefix + ".name: missing");
    const std::vector<double> params =
        cfg.has(prefix + ".params") ? cfg.numbers(prefix + ".params") : std::vector<double>{};
    src.germ = field(prefix + ".name", [&] { return make_germ(name, params); });
    src.analytic = true;
    src.samples = src.germ.sample(interval, m);
    return src;
}

FractalSpec build_spec(const Config& cfg) {
    GridFunction germ;
    IntervalSpec interval(0.0, 1.0);
    if (cfg.has("germ.file")) {
        if (cfg.has("germ.name") || cfg.has("germ.params")) throw ConfigError("germ.file: cannot be combined with germ.name");
        try {
            germ = read_csv(cfg.str("germ.file"));
        } catch (const Error& e) {
            throw ConfigError(std::string("germ.file: ") + e.what());
        }
        interval = germ.interval();
        if (cfg.has("interval")) throw ConfigError("interval: taken from germ.file");
    } else if (cfg.has("interval")) {
        const auto v = cfg.numbers("interval");
        if (v.size() != 2) throw ConfigError("interval: expected two numbers");
        interval = field("interval", [&] { return IntervalSpec(v[0], v[1]); });
    }

    Partition partition;
    if (cfg.has("partition") && cfg.has("partition.uniform"))
        throw ConfigError("partition: give either explicit nodes or partition.uniform");
    if (cfg.has("partition")) {
        partition = field("partition", [&] { return Partition(cfg.numbers("partition")); });
    } else {
        const long long k = cfg.integer("partition.uniform", 2);
        if (k < 2) throw ConfigError("partition.uniform: needs at least 2 intervals");
        partition = Partition::uniform(interval, static_cast<std::size_t>(k));
    }
    if (partition.nodes().front() != interval.x1 || partition.nodes().back() != interval.xN)
        throw ConfigError("partition: end nodes must equal the interval end points");

    std::size_t m = default_grid_size(partition.interval_count());
    if (cfg.has("grid.size")) {
        const long long g = cfg.integer("grid.size", 0);
        if (g < 3) throw ConfigError("grid.size: needs at least 3 points");
        m = static_cast<std::size_t>(g);
    }
    if (germ.size() == 0) {
        germ = build_germ(cfg, "germ", interval, m).samples;
    } else if (cfg.has("grid.size") && germ.size() != m) {
        throw ConfigError("grid.size: germ.file has " + std::to_string(germ.size()) + " samples");
    }

    FractalSpec spec;
    spec.germ = std::move(germ);
    spec.partition = partition;
    spec.alpha = build_alpha(cfg, partition.interval_count());
    spec.base = build_base(cfg);
    spec.tol = cfg.num("solver.tol", spec.tol);
    spec.max_iter = static_cast<int>(cfg.integer("solver.max_iter", spec.max_iter));
    spec.direct = cfg.flag("solver.direct", spec.direct);
    spec.mkz.eps = cfg.num("mkz.eps", spec.mkz.eps);
    const long long terms = cfg.integer("mkz.max_terms", static_cast<long long>(spec.mkz.max_terms));
    if (terms < 1) throw ConfigError("mkz.max_terms: must be positive");
    spec.mkz.max_terms = static_cast<std::size_t>(terms);
    if (!(spec.mkz.eps > 0.0 && spec.mkz.eps < 1.0)) throw ConfigError("mkz.eps: must lie in (0, 1)");
    field("grid.size", [&] { spec.validate(); return 0; });
    return spec;
}

int cmd_solve(const Config& cfg, const fs::path& out, std::ostream& log) {
    const FractalSpec spec = build_spec(cfg);
    const FixedPointResult r = solve_fixed_point(spec);
    write_csv((out / "fractal.csv").string(), r.function);
    write_csv((out / "base.csv").string(), r.base);
    write_csv((out / "germ.csv").string(), spec.germ);
    write_plot(out / "fractal",
               {grid_series("germ", spec.germ), grid_series("base", r.base), grid_series("fractal", r.function)},
               {"alpha-fractal function, " + describe(spec.base), "x", "value"});
    Summary s;
    s.add("command", "solve")
        .add("base", describe(spec.base))
        .add("grid", spec.germ.size())
        .add("direct", r.direct ? "true" : "false")
        .add("iterations", r.iterations)
        .num("residual", r.residual)
        .num("alpha_sup", spec.alpha.sup_norm(spec.germ.interval()))
        .num("sup_fractal_minus_germ", sup_distance(r.function, spec.germ))
        .num("min", r.function.min())
        .num("max", r.function.max());
    s.write(out, log);
    return kOk;
}

int cmd_constrain(const Config& cfg, const fs::path& out, std::ostream& log) {
    const std::string mode = cfg.str("constrain.mode", "positivity");
    if (mode != "positivity" && mode != "one_sided" && mode != "dominance")
        throw ConfigError("constrain.mode: unknown mode '" + mode + "' (positivity, one_sided, dominance)");
    const FractalSpec spec = build_spec(cfg);
    const GridFunction& f = spec.germ;
    const IntervalSpec I = f.interval();

    GridFunction g;
    if (mode != "positivity") g = build_germ(cfg, "constrain.g", I, f.size()).samples;
    else if (cfg.has("constrain.g.name")) throw ConfigError("constrain.g.name: positivity mode takes no g");

    IntervalBounds bounds;
    if (mode == "positivity") {
        bounds = field("germ", [&] {
            return cfg.has("constrain.cn") ? positivity_bounds(f, spec, cfg.num("constrain.cn")) : positivity_bounds(f, spec);
        });
    } else if (mode == "one_sided") {
        bounds = field("constrain.g", [&] { return one_sided_bounds(f, g, spec); });
    } else {
        bounds = field("constrain.g", [&] { return dominance_bounds(f, g, spec); });
    }
    const ValidationReport report = validate_alpha(spec.alpha, bounds, I, f.size());
    {
        auto os = open_out(out, "bounds.csv");
        write_bounds_csv(os, bounds);
    }
    {
        auto os = open_out(out, "validation.txt");
        write_validation(os, report, bounds);
    }

    // The solve needs a contraction even when validation fails.
    const FixedPointResult r = solve_fixed_point(spec);
    write_csv((out / "fractal.csv").string(), r.function);
    write_csv((out / "germ.csv").string(), f);
    GridFunction base_g;
    auto margin_of = [&](const GridFunction& fa, const GridFunction* ga) {
        if (mode == "positivity") return fa.min();
        if (mode == "one_sided") return (fa - g).min();
        return (fa - *ga).min();
    };
    std::vector<Series> plotted{grid_series("f", f)};
    FixedPointResult rg;
    FractalSpec spec_g = spec;
    if (mode != "positivity") {
        write_csv((out / "g.csv").string(), g);
        plotted.push_back(grid_series("g", g));
    }
    if (mode == "dominance") {
        spec_g.germ = g;
        rg = solve_fixed_point(spec_g);
        write_csv((out / "g_fractal.csv").string(), rg.function);
    }
    plotted.push_back(grid_series("f_alpha", r.function));
    if (mode == "dominance") plotted.push_back(grid_series("g_alpha", rg.function));
    write_plot(out / "constrain", plotted, {"constraint " + mode + ", " + describe(spec.base), "x", "value"});

    const double margin = margin_of(r.function, mode == "dominance" ? &rg.function : nullptr);
    bool ordering_ok = margin >= -kOrderSlack;

    Summary s;
    s.add("command", "constrain")
        .add("mode", mode)
        .add("base", describe(spec.base))
        .add("admissible", report.admissible ? "true" : "false")
        .add("failing_intervals", report.failing().empty() ? "none" : report.failing())
        .num("alpha_sup", report.sup_norm)
        .num("margin", margin)
        .add("ordering", ordering_ok ? "holds" : "violated");

    const long long samples = cfg.integer("constrain.random", 0);
    if (samples < 0) throw ConfigError("constrain.random: must be >= 0");
    if (samples > 0) {
        const double shrink = cfg.num("constrain.margin", 1e-3);
        const IntervalBounds inner = bounds.shrunk(shrink);
        if (!inner.all_feasible()) {
            s.add("random", "skipped, empty bracket after margin");
        } else {
            std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.integer("seed", 0)));
            auto os = open_out(out, "random.csv");
            os << "sample";
            for (std::size_t i = 0; i < inner.size(); ++i) os << ",alpha_" << i + 1;
            os << ",margin,ok\n";
            std::size_t bad = 0;
            double worst = INFINITY;
            for (long long k = 0; k < samples; ++k) {
                std::vector<double> a(inner.size());
                for (std::size_t i = 0; i < a.size(); ++i) a[i] = inner.lo[i] + unit(rng) * (inner.hi[i] - inner.lo[i]);
                FractalSpec sk = spec;
                sk.alpha = ScalingVector::constants(a);
                const FixedPointResult rk = solve_fixed_point(sk, r.base);
                double mk = 0.0;
                if (mode == "dominance") {
                    FractalSpec gk = spec_g;
                    gk.alpha = sk.alpha;
                    const FixedPointResult rgk = solve_fixed_point(gk, rg.base);
                    mk = margin_of(rk.function, &rgk.function);
                } else {
                    mk = margin_of(rk.function, nullptr);
                }
                const bool ok = mk >= -kOrderSlack;
                bad += ok ? 0 : 1;
                worst = std::min(worst, mk);
                os << k + 1;
                for (double v : a) os << ',' << format_double(v);
                os << ',' << format_double(mk) << ',' << (ok ? "true" : "false") << '\n';
            }
            s.add("random_samples", samples).add("random_failures", bad).num("random_worst_margin", worst);
            ordering_ok = ordering_ok && bad == 0;
        }
    }
    s.write(out, log);
    if (!report.admissible) return kValidationFailure;
    return ordering_ok ? kOk : kBoundFailure;
}

int cmd_converge(const Config& cfg, const fs::path& out, std::ostream& log) {
    const std::string mode = cfg.str("converge.mode", "quantum");
    const FractalSpec spec = build_spec(cfg);
    const IntervalSpec I = spec.germ.interval();
    const std::size_t m = spec.germ.size();
    const long long fine = cfg.integer("converge.fine", 10);
    if (fine < 1) throw ConfigError("converge.fine: must be positive");
    const std::size_t fine_m = static_cast<std::size_t>(fine) * (m - 1) + 1;

    std::optional<GermSource> analytic;
    if (!cfg.has("germ.file")) analytic = build_germ(cfg, "germ", I, 2);
    const GridFunction omega_source = analytic ? analytic->germ.sample(I, fine_m) : spec.germ;

    Summary s;
    s.add("command", "converge").add("mode", mode);
    std::size_t failed = 0;

    if (mode == "quantum") {
        const auto orders = cfg.int_list("converge.n", range(3, 50));
        const auto rows = field("converge.n", [&] {
            return check_uniform_bound(spec, omega_source, orders, q_rule(cfg, "converge.q", "arctan"));
        });
        write_rows(out, "convergence.csv", rows);
        write_plot(out / "convergence", {row_series("sup_error", rows, false), row_series("bound", rows, true)},
                   {"uniform error against the bound", "n", "sup error", true});
        failed = count_failed(rows);
        s.add("rows", rows.size()).add("failed", failed).num("error_first", rows.front().sup_error)
            .num("error_last", rows.back().sup_error);
    } else if (mode == "classical") {
        if (!analytic || !analytic->germ.has_derivative())
            throw ConfigError("converge.mode: classical bounds need a named germ with a closed-form derivative");
        const auto orders = cfg.int_list("converge.n", range(4, 64));
        DerivativeData d;
        d.samples = analytic->germ.sample_derivative(I, fine_m);
        d.beta = cfg.num("converge.beta", 1.0);
        if (!(d.beta > 0.0 && d.beta <= 1.0)) throw ConfigError("converge.beta: must lie in (0, 1]");
        if (cfg.has("converge.lip")) {
            d.lip_constant = cfg.num("converge.lip");
        } else {
            // Largest difference quotient of f' between neighbouring fine nodes.
            double lip = 0.0;
            const double h = std::pow(d.samples.step(), d.beta);
            for (std::size_t j = 0; j + 1 < d.samples.size(); ++j)
                lip = std::max(lip, std::fabs(d.samples[j + 1] - d.samples[j]) / h);
            d.lip_constant = lip;
        }
        const auto r = field("converge.n", [&] { return check_classical_bounds(spec, omega_source, d, orders); });
        write_rows(out, "convergence_c0.csv", r.c0);
        write_rows(out, "convergence_c1.csv", r.c1);
        write_rows(out, "convergence_holder.csv", r.holder);
        write_plot(out / "convergence",
                   {row_series("sup_error", r.c0, false), row_series("bound_c0", r.c0, true),
                    row_series("bound_c1", r.c1, true), row_series("bound_holder", r.holder, true)},
                   {"classical error against the bounds", "n", "sup error", true});
        failed = count_failed(r.c0) + count_failed(r.c1) + count_failed(r.holder);
        s.add("rows", r.c0.size()).add("failed", failed).num("lip_constant", d.lip_constant).num("beta", d.beta);
        try {
            s.num("rate_exponent", rate_exponent(r.c0));
        } catch (const DegenerateError&) {
            s.add("rate_exponent", "undefined");
        }
    } else if (mode == "monotone") {
        const auto orders = cfg.int_list("converge.n", range(1, 20));
        if (cfg.str("converge.q", "") == "arctan") throw ConfigError("converge.q: the monotone check takes one fixed q");
        const double q = q_rule(cfg, "converge.q", "0.8")(0);
        const auto rep = field("converge", [&] { return monotone_sequence_check(spec, orders, q); });
        {
            auto os = open_out(out, "monotone.csv");
            os << "n,max_above_germ,min_above_germ,max_step_up\n";
            for (const auto& row : rep.rows)
                os << row.n << ',' << format_double(row.above) << ',' << format_double(row.below) << ','
                   << format_double(row.step_up) << '\n';
        }
        Series up{"max_above_germ", {}, {}}, low{"min_above_germ", {}, {}};
        for (const auto& row : rep.rows) {
            up.x.push_back(row.n);
            up.y.push_back(row.above);
            low.x.push_back(row.n);
            low.y.push_back(row.below);
        }
        write_plot(out / "monotone", {up, low}, {"range of f_n - f", "n", "value"});
        failed = rep.non_increasing ? 0 : 1;
        s.num("q", q)
            .num("max_increase", rep.max_increase)
            .num("max_decrease", rep.max_decrease)
            .add("non_increasing", rep.non_increasing ? "true" : "false")
            .add("non_decreasing", rep.non_decreasing ? "true" : "false")
            .add("envelope", rep.envelope)
            .num("envelope_min", rep.envelope_min)
            .num("envelope_max", rep.envelope_max)
            .add("base_above_germ", rep.base_above_germ ? "true" : "false")
            .add("base_non_increasing", rep.base_non_increasing ? "true" : "false");
    } else {
        throw ConfigError("converge.mode: unknown mode '" + mode + "' (quantum, classical, monotone)");
    }
    s.write(out, log);
    return failed == 0 ? kOk : kBoundFailure;
}

int cmd_dimension(const Config& cfg, const fs::path& out, std::ostream& log) {
    const FractalSpec spec = build_spec(cfg);
    const IntervalSpec I = spec.germ.interval();
    const FixedPointResult r = solve_fixed_point(spec);
    const std::size_t maps = spec.partition.interval_count();

    int levels = 0;
    if (cfg.has("dimension.levels")) {
        levels = static_cast<int>(cfg.integer("dimension.levels", 0));
        if (levels < 0 || levels > 12) throw ConfigError("dimension.levels: must lie in [0, 12]");
    } else {
        const long long target = cfg.integer("dimension.points", 1000000);
        std::size_t pts = spec.germ.size();
        while (static_cast<long long>(pts) < target && levels < 12) {
            pts = (pts - 1) * maps + 1;
            ++levels;
        }
    }
    const GraphPoints graph = graph_points(spec, r, levels);
    const int jmin = static_cast<int>(cfg.integer("dimension.jmin", 3));
    const int jmax = static_cast<int>(cfg.integer("dimension.jmax", 13));
    DimensionEstimate est = field("dimension.jmin", [&] { return box_dimension(graph, I, jmin, jmax); });
    const double beta = cfg.num("dimension.beta", 1.0);
    std::string bounds_note = "attached";
    try {
        field("dimension.beta", [&] { attach_bounds(est, spec, beta); return 0; });
        if (!est.has_bounds) bounds_note = "hypotheses not met";
    } catch (const DegenerateError& e) {
        bounds_note = std::string("degenerate: ") + e.what();
    }
    {
        auto os = open_out(out, "dimension.csv");
        write_dimension_csv(os, est);
    }

    Series counts{"log2 count", {}, {}}, fit{"fit", {}, {}};
    double sx = 0, sy = 0;
    for (std::size_t k = 0; k < est.counts.size(); ++k) {
        counts.x.push_back(std::log2(I.length() / est.epsilons[k]));
        counts.y.push_back(std::log2(static_cast<double>(est.counts[k])));
        sx += counts.x.back();
        sy += counts.y.back();
    }
    const double kk = static_cast<double>(counts.x.size());
    for (double x : {counts.x.front(), counts.x.back()}) {
        fit.x.push_back(x);
        fit.y.push_back(sy / kk + est.slope * (x - sx / kk));
    }
    write_plot(out / "dimension", {counts, fit}, {"box counts", "log2(1/eps)", "log2 N(eps)"});
    write_plot(out / "graph", {Series{"graph", graph.x, graph.y}}, {"attractor graph", "x", "y"});

    const double tol = cfg.num("dimension.tol", 0.1);
    bool ok = true;
    if (est.has_bounds) ok = est.slope >= est.lower - tol && (!est.upper_finite || est.slope <= est.upper + tol);

    Summary s;
    s.add("command", "dimension")
        .add("levels", levels)
        .add("points", est.points)
        .num("slope", est.slope)
        .add("bounds", bounds_note);
    if (est.has_bounds) s.num("gamma", est.gamma).num("lower", est.lower).num("upper", est.upper);
    s.add("within_bounds", est.has_bounds ? (ok ? "true" : "false") : "n/a");
    s.write(out, log);
    return ok ? kOk : kBoundFailure;
}

int cmd_muntz(const Config& cfg, const fs::path& out, std::ostream& log) {
    const FractalSpec spec = build_spec(cfg);
    const IntervalSpec I = spec.germ.interval();
    const GridFunction target =
        cfg.has("muntz.target.name") ? build_germ(cfg, "muntz.target", I, spec.germ.size()).samples : spec.germ;
    const auto ms = cfg.int_list("muntz.m", range(1, 12));
    if (*std::min_element(ms.begin(), ms.end()) < 1) throw ConfigError("muntz.m: orders must be positive");
    const int mmax = *std::max_element(ms.begin(), ms.end());
    const long long count = cfg.integer("muntz.count", mmax);

    DensityOptions opts;
    opts.m_values = ms;
    const long long factor = cfg.integer("muntz.n_factor", 5);
    if (factor < 1) throw ConfigError("muntz.n_factor: must be positive");
    opts.n_rule = [factor](int m) { return static_cast<int>(factor) * m; };
    opts.q_rule = q_rule(cfg, "base.q", "arctan");
    opts.p = cfg.num("muntz.p", 2.0);
    if (!(opts.p >= 1.0)) throw ConfigError("muntz.p: must be >= 1");
    opts.lp_classification = cfg.has("muntz.p");

    std::vector<std::string> kinds{cfg.str("muntz.lambda", "harmonic")};
    if (cfg.has("muntz.compare")) kinds.push_back(cfg.str("muntz.compare"));

    Summary s;
    s.add("command", "muntz");
    std::vector<Series> plotted;
    auto os = open_out(out, "density.csv");
    bool header = true;
    for (const auto& kind : kinds) {
        const LambdaSequence seq = build_lambda(cfg, kind, static_cast<std::size_t>(std::max<long long>(count, 1)));
        const auto rows = field("muntz.count", [&] { return density_experiment(target, seq, spec, opts); });
        std::ostringstream table;
        write_density_csv(table, rows);
        std::string text = table.str();
        if (!header) text = text.substr(text.find('\n') + 1);
        header = false;
        os << text;
        Series curve{kind, {}, {}};
        bool monotone = true;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            curve.x.push_back(rows[k].m);
            curve.y.push_back(rows[k].residual_sup);
            if (k > 0 && rows[k].residual_sup > rows[k - 1].residual_sup) monotone = false;
        }
        plotted.push_back(curve);
        const auto cls = classify_lambda(seq, opts.lp_classification ? std::optional<double>(opts.p) : std::nullopt);
        s.add(kind + ".class", to_string(cls.cls))
            .num(kind + ".residual_sup_last", rows.back().residual_sup)
            .num(kind + ".residual_lp_last", rows.back().residual_lp)
            .add(kind + ".non_increasing", monotone ? "true" : "false");
    }
    if (plotted.size() == 2) {
        std::string above;
        for (std::size_t k = 0; k < plotted[0].x.size(); ++k)
            if (plotted[1].y[k] > plotted[0].y[k]) above += (above.empty() ? "" : " ") + std::to_string(static_cast<int>(plotted[0].x[k]));
        s.add("compare_above_at_m", above.empty() ? "none" : above);
    }
    write_plot(out / "density", plotted, {"Muntz least-squares residual", "m", "sup residual", true});
    s.write(out, log);
    return kOk;
}

int cmd_lp(const Config& cfg, const fs::path& out, std::ostream& log) {
    const FractalSpec spec = build_spec(cfg);
    if (!std::holds_alternative<IntegralBase>(spec.base))
        throw ConfigError("base.kind: the L^p suite uses the integral base");
    const std::vector<double> ps = cfg.has("lp.p") ? cfg.numbers("lp.p") : std::vector<double>{1.0, 2.0};
    const auto orders = cfg.int_list("lp.n", range(2, 40));
    Summary s;
    s.add("command", "lp");
    std::vector<LpRow> all;
    std::vector<Series> plotted;
    for (double p : ps) {
        const double lambda = field("lp.p", [&] { return lp_contraction_factor(spec, p); });
        const auto rows = field("lp.n", [&] { return lp_error_check(spec, p, orders); });
        Series err{"error p=" + format_double(p), {}, {}}, rhs{"bound p=" + format_double(p), {}, {}};
        for (const auto& r : rows) {
            err.x.push_back(r.n);
            err.y.push_back(r.lp_error);
            rhs.x.push_back(r.n);
            rhs.y.push_back(r.rhs_bound);
        }
        plotted.push_back(err);
        plotted.push_back(rhs);
        all.insert(all.end(), rows.begin(), rows.end());
        s.num("lambda_p" + format_double(p), lambda);
    }
    {
        auto os = open_out(out, "lp.csv");
        write_lp_csv(os, all);
    }
    write_plot(out / "lp", plotted, {"L^p error against the bound", "n", "L^p error", true});
    const auto failed = std::count_if(all.begin(), all.end(), [](const LpRow& r) { return !r.satisfied; });
    s.add("rows", all.size()).add("failed", failed);
    s.write(out, log);
    return failed == 0 ? kOk : kBoundFailure;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"solve", "constrain", "converge", "dimension", "muntz", "lp"};
    return names;
}

int run_command(const std::string& name, const Config& cfg, const fs::path& out, std::ostream& log,
                std::ostream& err) {
    try {
        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec) throw Error("cannot create output directory " + out.string());
        if (name == "solve") return cmd_solve(cfg, out, log);
        if (name == "constrain") return cmd_constrain(cfg, out, log);
        if (name == "converge") return cmd_converge(cfg, out, log);
        if (name == "dimension") return cmd_dimension(cfg, out, log);
        if (name == "muntz") return cmd_muntz(cfg, out, log);
        if (name == "lp") return cmd_lp(cfg, out, log);
        throw ConfigError("unknown command '" + name + "'");
    } catch (const ConfigError& e) {
        err << "mkzfrac " << name << ": config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const PreconditionError& e) {
        err << "mkzfrac " << name << ": invalid input: " << e.what() << '\n';
        return kConfigError;
    } catch (const NonContractionError& e) {
        err << "mkzfrac " << name << ": alpha: " << e.what() << '\n';
        return kConfigError;
    } catch (const DegenerateError& e) {
        err << "mkzfrac " << name << ": degenerate input: " << e.what() << '\n';
        return kConfigError;
    } catch (const NonConvergenceError& e) {
        err << "mkzfrac " << name << ": solver: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const TruncationError& e) {
        err << "mkzfrac " << name << ": series: " << e.what() << " (raise mkz.max_terms)\n";
        return kNonConvergence;
    } catch (const std::exception& e) {
        err << "mkzfrac " << name << ": " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace mkzfrac::app
