#include "mkzfrac/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "mkzfrac/error.hpp"

namespace mkzfrac {

Extrema extrema(const GridFunction& f, const std::vector<AffineMap>& maps, const GridFunction& base) {
    if (!f.same_grid(base)) throw PreconditionError("extrema: f and base must share a grid");
    Extrema e;
    e.phi.assign(maps.size(), 0.0);
    e.Phi.assign(maps.size(), 0.0);
    for (std::size_t i = 0; i < maps.size(); ++i) {
        double lo = f(maps[i](f.x_at(0)));
        double hi = lo;
        for (std::size_t j = 1; j < f.size(); ++j) {
            const double v = f(maps[i](f.x_at(j)));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        e.phi[i] = lo;
        e.Phi[i] = hi;
    }
    e.phi_n = base.min();
    e.Phi_n = base.max();
    return e;
}

bool IntervalBounds::all_feasible() const noexcept {
    return std::all_of(feasible.begin(), feasible.end(), [](bool b) { return b; });
}

IntervalBounds IntervalBounds::shrunk(double margin) const {
    IntervalBounds out = *this;
    for (std::size_t i = 0; i < size(); ++i) {
        out.lo[i] += margin;
        out.hi[i] -= margin;
        out.feasible[i] = feasible[i] && out.lo[i] <= out.hi[i];
    }
    return out;
}

namespace {

void finish(IntervalBounds& b) {
    b.feasible.assign(b.lo.size(), false);
    for (std::size_t i = 0; i < b.lo.size(); ++i) {
        b.lo[i] = std::max(b.lo[i], -1.0 + kAlphaMargin);
        b.hi[i] = std::min(b.hi[i], 1.0 - kAlphaMargin);
        b.feasible[i] = b.lo[i] <= b.hi[i];
    }
}

void require_nonnegative(const GridFunction& f, const char* what) {
    if (f.min() < 0.0) {
        std::ostringstream os;
        os << what << ": function takes the negative grid value " << f.min();
        throw PreconditionError(os.str());
    }
}

void require_above(const GridFunction& f, const GridFunction& g) {
    if (!f.same_grid(g)) throw PreconditionError("f and g must share a grid");
    const double gap = (f - g).min();
    if (gap < 0.0) {
        std::ostringstream os;
        os << "f must dominate g on the grid; min(f - g) = " << gap;
        throw PreconditionError(os.str());
    }
}

IntervalBounds positivity_from(const GridFunction& f, const FractalSpec& spec, const GridFunction& base, double cn) {
    require_nonnegative(f, "positivity bounds");
    const Extrema e = extrema(f, build_maps(spec.partition), base);
    if (!(cn > std::max(e.phi_n, f.sup_norm())) || !(cn > e.Phi_n)) {
        std::ostringstream os;
        os << "C_n = " << cn << " must exceed max{phi_n, ||f||, Phi_n} = "
           << std::max({e.phi_n, f.sup_norm(), e.Phi_n});
        throw PreconditionError(os.str());
    }
    if (!(e.Phi_n > 0.0)) throw DegenerateError("positivity bounds: max of the base function is 0");
    IntervalBounds b;
    const std::size_t count = e.phi.size();
    b.lo.resize(count);
    b.hi.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        b.lo[i] = std::max(-e.phi[i] / (cn - e.phi_n), -(cn - e.Phi[i]) / e.Phi_n);
        b.hi[i] = std::min(e.phi[i] / e.Phi_n, (cn - e.Phi[i]) / (cn - e.phi_n));
    }
    finish(b);
    return b;
}

// hi_i = min{phi(h, i) / denom, 1}, lo_i = 0.
IntervalBounds upper_only(const GridFunction& h, const FractalSpec& spec, double denom, const char* what) {
    if (!(denom > 0.0)) {
        std::ostringstream os;
        os << what << ": bound denominator " << denom << " is not positive";
        throw DegenerateError(os.str());
    }
    const auto maps = build_maps(spec.partition);
    const Extrema e = extrema(h, maps, h);
    IntervalBounds b;
    b.lo.assign(maps.size(), 0.0);
    b.hi.resize(maps.size());
    for (std::size_t i = 0; i < maps.size(); ++i) b.hi[i] = std::min(e.phi[i] / denom, 1.0);
    finish(b);
    return b;
}

}  // namespace

double default_cn(const GridFunction& f, const GridFunction& base) {
    return std::max({base.min(), f.sup_norm(), base.max()}) * 1.25 + 0.1;
}

IntervalBounds positivity_bounds(const GridFunction& f, const FractalSpec& spec, double cn) {
    return positivity_from(f, spec, compute_base(f, spec.base, spec.mkz), cn);
}

IntervalBounds positivity_bounds(const GridFunction& f, const FractalSpec& spec) {
    const GridFunction base = compute_base(f, spec.base, spec.mkz);
    return positivity_from(f, spec, base, default_cn(f, base));
}

IntervalBounds double_sequence_bounds(const GridFunction& fk, const FractalSpec& spec, double c, int k) {
    IntervalBounds b = positivity_bounds(fk, spec, c);
    b.k = k;
    std::visit([&](const auto& op) { b.n = op.n; }, spec.base);
    return b;
}

IntervalBounds one_sided_bounds(const GridFunction& f, const GridFunction& g, const FractalSpec& spec) {
    require_above(f, g);
    const GridFunction base = compute_base(f, spec.base, spec.mkz);
    return upper_only(f - g, spec, base.max() - g.min(), "one-sided bounds");
}

IntervalBounds dominance_bounds(const GridFunction& f, const GridFunction& g, const FractalSpec& spec) {
    require_above(f, g);
    const GridFunction h = f - g;
    const GridFunction base = compute_base(h, spec.base, spec.mkz);
    return upper_only(h, spec, base.max(), "dominance bounds");
}

std::string ValidationReport::failing() const {
    std::string s;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (intervals[i].pass) continue;
        if (!s.empty()) s += ',';
        s += std::to_string(i + 1);
    }
    return s;
}

ValidationReport validate_alpha(const ScalingVector& alpha, const IntervalBounds& bounds, const IntervalSpec& interval,
                                std::size_t samples) {
    if (alpha.size() != bounds.size()) throw PreconditionError("alpha and bounds have different interval counts");
    if (samples < 2) throw PreconditionError("validation needs at least 2 samples");
    ValidationReport r;
    r.intervals.resize(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        AlphaCheck& c = r.intervals[i];
        c.min_value = alpha[i](interval.x1);
        c.max_value = c.min_value;
        for (std::size_t j = 0; j < samples; ++j) {
            const double x = j + 1 == samples
                                 ? interval.xN
                                 : interval.x1 + interval.length() * static_cast<double>(j) / static_cast<double>(samples - 1);
            const double v = alpha[i](x);
            c.min_value = std::min(c.min_value, v);
            c.max_value = std::max(c.max_value, v);
            c.worst_violation = std::max({c.worst_violation, bounds.lo[i] - v, v - bounds.hi[i]});
        }
        c.pass = bounds.feasible[i] && c.worst_violation <= 0.0;
        r.sup_norm = std::max({r.sup_norm, std::fabs(c.min_value), std::fabs(c.max_value)});
        r.admissible = r.admissible && c.pass;
    }
    r.contraction = r.sup_norm < 1.0;
    r.admissible = r.admissible && r.contraction;
    return r;
}

void write_bounds_csv(std::ostream& os, const IntervalBounds& b) {
    os << "interval,lo,hi,feasible\n";
    for (std::size_t i = 0; i < b.size(); ++i)
        os << i + 1 << ',' << format_double(b.lo[i]) << ',' << format_double(b.hi[i]) << ','
           << (b.feasible[i] ? "true" : "false") << '\n';
}

void write_validation(std::ostream& os, const ValidationReport& r, const IntervalBounds& b) {
    os << "interval,lo,hi,alpha_min,alpha_max,worst_violation,pass\n";
    for (std::size_t i = 0; i < r.intervals.size(); ++i) {
        const AlphaCheck& c = r.intervals[i];
        os << i + 1 << ',' << format_double(b.lo[i]) << ',' << format_double(b.hi[i]) << ','
           << format_double(c.min_value) << ',' << format_double(c.max_value) << ','
           << format_double(c.worst_violation) << ',' << (c.pass ? "true" : "false") << '\n';
    }
    os << "# sup_norm=" << format_double(r.sup_norm) << " contraction=" << (r.contraction ? "true" : "false")
       << " admissible=" << (r.admissible ? "true" : "false") << '\n';
}

}  // namespace mkzfrac
