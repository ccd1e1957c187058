#include "mkzfrac/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mkzfrac/error.hpp"

namespace mkzfrac {

IntervalSpec::IntervalSpec(double a, double b) : x1(a), xN(b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw PreconditionError("interval: need finite x1 < xN");
    }
}

GridFunction::GridFunction(IntervalSpec interval, std::vector<double> values)
    : interval_(interval), values_(std::move(values)) {
    if (values_.size() < 2) throw PreconditionError("grid function needs at least 2 samples");
    step_ = interval_.length() / static_cast<double>(values_.size() - 1);
}

GridFunction GridFunction::sample(IntervalSpec interval, std::size_t m,
                                  const std::function<double(double)>& fn) {
    GridFunction g(interval, std::vector<double>(std::max<std::size_t>(m, 2), 0.0));
    for (std::size_t j = 0; j < g.size(); ++j) g.values_[j] = fn(g.x_at(j));
    return g;
}

GridFunction GridFunction::constant(IntervalSpec interval, std::size_t m, double c) {
    return GridFunction(interval, std::vector<double>(std::max<std::size_t>(m, 2), c));
}

double GridFunction::x_at(std::size_t j) const noexcept {
    const std::size_t last = values_.size() - 1;
    if (j >= last) return interval_.xN;
    return interval_.x1 + interval_.length() * static_cast<double>(j) / static_cast<double>(last);
}

GridLocation locate(const IntervalSpec& interval, std::size_t m, double x) noexcept {
    const double cells = static_cast<double>(m - 1);
    double pos = (x - interval.x1) / interval.length() * cells;
    if (!(pos > 0.0)) return {0, 0.0};
    if (pos >= cells) return {m - 2, 1.0};
    const double nearest = std::nearbyint(pos);
    if (std::fabs(pos - nearest) < 1e-9) {
        const auto idx = static_cast<std::size_t>(nearest);
        if (idx >= m - 1) return {m - 2, 1.0};
        return {idx, 0.0};
    }
    const double fl = std::floor(pos);
    return {static_cast<std::size_t>(fl), pos - fl};
}

double GridFunction::operator()(double x) const noexcept {
    const GridLocation loc = locate(interval_, values_.size(), x);
    const double g0 = values_[loc.index];
    if (loc.weight == 0.0) return g0;
    if (loc.weight == 1.0) return values_[loc.index + 1];
    return g0 + loc.weight * (values_[loc.index + 1] - g0);
}

double GridFunction::sup_norm() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

double GridFunction::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
double GridFunction::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

bool GridFunction::same_grid(const GridFunction& other) const noexcept {
    return values_.size() == other.values_.size() && interval_.x1 == other.interval_.x1 &&
           interval_.xN == other.interval_.xN;
}

namespace {

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* what) {
    if (!a.same_grid(b)) throw PreconditionError(std::string(what) + ": grid functions live on different grids");
}

}  // namespace

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "operator-");
    std::vector<double> v(a.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] - b[j];
    return GridFunction(a.interval(), std::move(v));
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "operator+");
    std::vector<double> v(a.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] + b[j];
    return GridFunction(a.interval(), std::move(v));
}

GridFunction operator*(double s, const GridFunction& a) {
    std::vector<double> v(a.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = s * a[j];
    return GridFunction(a.interval(), std::move(v));
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "sup_distance");
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::fabs(a[j] - b[j]));
    return m;
}

double trapezoid(const GridFunction& g) {
    const auto v = g.values();
    double inner = 0.0;
    for (std::size_t j = 1; j + 1 < v.size(); ++j) inner += v[j];
    return g.step() * (0.5 * (v.front() + v.back()) + inner);
}

double lp_norm(const GridFunction& g, double p) {
    if (!(p >= 1.0)) throw PreconditionError("L^p norm requires p >= 1");
    std::vector<double> powed(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) powed[j] = std::pow(std::fabs(g[j]), p);
    const double integral = trapezoid(GridFunction(g.interval(), std::move(powed)));
    return p == 1.0 ? integral : std::pow(integral, 1.0 / p);
}

double lp_distance(const GridFunction& a, const GridFunction& b, double p) { return lp_norm(a - b, p); }

double integrate_interpolant(const GridFunction& g, double a, double b) {
    const IntervalSpec& I = g.interval();
    a = std::clamp(a, I.x1, I.xN);
    b = std::clamp(b, I.x1, I.xN);
    if (!(b > a)) return 0.0;
    const std::size_t m = g.size();
    const double cells = static_cast<double>(m - 1);
    auto cell_of = [&](double x) {
        const double pos = (x - I.x1) / I.length() * cells;
        return std::min(static_cast<std::size_t>(std::max(0.0, std::floor(pos))), m - 2);
    };
    auto value = [&](double x, std::size_t cell) {
        const double w = (x - g.x_at(cell)) / g.step();
        return g[cell] + w * (g[cell + 1] - g[cell]);
    };
    const std::size_t ca = cell_of(a);
    const std::size_t cb = cell_of(b);
    if (ca == cb) return (b - a) * 0.5 * (value(a, ca) + value(b, cb));
    double total = (g.x_at(ca + 1) - a) * 0.5 * (value(a, ca) + g[ca + 1]);
    double inner = 0.0;
    for (std::size_t j = ca + 1; j < cb; ++j) inner += 0.5 * (g[j] + g[j + 1]);
    total += g.step() * inner;
    total += (b - g.x_at(cb)) * 0.5 * (g[cb] + value(b, cb));
    return total;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const GridFunction& g) {
    os << "x,value\n";
    for (std::size_t j = 0; j < g.size(); ++j) {
        os << format_double(g.x_at(j)) << ',' << format_double(g[j]) << '\n';
    }
}

void write_csv(const std::string& path, const GridFunction& g) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path + " for writing");
    write_csv(os, g);
}

namespace {

double parse_number(std::string_view s, std::size_t line) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw PreconditionError("csv line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

GridFunction read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw PreconditionError("csv: empty input");
    std::vector<double> xs, vs;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw PreconditionError("csv line " + std::to_string(lineno) + ": expected x,value");
        xs.push_back(parse_number(std::string_view(line).substr(0, comma), lineno));
        vs.push_back(parse_number(std::string_view(line).substr(comma + 1), lineno));
    }
    if (xs.size() < 2) throw PreconditionError("csv: need at least two samples");
    GridFunction g(IntervalSpec(xs.front(), xs.back()), std::move(vs));
    for (std::size_t j = 0; j < xs.size(); ++j) {
        if (std::fabs(xs[j] - g.x_at(j)) > 1e-9 * g.interval().length()) {
            throw PreconditionError("csv: abscissae are not uniformly spaced (row " + std::to_string(j + 2) + ")");
        }
    }
    return g;
}

GridFunction read_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw PreconditionError("cannot open " + path);
    return read_csv(is);
}

}  // namespace mkzfrac
