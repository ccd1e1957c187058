#include "mkzfrac/functions.hpp"

#include <cmath>
#include <numbers>

#include "mkzfrac/error.hpp"

namespace mkzfrac {

GridFunction Germ::sample(IntervalSpec interval, std::size_t m) const {
    return GridFunction::sample(interval, m, value);
}

GridFunction Germ::sample_derivative(IntervalSpec interval, std::size_t m) const {
    if (!derivative) throw PreconditionError("germ '" + name + "' has no closed-form derivative");
    return GridFunction::sample(interval, m, derivative);
}

const std::vector<std::string>& germ_names() {
    static const std::vector<std::string> names{"sin", "sinpi", "poly", "power", "wave", "dome"};
    return names;
}

namespace {

double param(const std::vector<double>& p, std::size_t i, double fallback) {
    return i < p.size() ? p[i] : fallback;
}

void expect_at_most(const std::string& name, const std::vector<double>& p, std::size_t count) {
    if (p.size() > count)
        throw PreconditionError("germ '" + name + "' takes at most " + std::to_string(count) + " parameters");
}

}  // namespace

Germ make_germ(const std::string& name, const std::vector<double>& p) {
    using std::numbers::pi;
    Germ g;
    g.name = name;
    if (name == "sin") {
        expect_at_most(name, p, 1);
        const double k = param(p, 0, 1.0);
        g.value = [k](double x) { return std::sin(k * x); };
        g.derivative = [k](double x) { return k * std::cos(k * x); };
    } else if (name == "sinpi") {
        expect_at_most(name, p, 1);
        const double c = param(p, 0, 0.0);
        g.value = [c](double x) { return std::sin(pi * x) + c; };
        g.derivative = [](double x) { return pi * std::cos(pi * x); };
    } else if (name == "poly") {
        if (p.empty()) throw PreconditionError("germ 'poly' needs at least one coefficient");
        g.value = [p](double x) {
            double s = 0.0;
            for (std::size_t j = p.size(); j-- > 0;) s = s * x + p[j];
            return s;
        };
        g.derivative = [p](double x) {
            double s = 0.0;
            for (std::size_t j = p.size(); j-- > 1;) s = s * x + static_cast<double>(j) * p[j];
            return s;
        };
    } else if (name == "power") {
        expect_at_most(name, p, 1);
        const double lam = param(p, 0, 1.0);
        if (lam < 0.0) throw PreconditionError("germ 'power' needs lambda >= 0");
        g.value = [lam](double x) { return lam == 0.0 ? 1.0 : std::pow(x, lam); };
        if (lam == 0.0) g.derivative = [](double) { return 0.0; };
        else if (lam >= 1.0) g.derivative = [lam](double x) { return lam * std::pow(x, lam - 1.0); };
    } else if (name == "wave") {
        expect_at_most(name, p, 0);
        g.value = [](double x) { return 0.5 * std::sin(4.0 * pi * x) + 1.0; };
        g.derivative = [](double x) { return 2.0 * pi * std::cos(4.0 * pi * x); };
    } else if (name == "dome") {
        expect_at_most(name, p, 2);
        const double s = param(p, 0, 1.0);
        const double c = param(p, 1, 1.0);
        g.value = [s, c](double x) { return -s * (2.0 * x - c) * (2.0 * x - c); };
        g.derivative = [s, c](double x) { return -4.0 * s * (2.0 * x - c); };
    } else {
        throw PreconditionError("unknown germ '" + name + "'");
    }
    return g;
}

}  // namespace mkzfrac
