#include "mkzfrac/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mkzfrac/error.hpp"

namespace mkzfrac {

ScalingFunction ScalingFunction::constant(double c) {
    ScalingFunction s;
    s.kind_ = Kind::constant;
    s.c_ = c;
    return s;
}

ScalingFunction ScalingFunction::sigmoid(double c, double rate) {
    ScalingFunction s;
    s.kind_ = Kind::sigmoid;
    s.c_ = c;
    s.rate_ = rate;
    return s;
}

ScalingFunction ScalingFunction::lorentzian(double c, double rate) {
    if (rate < 0.0) throw PreconditionError("lorentzian scaling needs a non-negative rate");
    ScalingFunction s;
    s.kind_ = Kind::lorentzian;
    s.c_ = c;
    s.rate_ = rate;
    return s;
}

ScalingFunction ScalingFunction::tabulated(GridFunction samples) {
    ScalingFunction s;
    s.kind_ = Kind::tabulated;
    s.table_ = std::move(samples);
    return s;
}

double ScalingFunction::operator()(double x) const noexcept {
    switch (kind_) {
        case Kind::constant: return c_;
        case Kind::sigmoid: return c_ / (1.0 + std::exp(-rate_ * x));
        case Kind::lorentzian: return c_ / (1.0 + rate_ * x * x);
        case Kind::tabulated: return table_(x);
    }
    return 0.0;
}

double ScalingFunction::sup_norm(const IntervalSpec& I) const {
    switch (kind_) {
        case Kind::constant: return std::fabs(c_);
        case Kind::sigmoid: return std::max(std::fabs((*this)(I.x1)), std::fabs((*this)(I.xN)));
        case Kind::lorentzian: {
            const double closest = std::clamp(0.0, I.x1, I.xN);
            return std::fabs((*this)(closest));
        }
        case Kind::tabulated: return table_.sup_norm();
    }
    return 0.0;
}

double ScalingFunction::inf(const IntervalSpec& I) const {
    switch (kind_) {
        case Kind::constant: return c_;
        case Kind::sigmoid:
        case Kind::lorentzian: {
            double lo = std::min((*this)(I.x1), (*this)(I.xN));
            if (kind_ == Kind::lorentzian) lo = std::min(lo, (*this)(std::clamp(0.0, I.x1, I.xN)));
            return lo;
        }
        case Kind::tabulated: return table_.min();
    }
    return 0.0;
}

std::string ScalingFunction::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::constant: os << c_; break;
        case Kind::sigmoid: os << c_ << "/(1+exp(-" << rate_ << "x))"; break;
        case Kind::lorentzian: os << c_ << "/(1+" << rate_ << "x^2)"; break;
        case Kind::tabulated: os << "tabulated[" << table_.size() << "]"; break;
    }
    return os.str();
}

ScalingVector ScalingVector::constants(const std::vector<double>& c) {
    std::vector<ScalingFunction> f;
    f.reserve(c.size());
    for (double v : c) f.push_back(ScalingFunction::constant(v));
    return ScalingVector(std::move(f));
}

double ScalingVector::sup_norm(const IntervalSpec& interval) const {
    double m = 0.0;
    for (const auto& f : funcs_) m = std::max(m, f.sup_norm(interval));
    return m;
}

bool ScalingVector::all_constant() const noexcept {
    return std::all_of(funcs_.begin(), funcs_.end(),
                       [](const ScalingFunction& f) { return f.kind() == ScalingFunction::Kind::constant; });
}

double ScalingVector::gamma() const {
    if (!all_constant()) throw PreconditionError("gamma = sum |alpha_i| is only defined for constant scalings");
    double s = 0.0;
    for (const auto& f : funcs_) s += std::fabs(f.coefficient());
    return s;
}

}  // namespace mkzfrac
