#pragma once

#include <string>
#include <vector>

#include "mkzfrac/grid.hpp"

namespace mkzfrac {

/// One scaling function alpha_i on I. The closed families cover the worked
/// examples: constants, logistic ramps c/(1+exp(-a x)) and c/(1+a x^2).
class ScalingFunction {
public:
    enum class Kind { constant, sigmoid, lorentzian, tabulated };

    static ScalingFunction constant(double c);
    static ScalingFunction sigmoid(double c, double rate);
    static ScalingFunction lorentzian(double c, double rate);
    static ScalingFunction tabulated(GridFunction samples);

    double operator()(double x) const noexcept;

    /// sup over I of |alpha|; exact for the closed families.
    double sup_norm(const IntervalSpec& interval) const;

    /// Smallest value over I; exact for the closed families.
    double inf(const IntervalSpec& interval) const;

    Kind kind() const noexcept { return kind_; }
    double coefficient() const noexcept { return c_; }
    double rate() const noexcept { return rate_; }

    std::string describe() const;

private:
    Kind kind_ = Kind::constant;
    double c_ = 0.0;
    double rate_ = 0.0;
    GridFunction table_;
};

/// alpha = (alpha_1, ..., alpha_{N-1}).
class ScalingVector {
public:
    ScalingVector() = default;
    explicit ScalingVector(std::vector<ScalingFunction> funcs) : funcs_(std::move(funcs)) {}

    static ScalingVector constants(const std::vector<double>& c);
    static ScalingVector zero(std::size_t count) { return constants(std::vector<double>(count, 0.0)); }

    std::size_t size() const noexcept { return funcs_.size(); }
    const ScalingFunction& operator[](std::size_t i) const { return funcs_.at(i); }

    /// ||alpha||_inf = max_i ||alpha_i||_inf over I.
    double sup_norm(const IntervalSpec& interval) const;

    /// True when every member is a constant.
    bool all_constant() const noexcept;

    /// sum_i |alpha_i| for constant members.
    double gamma() const;

private:
    std::vector<ScalingFunction> funcs_;
};

}  // namespace mkzfrac
