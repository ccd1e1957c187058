#pragma once

// Closed-form germs with derivatives, used to build configs and bound checks.

#include <functional>
#include <string>
#include <vector>

#include "mkzfrac/grid.hpp"

namespace mkzfrac {

struct Germ {
    std::string name;
    std::function<double(double)> value;
    /// Empty for germs without a closed-form derivative.
    std::function<double(double)> derivative;

    bool has_derivative() const noexcept { return static_cast<bool>(derivative); }
    GridFunction sample(IntervalSpec interval, std::size_t m) const;
    GridFunction sample_derivative(IntervalSpec interval, std::size_t m) const;
};

/// Named germs and their parameters:
///   sin         k        sin(k x)
///   sinpi       c        sin(pi x) + c
///   poly        c0 c1 .. sum c_j x^j
///   power       lambda   x^lambda
///   wave        -        0.5 sin(4 pi x) + 1
///   dome        s c      -s (2x - c)^2
Germ make_germ(const std::string& name, const std::vector<double>& params = {});

/// Names accepted by make_germ.
const std::vector<std::string>& germ_names();

}  // namespace mkzfrac
