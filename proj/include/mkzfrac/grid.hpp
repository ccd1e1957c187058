#pragma once

// Uniformly sampled real functions with piecewise-linear evaluation. This is the
// concrete representation for germs, base functions and fractal fixed points.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mkzfrac {

/// Closed interval [x1, xN] with x1 < xN.
struct IntervalSpec {
    double x1 = 0.0;
    double xN = 1.0;

    IntervalSpec() = default;
    IntervalSpec(double a, double b);

    double length() const noexcept { return xN - x1; }
    bool contains(double x) const noexcept { return x >= x1 && x <= xN; }
    /// (x - x1) / (xN - x1)
    double normalized(double x) const noexcept { return (x - x1) / (xN - x1); }
};

class GridFunction {
public:
    GridFunction() = default;
    GridFunction(IntervalSpec interval, std::vector<double> values);

    /// Samples fn at the M uniform nodes of interval.
    static GridFunction sample(IntervalSpec interval, std::size_t m,
                               const std::function<double(double)>& fn);
    static GridFunction constant(IntervalSpec interval, std::size_t m, double c);

    const IntervalSpec& interval() const noexcept { return interval_; }
    std::size_t size() const noexcept { return values_.size(); }
    double step() const noexcept { return step_; }

    /// Abscissa of node j. Node M-1 is xN exactly.
    double x_at(std::size_t j) const noexcept;

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    double operator[](std::size_t j) const noexcept { return values_[j]; }
    double& operator[](std::size_t j) noexcept { return values_[j]; }

    /// Piecewise-linear evaluation. Positions within 1e-9 cells of a node
    /// return the stored sample exactly; arguments outside I are clamped.
    double operator()(double x) const noexcept;

    double sup_norm() const noexcept;
    double min() const noexcept;
    double max() const noexcept;

    /// Same grid, same interval.
    bool same_grid(const GridFunction& other) const noexcept;

private:
    IntervalSpec interval_;
    std::vector<double> values_;
    double step_ = 0.0;
};

/// Locates x on a uniform grid: index of the left node and fractional offset in
/// [0, 1). Offsets within 1e-9 of a node snap to it.
struct GridLocation {
    std::size_t index = 0;
    double weight = 0.0;
};
GridLocation locate(const IntervalSpec& interval, std::size_t m, double x) noexcept;

GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double s, const GridFunction& a);

/// Sup of |a - b| over the shared grid.
double sup_distance(const GridFunction& a, const GridFunction& b);

/// Composite trapezoid rule over the whole grid (exact for the interpolant).
double trapezoid(const GridFunction& g);

/// (trapezoid of |g|^p)^{1/p}; requires p >= 1.
double lp_norm(const GridFunction& g, double p);
double lp_distance(const GridFunction& a, const GridFunction& b, double p);

/// Exact integral of the piecewise-linear interpolant over [a, b] subset of I.
/// Sub-cell pieces are integrated locally so that very short intervals keep
/// full relative accuracy.
double integrate_interpolant(const GridFunction& g, double a, double b);

/// Two-column CSV "x,value" with a one-line header. Values are written in
/// shortest round-trip form so reading back reproduces every sample bit-exactly.
void write_csv(std::ostream& os, const GridFunction& g);
void write_csv(const std::string& path, const GridFunction& g);
GridFunction read_csv(std::istream& is);
GridFunction read_csv(const std::string& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace mkzfrac
