#pragma once

// Admissible brackets for the scaling functions under shape constraints:
// positivity, double-sequence positivity, one-sided approximation and dominance.

#include <iosfwd>
#include <string>
#include <vector>

#include "mkzfrac/fractal.hpp"

namespace mkzfrac {

/// Brackets are clipped to (-1 + kAlphaMargin, 1 - kAlphaMargin) so that any
/// admissible alpha keeps ||alpha|| < 1.
inline constexpr double kAlphaMargin = 1e-6;

/// Grid extrema. phi/Phi are per-interval min/max of f o u_i over the grid,
/// phi_n/Phi_n the min/max of the base function. Grid scans can miss extrema
/// between nodes by up to one cell's variation.
struct Extrema {
    std::vector<double> phi;
    std::vector<double> Phi;
    double phi_n = 0.0;
    double Phi_n = 0.0;
};

Extrema extrema(const GridFunction& f, const std::vector<AffineMap>& maps, const GridFunction& base);

struct IntervalBounds {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<bool> feasible;
    /// Tags of the double-sequence entry point; -1 elsewhere.
    int k = -1;
    int n = -1;

    std::size_t size() const noexcept { return lo.size(); }
    bool all_feasible() const noexcept;
    /// Shrinks every bracket by `margin` on both sides (used for random sampling).
    IntervalBounds shrunk(double margin) const;
};

/// max{phi_n, ||f||, Phi_n} * 1.25 + 0.1
double default_cn(const GridFunction& f, const GridFunction& base);

/// Base images computed with the spec's operator on f's grid.
IntervalBounds positivity_bounds(const GridFunction& f, const FractalSpec& spec, double cn);
IntervalBounds positivity_bounds(const GridFunction& f, const FractalSpec& spec);
IntervalBounds double_sequence_bounds(const GridFunction& fk, const FractalSpec& spec, double c, int k);
IntervalBounds one_sided_bounds(const GridFunction& f, const GridFunction& g, const FractalSpec& spec);
IntervalBounds dominance_bounds(const GridFunction& f, const GridFunction& g, const FractalSpec& spec);

struct AlphaCheck {
    bool pass = true;
    /// Largest distance of alpha_i outside [lo_i, hi_i]; 0 when inside.
    double worst_violation = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;
};

struct ValidationReport {
    std::vector<AlphaCheck> intervals;
    double sup_norm = 0.0;
    bool contraction = true;
    bool admissible = true;

    /// 1-based indices of failing intervals, e.g. "2,3".
    std::string failing() const;
};

/// Samples each alpha_i at `samples` uniform points of I.
ValidationReport validate_alpha(const ScalingVector& alpha, const IntervalBounds& bounds,
                                const IntervalSpec& interval, std::size_t samples);

/// Columns interval,lo,hi,feasible with 1-based interval numbers.
void write_bounds_csv(std::ostream& os, const IntervalBounds& b);
void write_validation(std::ostream& os, const ValidationReport& r, const IntervalBounds& b);

}  // namespace mkzfrac
