#pragma once

// Moduli of continuity, convergence-bound tables, the monotone-sequence check,
// L^p error tables and box-counting dimension.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mkzfrac/fractal.hpp"

namespace mkzfrac {

/// omega(f, delta) = sup |f(x) - f(y)| over grid pairs with |x - y| <= delta.
double modulus_of_continuity(const GridFunction& f, double delta);

/// omega_{1,p}(f, t) = sup_{0 < h <= t} ||f(. + h) - f(.)||_{p, [x1, xN - h]}, h on grid steps.
double lp_modulus(const GridFunction& f, double t, double p);

struct ConvergenceRow {
    int n = 0;
    double q_n = 1.0;
    double sup_error = 0.0;
    double bound = 0.0;
    bool satisfied = false;
};

/// ||alpha|| / (1 - ||alpha||)
double alpha_factor(const ScalingVector& alpha, const IntervalSpec& interval);

/// Quantum rows: bound (5/2) omega(f, 1/sqrt([n]_{q_n})) ||alpha||/(1-||alpha||).
/// `omega_source` supplies the samples used for omega (a finer grid of the germ
/// when one is available). Orders below 3 are rejected.
std::vector<ConvergenceRow> check_uniform_bound(const FractalSpec& spec, const GridFunction& omega_source,
                                                const std::vector<int>& orders,
                                                const std::function<double(int)>& q_rule);

/// Classical (q = 1) rows for one order set, three bounds per row.
struct ClassicalRows {
    /// (31/27) omega(f, 1/sqrt(n)) factor
    std::vector<ConvergenceRow> c0;
    /// 2(2+3 sqrt 3)/(27 sqrt n) omega(f', 1/sqrt(n)) factor
    std::vector<ConvergenceRow> c1;
    /// 2(2+3 sqrt 3)/(27 sqrt n) A n^{-(beta+1)/2} factor, f' in Lip_A beta
    std::vector<ConvergenceRow> holder;
};

struct DerivativeData {
    GridFunction samples;  // f' on a fine grid
    double lip_constant = 1.0;
    double beta = 1.0;
};

ClassicalRows check_classical_bounds(const FractalSpec& spec, const GridFunction& omega_source,
                                     const DerivativeData& derivative, const std::vector<int>& orders);

/// Least-squares slope of log(error) against log(n) over rows with error > 0.
double rate_exponent(const std::vector<ConvergenceRow>& rows);

struct MonotoneRow {
    int n = 0;
    /// max and min over x of f^alpha_n - f
    double above = 0.0;
    double below = 0.0;
    /// max over x of f^alpha_n - f^alpha_{n_prev}; 0 on the first order
    double step_up = 0.0;
};

struct MonotoneReport {
    std::vector<MonotoneRow> rows;
    /// max over n, x of f_{n+1}(x) - f_n(x)
    double max_increase = 0.0;
    /// max over n, x of f_n(x) - f_{n+1}(x)
    double max_decrease = 0.0;
    bool non_increasing = false;
    bool non_decreasing = false;
    /// range of f^alpha_n - f over all n and x
    double envelope_min = 0.0;
    double envelope_max = 0.0;
    /// "below" when f^alpha_n <= f, "above" when f^alpha_n >= f, else "mixed"
    std::string envelope;
    /// M_n f >= f and M_{n+1} f <= M_n f for the base operators
    bool base_above_germ = false;
    bool base_non_increasing = false;
};

/// Convex germ, alpha >= 0, base orders `orders` with a fixed q.
MonotoneReport monotone_sequence_check(const FractalSpec& spec, const std::vector<int>& orders, double q,
                                       double slack = 1e-9);

struct LpRow {
    int n = 0;
    double p = 1.0;
    double lp_error = 0.0;
    double rhs_bound = 0.0;
    bool satisfied = false;
    /// omega_{1,p}(f, 1/sqrt(n)), reported only
    double omega = 0.0;
};

std::vector<LpRow> lp_error_check(const FractalSpec& spec, double p, const std::vector<int>& orders);

struct DimensionEstimate {
    std::vector<double> epsilons;
    std::vector<std::size_t> counts;
    double slope = 0.0;
    bool has_bounds = false;
    double lower = 1.0;
    double upper = 2.0;
    bool upper_finite = true;
    double gamma = 0.0;
    double beta = 1.0;
    std::size_t maps = 0;
    std::size_t points = 0;
};

/// Box counts on the dyadic meshes eps_j = 2^{-j} (xN - x1), j in [j_min, j_max],
/// anchored at (x1, min y), and the least-squares slope of log N against log 1/eps.
/// The points (sorted by x) are joined into a polyline and every box it meets is counted.
DimensionEstimate box_dimension(const GraphPoints& graph, const IntervalSpec& interval, int j_min = 3,
                                int j_max = 13);

/// Bounds on dim_B of the graph from gamma = sum |alpha_i|, the Hoelder exponent
/// beta of the germ and the number of maps (used as the logarithm base).
struct DimensionBounds {
    double lower = 1.0;
    double upper = 2.0;
    bool upper_finite = true;
};
DimensionBounds dimension_bounds(double gamma, double beta, std::size_t maps);

/// Attaches the dimension bounds when their hypotheses hold: constant nonzero alpha,
/// uniform partition, non-collinear interpolation points (DegenerateError otherwise).
/// Non-constant alpha leaves the estimate without bounds.
void attach_bounds(DimensionEstimate& est, const FractalSpec& spec, double beta);

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);
void write_lp_csv(std::ostream& os, const std::vector<LpRow>& rows);
void write_dimension_csv(std::ostream& os, const DimensionEstimate& est);

}  // namespace mkzfrac
