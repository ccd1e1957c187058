#pragma once

// Affine maps, the Read-Bajraktarevic operator and its fixed point, in the
// uniform norm and in L^p.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mkzfrac/grid.hpp"
#include "mkzfrac/mkz.hpp"
#include "mkzfrac/scaling.hpp"

namespace mkzfrac {

/// Strictly increasing nodes x_1 < ... < x_N with N >= 3.
class Partition {
public:
    /// {0, 1/2, 1}
    Partition() : nodes_{0.0, 0.5, 1.0} {}
    explicit Partition(std::vector<double> nodes);
    static Partition uniform(IntervalSpec interval, std::size_t intervals);

    const std::vector<double>& nodes() const noexcept { return nodes_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t interval_count() const noexcept { return nodes_.size() - 1; }
    IntervalSpec interval() const noexcept { return {nodes_.front(), nodes_.back()}; }
    bool is_uniform(double tol = 1e-12) const noexcept;

private:
    std::vector<double> nodes_;
};

/// u_i(x) = a_i x + b_i with u_i(x1) = x_i and u_i(xN) = x_{i+1}.
struct AffineMap {
    double a = 1.0;
    double b = 0.0;

    double operator()(double x) const noexcept { return a * x + b; }
    double inverse(double y) const noexcept { return (y - b) / a; }
};

std::vector<AffineMap> build_maps(const Partition& partition);

struct QuantumBase {
    int n = 1;
    double q = 1.0;
};
struct ClassicalBase {
    int n = 1;
};
struct IntegralBase {
    int n = 1;
};
using BaseOperator = std::variant<QuantumBase, ClassicalBase, IntegralBase>;

std::string describe(const BaseOperator& base);

/// Base function b = L(f) of the germ on its own grid.
GridFunction compute_base(const GridFunction& germ, const BaseOperator& base, const MkzOptions& opts);

struct FractalSpec {
    GridFunction germ;
    Partition partition;
    ScalingVector alpha;
    BaseOperator base = QuantumBase{};
    double tol = 1e-10;
    int max_iter = 200;
    /// When every preimage u_i^{-1}(x_j) is a grid node, T restricted to the grid
    /// is g_j = c_j + a_j g_{s(j)} over a functional graph and is solved exactly
    /// cycle by cycle before the Picard sweeps. Off: Picard from g_0 = f only.
    bool direct = true;
    /// The base needs long series near xN, so its term cap is generous.
    MkzOptions mkz{1e-10, 10'000'000};

    /// Checks shapes: |alpha| = N - 1, germ interval equals the partition's,
    /// every partition node sits on a grid node.
    void validate() const;
};

/// Smallest M >= 4375 with M - 1 divisible by the interval count, so that every
/// partition node and every preimage u_i^{-1}(grid) lands on a grid node.
std::size_t default_grid_size(std::size_t intervals);

/// Grid index of each partition node.
std::vector<std::size_t> node_indices(const FractalSpec& spec);

/// Precomputed evaluation plan of T on the spec's grid.
struct RbPlan {
    std::vector<std::int32_t> index;
    std::vector<double> weight;
    std::vector<double> alpha;
    std::vector<double> base;
    std::vector<double> germ;
};

RbPlan make_rb_plan(const FractalSpec& spec, const GridFunction& base);

/// (Tg)(x) = f(x) + alpha_i(xi) (g(xi) - b(xi)), xi = u_i^{-1}(x), x in u_i(I).
GridFunction rb_apply(const GridFunction& g, const FractalSpec& spec, const GridFunction& base);

struct FixedPointResult {
    GridFunction function;
    GridFunction base;
    /// ||T g_k - g_k|| per iteration in the solving norm.
    std::vector<double> residuals;
    int iterations = 0;
    /// The grid system was solved directly before iterating.
    bool direct = false;
    /// ||T g - g|| of the returned g.
    double residual = 0.0;
};

/// Uniform-norm fixed point from g_0 = f.
FixedPointResult solve_fixed_point(const FractalSpec& spec);

/// Same iteration with a precomputed base (reused across germs sharing a grid).
FixedPointResult solve_fixed_point(const FractalSpec& spec, const GridFunction& base);

/// Lambda = (sum_i a_i ||alpha_i||^p)^{1/p}.
double lp_contraction_factor(const FractalSpec& spec, double p);

/// Fixed point measured in the grid L^p norm; the base must be integral.
FixedPointResult solve_lp_fixed_point(const FractalSpec& spec, double p);

/// Graph points of the attractor: the solved grid graph pushed through the
/// IFS maps w_i(x, y) = (u_i(x), f(u_i(x)) + alpha_i(x)(y - b(x))) `levels`
/// times. Points are sorted by x with shared interval ends kept once.
struct GraphPoints {
    std::vector<double> x;
    std::vector<double> y;
};
GraphPoints graph_points(const FractalSpec& spec, const FixedPointResult& solved, int levels);

}  // namespace mkzfrac
