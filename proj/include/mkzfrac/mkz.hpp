#pragma once

// Meyer-König-Zeller operator families: the quantum series M_{n,q}, its classical
// q = 1 specialisation M_n, and the integral (Durrmeyer-type) operator used in L^p.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "mkzfrac/grid.hpp"
#include "mkzfrac/qcore.hpp"

namespace mkzfrac {

struct MkzOptions {
    /// Omitted weight mass allowed by the truncation rule.
    double eps = 1e-10;
    /// Hard cap on the number of series terms per abscissa.
    std::size_t max_terms = 100000;
};

/// Truncated MKZ weights w_k = P_{n,q}(x) [n+k choose k]_q t^k at t = (x - x1)/(xN - x1).
struct MkzWeights {
    double t = 0.0;
    int n = 0;
    double q = 1.0;
    /// t == 1: the operator is defined there by assignment and no series exists.
    bool endpoint = false;
    std::vector<double> weights;
    double tail_bound = 0.0;

    double mass() const noexcept;
};

/// P_{n,q} at normalised abscissa t, i.e. prod_{j=0}^{n} (1 - q^j t).
double mkz_leading_factor(int n, QParam q, double t);

/// Node abscissa [k]_q / [k+n]_q of the k-th series term on [0, 1].
double mkz_node(int n, QParam q, std::int64_t k);

MkzWeights mkz_weights(int n, QParam q, double t, double eps, std::size_t max_terms = 100000);

double eval_quantum_mkz(const GridFunction& f, int n, QParam q, double x, const IntervalSpec& interval,
                        const MkzOptions& opts = {});
double eval_classical_mkz(const GridFunction& f, int n, double x, const IntervalSpec& interval,
                          const MkzOptions& opts = {});
/// Integral operator on [0, 1]; f must be a grid function on [0, 1].
double eval_integral_mkz(const GridFunction& f, int n, double x, const MkzOptions& opts = {});

/// Operator images sampled on f's own grid. The grid abscissae are evaluated
/// concurrently through the active SIMD kernel table.
GridFunction apply_quantum_mkz(const GridFunction& f, int n, QParam q, const MkzOptions& opts = {});
GridFunction apply_classical_mkz(const GridFunction& f, int n, const MkzOptions& opts = {});
GridFunction apply_integral_mkz(const GridFunction& f, int n, const MkzOptions& opts = {});

/// Interval I_k = [k/(k+n), (k+1)/(k+n+1)] of the integral kernel.
std::pair<double, double> integral_kernel_interval(int n, std::int64_t k);

/// mhat_{nk}(x) = (n+1) C(k+n+1, k) x^k (1-x)^n, evaluated in log space.
double integral_kernel_coefficient(int n, std::int64_t k, double x);

struct IntegralKernelEntry {
    double coefficient;  // mhat_{nk}(x)
    double left;         // I_k
    double right;
};

struct IntegralKernelRow {
    int n = 0;
    double x = 0.0;
    std::vector<IntegralKernelEntry> entries;
    /// sum_k mhat_{nk}(x) |I_k| over the listed entries.
    double mass = 0.0;
};

/// Kernel row truncated once the accumulated mass sum mhat |I_k| reaches 1 - eps.
IntegralKernelRow integral_kernel_row(int n, double x, double eps, std::size_t max_terms = 100000);

}  // namespace mkzfrac
