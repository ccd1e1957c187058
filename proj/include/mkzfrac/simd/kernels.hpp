#pragma once

// Data-parallel inner loops with a scalar reference and optional AVX2 variants.
//
// Every variant performs the same IEEE operations in the same order per lane
// (the build disables FMA contraction), so all variants return bit-identical
// results. The active table is chosen once at startup from CPU features and may
// be overridden with MKZFRAC_SIMD=scalar|avx2.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace mkzfrac::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Shared per-term tables of a positive series
///   S(t) = sum_k w_k(t) v_k,   w_{k+1} = w_k * (t * ratio[k]).
/// ratio[k] must be non-increasing in k so that the geometric tail bound is valid.
struct SeriesTable {
    std::span<const double> ratio;
    std::span<const double> value;
};

struct SeriesResult {
    double sum = 0.0;         // Kahan-compensated partial sum of w_k v_k
    double mass = 0.0;        // Kahan-compensated partial sum of w_k
    double tail_bound = 0.0;  // bound on the omitted weight mass
    std::uint32_t terms = 0;  // number of terms accumulated
    bool exhausted = false;   // table ended before a stopping rule fired
};

/// Per-lane stopping rule: stop after term k once mass >= 1 - eps, or once
/// rho_k = t * ratio[k] < 1 and the geometric tail w_k rho_k / (1 - rho_k) <= eps.
using SeriesFn = void (*)(const SeriesTable& table, std::span<const double> t,
                          std::span<const double> start, double eps,
                          std::span<SeriesResult> out);

/// Precomputed gather plan of the Read-Bajraktarevic map on a grid:
///   out[j] = germ[j] + alpha[j] * ((g[i] + w (g[i+1] - g[i])) - base[j]),  i = index[j].
struct RbPlanView {
    std::span<const std::int32_t> index;
    std::span<const double> weight;
    std::span<const double> alpha;
    std::span<const double> base;
    std::span<const double> germ;
};

using RbApplyFn = void (*)(const RbPlanView& plan, std::span<const double> g, std::span<double> out);

/// max_j |a[j] - b[j]|
using MaxAbsDiffFn = double (*)(std::span<const double> a, std::span<const double> b);

/// Box cell coordinates floor((x - x0) / eps), floor((y - y0) / eps).
using BoxCellsFn = void (*)(std::span<const double> x, std::span<const double> y, double x0, double y0,
                            double eps, std::span<std::int32_t> ix, std::span<std::int32_t> iy);

struct KernelTable {
    Isa isa;
    SeriesFn series;
    RbApplyFn rb_apply;
    MaxAbsDiffFn max_abs_diff;
    BoxCellsFn box_cells;
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the AVX2 variants were not compiled or the CPU lacks AVX2.
const KernelTable* avx2_kernels() noexcept;

/// Table used by the library.
const KernelTable& active() noexcept;

/// Overrides the runtime selection; falls back to scalar when unavailable.
void select(Isa isa) noexcept;

}  // namespace mkzfrac::simd
