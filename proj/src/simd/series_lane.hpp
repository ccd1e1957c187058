#pragma once

#include <algorithm>

namespace mkzfrac::simd::detail {

// Omitted-mass bound reported when a lane stops. Shared by every variant so the
// reported bound is identical regardless of which kernel ran.
inline double tail_at_stop(bool by_mass, double mass, double w, double rho) noexcept {
    if (by_mass) return std::max(0.0, 1.0 - mass);
    return w * rho / (1.0 - rho);
}

}  // namespace mkzfrac::simd::detail
