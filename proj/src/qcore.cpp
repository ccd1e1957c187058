#include "mkzfrac/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mkzfrac/error.hpp"

namespace mkzfrac {

QParam::QParam(double q) : q_(q) {
    if (!(q > 0.0 && q <= 1.0)) {
        throw PreconditionError("q must lie in (0, 1], got " + std::to_string(q));
    }
}

double QParam::pow(std::int64_t k) const noexcept {
    if (q_ == 1.0) return 1.0;
    return std::pow(q_, static_cast<double>(k));
}

double q_integer(std::int64_t k, QParam q) {
    if (k < 0) throw PreconditionError("q_integer: k must be non-negative");
    if (q.classical()) return static_cast<double>(k);
    if (k == 0) return 0.0;
    return (1.0 - q.pow(k)) / (1.0 - q.value());
}

double q_factorial(std::int64_t k, QParam q) {
    if (k < 0) throw PreconditionError("q_factorial: k must be non-negative");
    double acc = 1.0;
    for (std::int64_t j = 2; j <= k; ++j) acc *= q_integer(j, q);
    return acc;
}

double q_binomial(std::int64_t n, std::int64_t k, QParam q) {
    if (k < 0 || k > n) {
        throw PreconditionError("q_binomial: need 0 <= k <= n, got n=" + std::to_string(n) +
                                " k=" + std::to_string(k));
    }
    const std::int64_t kk = std::min(k, n - k);
    // Pair the j-th smallest denominator factor with the j-th smallest numerator
    // factor; every ratio is >= 1 and the running product never overshoots the result.
    double acc = 1.0;
    for (std::int64_t j = 1; j <= kk; ++j) {
        acc *= q_integer(n - kk + j, q) / q_integer(j, q);
    }
    return acc;
}

double arctan_q_schedule(std::int64_t n) {
    return 2.0 / std::numbers::pi * std::atan(static_cast<double>(n));
}

}  // namespace mkzfrac
