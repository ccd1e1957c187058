#pragma once

// q-calculus primitives: q-integers, q-factorials and Gaussian binomials.

#include <cstdint>

namespace mkzfrac {

/// Quantum parameter q in (0, 1]. Construction rejects anything else.
class QParam {
public:
    explicit QParam(double q);

    double value() const noexcept { return q_; }
    bool classical() const noexcept { return q_ == 1.0; }

    /// q^k by repeated squaring; exact 1 for q == 1.
    double pow(std::int64_t k) const noexcept;

private:
    double q_;
};

/// [k]_q = 1 + q + ... + q^{k-1}; k for q == 1.
double q_integer(std::int64_t k, QParam q);

/// [k]_q! = [k]_q [k-1]_q ... [1]_q, with [0]_q! = 1.
double q_factorial(std::int64_t k, QParam q);

/// Gaussian binomial [n choose k]_q, evaluated as a product of ratios so that
/// it stays finite long after the q-factorials overflow.
double q_binomial(std::int64_t n, std::int64_t k, QParam q);

/// q_n = (2/pi) arctan(n), the schedule used throughout the worked examples.
double arctan_q_schedule(std::int64_t n);

}  // namespace mkzfrac
