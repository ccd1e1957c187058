#pragma once

// Fractal Muntz monomials and least-squares density experiments on [0, 1].

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mkzfrac/fractal.hpp"

namespace mkzfrac {

enum class LambdaTag { harmonic, geometric, custom };
enum class LambdaClass { divergent, convergent, undetermined };

std::string_view to_string(LambdaClass c) noexcept;
std::string_view to_string(LambdaTag t) noexcept;

/// Positive, strictly increasing exponents lambda_1 < lambda_2 < ...
struct LambdaSequence {
    std::vector<double> exponents;
    LambdaTag tag = LambdaTag::custom;

    /// lambda_i = step * i
    static LambdaSequence harmonic(std::size_t count, double step = 1.0);
    /// lambda_i = ratio^i, ratio > 1
    static LambdaSequence geometric(std::size_t count, double ratio = 2.0);
    static LambdaSequence custom(std::vector<double> exponents);

    void validate() const;
};

struct LambdaClassification {
    LambdaClass cls = LambdaClass::undetermined;
    /// sum lambda/(lambda^2 + 1), or with lambda + 1/p in the L^p case
    double partial_sum = 0.0;
    std::size_t terms = 0;
};

/// Tagged sequences are classified analytically; custom prefixes are reported
/// as undetermined together with their partial sums.
LambdaClassification classify_lambda(const LambdaSequence& lambdas, std::optional<double> p = std::nullopt);

/// (x^lambda)^alpha on the spec's grid, with the spec's base operator applied
/// to x^lambda. lambda = 0 gives the constant 1. The interval must be [0, 1].
GridFunction fractal_monomial(double lambda, const FractalSpec& spec);

struct MuntzFit {
    std::vector<double> coefficients;
    double residual_sup = 0.0;
    double residual_l2 = 0.0;
    double condition = 1.0;
    /// Condition estimate above 1e12; the least-norm solution is still returned.
    bool rank_warning = false;
};

/// Grid L^2 least squares over the trapezoid-weighted samples, columns scaled
/// to unit norm, solved by a complete orthogonal decomposition.
MuntzFit least_squares_fit(const GridFunction& target, const std::vector<GridFunction>& basis);

struct DensityRow {
    int m = 0;
    int n = 0;
    double q = 1.0;
    LambdaClass lambda_class = LambdaClass::undetermined;
    double residual_sup = 0.0;
    double residual_lp = 0.0;
};

struct DensityOptions {
    std::vector<int> m_values;
    /// n = n_rule(m); default 5m
    std::function<int(int)> n_rule = [](int m) { return 5 * m; };
    /// q = q_rule(n); default (2/pi) arctan n
    std::function<double(int)> q_rule;
    /// Norm of residual_lp; classification uses the L^p form when p is set.
    double p = 2.0;
    bool lp_classification = false;
};

/// Basis {1, (x^lambda_1)^alpha, ..., (x^lambda_m)^alpha} per m. The spec's germ
/// only fixes the grid; its partition, alpha and tolerances are reused. A
/// quantum base takes the (n, q) of each row, a classical base only n, an
/// integral base only n (and the L^p fixed point).
std::vector<DensityRow> density_experiment(const GridFunction& target, const LambdaSequence& lambdas,
                                           const FractalSpec& spec, const DensityOptions& opts);

void write_density_csv(std::ostream& os, const std::vector<DensityRow>& rows);

}  // namespace mkzfrac
