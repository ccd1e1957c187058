#include "mkzfrac/muntz.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "mkzfrac/error.hpp"
#include "mkzfrac/qcore.hpp"

namespace mkzfrac {

std::string_view to_string(LambdaClass c) noexcept {
    switch (c) {
        case LambdaClass::divergent: return "divergent-sum";
        case LambdaClass::convergent: return "convergent-sum";
        case LambdaClass::undetermined: return "undetermined";
    }
    return "undetermined";
}

std::string_view to_string(LambdaTag t) noexcept {
    switch (t) {
        case LambdaTag::harmonic: return "harmonic";
        case LambdaTag::geometric: return "geometric";
        case LambdaTag::custom: return "custom";
    }
    return "custom";
}

LambdaSequence LambdaSequence::harmonic(std::size_t count, double step) {
    if (!(step > 0.0)) throw PreconditionError("harmonic exponents need a positive step");
    LambdaSequence s;
    s.tag = LambdaTag::harmonic;
    for (std::size_t i = 1; i <= count; ++i) s.exponents.push_back(step * static_cast<double>(i));
    return s;
}

LambdaSequence LambdaSequence::geometric(std::size_t count, double ratio) {
    if (!(ratio > 1.0)) throw PreconditionError("geometric exponents need ratio > 1");
    LambdaSequence s;
    s.tag = LambdaTag::geometric;
    for (std::size_t i = 1; i <= count; ++i) s.exponents.push_back(std::pow(ratio, static_cast<double>(i)));
    return s;
}

LambdaSequence LambdaSequence::custom(std::vector<double> exponents) {
    LambdaSequence s;
    s.exponents = std::move(exponents);
    return s;
}

void LambdaSequence::validate() const {
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        if (!(exponents[i] > 0.0)) throw PreconditionError("Muntz exponents must be positive");
        if (i > 0 && !(exponents[i] > exponents[i - 1]))
            throw PreconditionError("Muntz exponents must be strictly increasing");
    }
}

LambdaClassification classify_lambda(const LambdaSequence& lambdas, std::optional<double> p) {
    lambdas.validate();
    if (p && !(*p >= 1.0)) throw PreconditionError("L^p classification needs p >= 1");
    LambdaClassification c;
    const double shift = p ? 1.0 / *p : 0.0;
    for (double l : lambdas.exponents) {
        const double v = l + shift;
        c.partial_sum += v / (v * v + 1.0);
    }
    c.terms = lambdas.exponents.size();
    switch (lambdas.tag) {
        case LambdaTag::harmonic: c.cls = LambdaClass::divergent; break;
        case LambdaTag::geometric: c.cls = LambdaClass::convergent; break;
        case LambdaTag::custom: c.cls = LambdaClass::undetermined; break;
    }
    return c;
}

GridFunction fractal_monomial(double lambda, const FractalSpec& spec) {
    if (!(lambda >= 0.0)) throw PreconditionError("Muntz exponent must be >= 0");
    const IntervalSpec& I = spec.germ.interval();
    if (I.x1 != 0.0 || I.xN != 1.0) throw PreconditionError("fractal Muntz monomials live on [0, 1]");
    FractalSpec s = spec;
    s.germ = GridFunction::sample(I, spec.germ.size(),
                                  [lambda](double x) { return lambda == 0.0 ? 1.0 : std::pow(x, lambda); });
    if (std::holds_alternative<IntegralBase>(s.base)) return solve_lp_fixed_point(s, 2.0).function;
    return solve_fixed_point(s).function;
}

MuntzFit least_squares_fit(const GridFunction& target, const std::vector<GridFunction>& basis) {
    if (basis.size() > 40) throw PreconditionError("least-squares basis is limited to 40 functions");
    for (const auto& b : basis)
        if (!b.same_grid(target)) throw PreconditionError("basis functions must share the target grid");
    const std::size_t m = target.size();
    MuntzFit fit;
    if (basis.empty()) {
        fit.residual_sup = target.sup_norm();
        fit.residual_l2 = lp_norm(target, 2.0);
        return fit;
    }
    // Trapezoid weights make the discrete norm match lp_norm(., 2).
    Eigen::VectorXd w(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) w[static_cast<Eigen::Index>(j)] = std::sqrt(target.step() * (j == 0 || j + 1 == m ? 0.5 : 1.0));
    const auto cols = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd A(static_cast<Eigen::Index>(m), cols);
    Eigen::VectorXd scale(cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (std::size_t j = 0; j < m; ++j)
            A(static_cast<Eigen::Index>(j), c) = w[static_cast<Eigen::Index>(j)] * basis[static_cast<std::size_t>(c)][j];
        const double nrm = A.col(c).norm();
        scale[c] = nrm > 0.0 ? nrm : 1.0;
        A.col(c) /= scale[c];
    }
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) rhs[static_cast<Eigen::Index>(j)] = w[static_cast<Eigen::Index>(j)] * target[j];

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& sv = svd.singularValues();
    fit.condition = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : INFINITY;
    fit.rank_warning = fit.condition > 1e12;

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    cod.setThreshold(1e-13);
    const Eigen::VectorXd y = cod.solve(rhs);
    fit.coefficients.resize(basis.size());
    for (Eigen::Index c = 0; c < cols; ++c) fit.coefficients[static_cast<std::size_t>(c)] = y[c] / scale[c];

    std::vector<double> r(m);
    for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < basis.size(); ++c) s += fit.coefficients[c] * basis[c][j];
        r[j] = target[j] - s;
    }
    const GridFunction res(target.interval(), std::move(r));
    fit.residual_sup = res.sup_norm();
    fit.residual_l2 = lp_norm(res, 2.0);
    return fit;
}

std::vector<DensityRow> density_experiment(const GridFunction& target, const LambdaSequence& lambdas,
                                           const FractalSpec& spec, const DensityOptions& opts) {
    lambdas.validate();
    if (!target.same_grid(spec.germ)) throw PreconditionError("target and spec grid differ");
    const auto cls = classify_lambda(lambdas, opts.lp_classification ? std::optional<double>(opts.p) : std::nullopt);
    const auto q_rule = opts.q_rule ? opts.q_rule : [](int n) { return arctan_q_schedule(n); };
    std::vector<DensityRow> rows;
    for (int m : opts.m_values) {
        if (m < 0 || static_cast<std::size_t>(m) > lambdas.exponents.size())
            throw PreconditionError("m exceeds the number of exponents provided");
        DensityRow row;
        row.m = m;
        row.n = opts.n_rule(m);
        row.lambda_class = cls.cls;
        FractalSpec s = spec;
        if (std::holds_alternative<QuantumBase>(spec.base)) {
            row.q = q_rule(row.n);
            s.base = QuantumBase{row.n, row.q};
        } else if (std::holds_alternative<ClassicalBase>(spec.base)) {
            s.base = ClassicalBase{row.n};
        } else {
            s.base = IntegralBase{row.n};
        }
        std::vector<GridFunction> basis;
        basis.push_back(fractal_monomial(0.0, s));
        for (int i = 0; i < m; ++i) basis.push_back(fractal_monomial(lambdas.exponents[static_cast<std::size_t>(i)], s));
        const MuntzFit fit = least_squares_fit(target, basis);
        row.residual_sup = fit.residual_sup;
        if (opts.p == 2.0) {
            row.residual_lp = fit.residual_l2;
        } else {
            GridFunction fitted = GridFunction::constant(target.interval(), target.size(), 0.0);
            for (std::size_t c = 0; c < basis.size(); ++c) fitted = fitted + fit.coefficients[c] * basis[c];
            row.residual_lp = lp_distance(target, fitted, opts.p);
        }
        rows.push_back(row);
    }
    return rows;
}

void write_density_csv(std::ostream& os, const std::vector<DensityRow>& rows) {
    os << "m,n,q,lambda_class,residual_sup,residual_lp\n";
    for (const auto& r : rows)
        os << r.m << ',' << r.n << ',' << format_double(r.q) << ',' << to_string(r.lambda_class) << ','
           << format_double(r.residual_sup) << ',' << format_double(r.residual_lp) << '\n';
}

}  // namespace mkzfrac
