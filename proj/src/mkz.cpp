#include "mkzfrac/mkz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "mkzfrac/error.hpp"
#include "mkzfrac/parallel.hpp"
#include "mkzfrac/simd/kernels.hpp"

namespace mkzfrac {

double MkzWeights::mass() const noexcept {
    double s = 0.0, c = 0.0;
    for (double w : weights) {
        const double y = w - c;
        const double t2 = s + y;
        c = (t2 - s) - y;
        s = t2;
    }
    return s;
}

double mkz_leading_factor(int n, QParam q, double t) {
    double p = 1.0;
    for (int j = 0; j <= n; ++j) p *= 1.0 - q.pow(j) * t;
    return p;
}

double mkz_node(int n, QParam q, std::int64_t k) {
    if (k == 0) return 0.0;
    if (q.classical()) return static_cast<double>(k) / static_cast<double>(k + n);
    return (1.0 - q.pow(k)) / (1.0 - q.pow(k + n));
}

namespace {

// Ratio [n+k+1]_q / [k+1]_q between consecutive q-binomials [n+k choose k]_q.
double quantum_ratio(int n, QParam q, std::int64_t k) {
    if (q.classical()) return static_cast<double>(n + k + 1) / static_cast<double>(k + 1);
    return (1.0 - q.pow(n + k + 1)) / (1.0 - q.pow(k + 1));
}

void check_order(int n) {
    if (n < 1) throw PreconditionError("MKZ order n must be a positive integer, got " + std::to_string(n));
}

void check_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("MKZ truncation eps must lie in (0, 1)");
}

// Ratio/value tables shared by every abscissa of one operator application.
struct SeriesTables {
    std::vector<double> ratio;
    std::vector<double> value;
    std::function<void(std::int64_t k, double& ratio, double& value)> fill;

    void ensure(std::size_t len) {
        const std::size_t old = ratio.size();
        if (len <= old) return;
        ratio.resize(len);
        value.resize(len);
        for (std::size_t k = old; k < len; ++k) fill(static_cast<std::int64_t>(k), ratio[k], value[k]);
    }
};

// Starting weights below this are advanced in log space before entering the kernel.
constexpr double kTinyStart = 1e-300;

[[noreturn]] void truncation_failure(const char* what, double t, std::size_t cap) {
    std::ostringstream os;
    os << what << ": series at t=" << t << " did not reach its mass target within " << cap << " terms";
    throw TruncationError(os.str());
}

// Evaluates the series for every lane. log_start(t) must return log of the
// starting weight; start[] holds the same value in linear form.
std::vector<simd::SeriesResult> run_series(SeriesTables& tables, const std::vector<double>& ts,
                                           const std::vector<double>& start,
                                           const std::function<double(double)>& log_start,
                                           const MkzOptions& opts, const char* what) {
    const simd::KernelTable& kern = simd::active();
    std::vector<simd::SeriesResult> out(ts.size());
    std::vector<std::size_t> pending;
    std::vector<std::size_t> tiny;
    for (std::size_t i = 0; i < ts.size(); ++i) (start[i] < kTinyStart ? tiny : pending).push_back(i);

    std::size_t len = std::min<std::size_t>(opts.max_terms, 2048);
    tables.ensure(len);
    while (!pending.empty()) {
        std::vector<double> pt(pending.size()), ps(pending.size());
        for (std::size_t i = 0; i < pending.size(); ++i) {
            pt[i] = ts[pending[i]];
            ps[i] = start[pending[i]];
        }
        std::vector<simd::SeriesResult> res(pending.size());
        const simd::SeriesTable view{std::span<const double>(tables.ratio.data(), len),
                                     std::span<const double>(tables.value.data(), len)};
        parallel_for(pending.size(), 64, [&](std::size_t b, std::size_t e) {
            kern.series(view, std::span<const double>(pt).subspan(b, e - b),
                        std::span<const double>(ps).subspan(b, e - b), opts.eps,
                        std::span<simd::SeriesResult>(res).subspan(b, e - b));
        });
        std::vector<std::size_t> again;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            if (res[i].exhausted) again.push_back(pending[i]);
            else out[pending[i]] = res[i];
        }
        if (again.empty()) break;
        if (len >= opts.max_terms) truncation_failure(what, ts[again.front()], opts.max_terms);
        len = std::min(opts.max_terms, len * 4);
        tables.ensure(len);
        pending = std::move(again);
    }

    // Underflowing starts: walk the weights in log space until they are
    // representable, then continue in the kernel from that term. The skipped
    // terms carry less than kTinyStart mass each.
    const double log_tiny = std::log(kTinyStart);
    for (std::size_t lane : tiny) {
        const double t = ts[lane];
        double lw = log_start(t);
        std::size_t k0 = 0;
        while (lw < log_tiny) {
            if (k0 >= opts.max_terms) truncation_failure(what, t, opts.max_terms);
            tables.ensure(k0 + 1);
            lw += std::log(t * tables.ratio[k0]);
            ++k0;
        }
        double w0 = std::exp(lw);
        std::size_t need = std::min(opts.max_terms, k0 + 2048);
        for (;;) {
            tables.ensure(need);
            const simd::SeriesTable view{std::span<const double>(tables.ratio.data() + k0, need - k0),
                                         std::span<const double>(tables.value.data() + k0, need - k0)};
            simd::SeriesResult r;
            kern.series(view, std::span<const double>(&t, 1), std::span<const double>(&w0, 1), opts.eps,
                        std::span<simd::SeriesResult>(&r, 1));
            if (!r.exhausted) {
                r.terms += static_cast<std::uint32_t>(k0);
                out[lane] = r;
                break;
            }
            if (need >= opts.max_terms) truncation_failure(what, t, opts.max_terms);
            need = std::min(opts.max_terms, need * 4);
        }
    }
    return out;
}

SeriesTables quantum_tables(const GridFunction& f, int n, QParam q, const IntervalSpec& I) {
    SeriesTables tab;
    tab.fill = [&f, n, q, I](std::int64_t k, double& ratio, double& value) {
        ratio = quantum_ratio(n, q, k);
        value = f(I.x1 + I.length() * mkz_node(n, q, k));
    };
    return tab;
}

double quantum_log_start(int n, QParam q, double t) {
    double s = 0.0;
    for (int j = 0; j <= n; ++j) s += std::log1p(-q.pow(j) * t);
    return s;
}

// Integral operator: mhat_{nk}(x) |I_k| = C(k+n-1, k) x^k (1-x)^n, so the series
// has classical order n-1 and averages of f over I_k as values.
SeriesTables integral_tables(const GridFunction& f, int n) {
    SeriesTables tab;
    tab.fill = [&f, n](std::int64_t k, double& ratio, double& value) {
        ratio = static_cast<double>(k + n) / static_cast<double>(k + 1);
        const auto [a, b] = integral_kernel_interval(n, k);
        value = integrate_interpolant(f, a, b) / (b - a);
    };
    return tab;
}

void check_unit_interval(const GridFunction& f) {
    if (f.interval().x1 != 0.0 || f.interval().xN != 1.0) {
        throw PreconditionError("integral MKZ operator is defined for functions on [0, 1]");
    }
}

}  // namespace

MkzWeights mkz_weights(int n, QParam q, double t, double eps, std::size_t max_terms) {
    check_order(n);
    check_eps(eps);
    if (!(t >= 0.0 && t <= 1.0)) throw PreconditionError("mkz_weights: t must lie in [0, 1]");
    MkzWeights out;
    out.t = t;
    out.n = n;
    out.q = q.value();
    if (t == 1.0) {
        out.endpoint = true;
        return out;
    }
    double w = mkz_leading_factor(n, q, t);
    double mass = 0.0, mc = 0.0;
    const double target = 1.0 - eps;
    for (std::int64_t k = 0;; ++k) {
        if (static_cast<std::size_t>(k) >= max_terms) truncation_failure("mkz_weights", t, max_terms);
        out.weights.push_back(w);
        const double y = w - mc;
        const double tm = mass + y;
        mc = (tm - mass) - y;
        mass = tm;
        const double rho = t * quantum_ratio(n, q, k);
        if (mass >= target) {
            out.tail_bound = std::max(0.0, 1.0 - mass);
            break;
        }
        if (rho < 1.0 && w * rho <= eps * (1.0 - rho)) {
            out.tail_bound = w * rho / (1.0 - rho);
            break;
        }
        w *= rho;
    }
    return out;
}

double eval_quantum_mkz(const GridFunction& f, int n, QParam q, double x, const IntervalSpec& interval,
                        const MkzOptions& opts) {
    check_order(n);
    check_eps(opts.eps);
    if (!interval.contains(x)) throw PreconditionError("eval_quantum_mkz: x outside [x1, xN]");
    if (x == interval.xN) return f(interval.xN);
    const double t = interval.normalized(x);
    SeriesTables tab = quantum_tables(f, n, q, interval);
    const std::vector<double> ts{t};
    const std::vector<double> start{mkz_leading_factor(n, q, t)};
    auto res = run_series(tab, ts, start, [n, q](double tt) { return quantum_log_start(n, q, tt); }, opts,
                          "eval_quantum_mkz");
    return res.front().sum;
}

double eval_classical_mkz(const GridFunction& f, int n, double x, const IntervalSpec& interval,
                          const MkzOptions& opts) {
    return eval_quantum_mkz(f, n, QParam(1.0), x, interval, opts);
}

double eval_integral_mkz(const GridFunction& f, int n, double x, const MkzOptions& opts) {
    check_order(n);
    check_eps(opts.eps);
    check_unit_interval(f);
    if (!(x >= 0.0 && x <= 1.0)) throw PreconditionError("eval_integral_mkz: x outside [0, 1]");
    if (x == 1.0) return f(1.0);
    SeriesTables tab = integral_tables(f, n);
    const std::vector<double> ts{x};
    const std::vector<double> start{std::pow(1.0 - x, n)};
    auto res = run_series(tab, ts, start, [n](double tt) { return n * std::log1p(-tt); }, opts,
                          "eval_integral_mkz");
    return res.front().sum;
}

GridFunction apply_quantum_mkz(const GridFunction& f, int n, QParam q, const MkzOptions& opts) {
    check_order(n);
    check_eps(opts.eps);
    const IntervalSpec I = f.interval();
    const std::size_t m = f.size();
    std::vector<double> ts(m - 1), start(m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j) {
        ts[j] = I.normalized(f.x_at(j));
        start[j] = mkz_leading_factor(n, q, ts[j]);
    }
    SeriesTables tab = quantum_tables(f, n, q, I);
    auto res = run_series(tab, ts, start, [n, q](double tt) { return quantum_log_start(n, q, tt); }, opts,
                          "apply_quantum_mkz");
    std::vector<double> out(m);
    for (std::size_t j = 0; j + 1 < m; ++j) out[j] = res[j].sum;
    out[m - 1] = f[m - 1];
    return GridFunction(I, std::move(out));
}

GridFunction apply_classical_mkz(const GridFunction& f, int n, const MkzOptions& opts) {
    return apply_quantum_mkz(f, n, QParam(1.0), opts);
}

GridFunction apply_integral_mkz(const GridFunction& f, int n, const MkzOptions& opts) {
    check_order(n);
    check_eps(opts.eps);
    check_unit_interval(f);
    const std::size_t m = f.size();
    std::vector<double> ts(m - 1), start(m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j) {
        ts[j] = f.x_at(j);
        start[j] = std::pow(1.0 - ts[j], n);
    }
    SeriesTables tab = integral_tables(f, n);
    auto res = run_series(tab, ts, start, [n](double tt) { return n * std::log1p(-tt); }, opts,
                          "apply_integral_mkz");
    std::vector<double> out(m);
    for (std::size_t j = 0; j + 1 < m; ++j) out[j] = res[j].sum;
    out[m - 1] = f[m - 1];
    return GridFunction(f.interval(), std::move(out));
}

std::pair<double, double> integral_kernel_interval(int n, std::int64_t k) {
    const double kd = static_cast<double>(k);
    return {kd / (kd + n), (kd + 1.0) / (kd + n + 1.0)};
}

double integral_kernel_coefficient(int n, std::int64_t k, double x) {
    if (x == 0.0) return k == 0 ? static_cast<double>(n + 1) : 0.0;
    if (x == 1.0) return n == 0 ? (k == 0 ? 1.0 : 0.0) : 0.0;
    const double kd = static_cast<double>(k);
    const double lg = std::log(static_cast<double>(n + 1)) + std::lgamma(kd + n + 2.0) - std::lgamma(kd + 1.0) -
                      std::lgamma(n + 2.0) + kd * std::log(x) + n * std::log1p(-x);
    return std::exp(lg);
}

IntegralKernelRow integral_kernel_row(int n, double x, double eps, std::size_t max_terms) {
    check_order(n);
    check_eps(eps);
    if (!(x >= 0.0 && x < 1.0)) throw PreconditionError("integral_kernel_row: x must lie in [0, 1)");
    IntegralKernelRow row;
    row.n = n;
    row.x = x;
    for (std::int64_t k = 0; row.mass < 1.0 - eps; ++k) {
        if (static_cast<std::size_t>(k) >= max_terms) truncation_failure("integral_kernel_row", x, max_terms);
        const auto [a, b] = integral_kernel_interval(n, k);
        const double c = integral_kernel_coefficient(n, k, x);
        row.entries.push_back({c, a, b});
        row.mass += c * (b - a);
    }
    return row;
}

}  // namespace mkzfrac
