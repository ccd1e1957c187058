#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "mkzfrac/grid.hpp"

namespace mkzfrac::app {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

double view_y(double y, bool log_y) {
    if (!log_y) return y;
    return std::log10(std::max(y, 1e-300));
}

}  // namespace

Series thin(const Series& s, std::size_t max_points) {
    if (s.x.size() <= max_points || max_points < 2) return s;
    const std::size_t stride = (s.x.size() + max_points - 2) / (max_points - 1);
    Series t{s.name, {}, {}};
    for (std::size_t i = 0; i < s.x.size(); i += stride) {
        t.x.push_back(s.x[i]);
        t.y.push_back(s.y[i]);
    }
    if (t.x.back() != s.x.back()) {
        t.x.push_back(s.x.back());
        t.y.push_back(s.y.back());
    }
    return t;
}

void write_plot(const std::filesystem::path& stem, const std::vector<Series>& input, const PlotOptions& opts) {
    std::vector<Series> series;
    for (const auto& s : input) series.push_back(thin(s, opts.max_points));

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double y = view_y(s.y[i], opts.log_y);
            if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (!(x0 <= x1)) x0 = 0.0, x1 = 1.0;
    if (!(y0 <= y1)) y0 = 0.0, y1 = 1.0;
    if (x1 - x0 == 0.0) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 == 0.0) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

    std::ofstream svg(stem.string() + ".svg", std::ios::binary);
    if (!svg) throw std::runtime_error("cannot write " + stem.string() + ".svg");
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"15\">" << escape(opts.title) << "</text>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = x0 + (x1 - x0) * t / 4.0;
        const double yv = y0 + (y1 - y0) * t / 4.0;
        const std::string xs = fmt("%.2f", px(xv)), ys = fmt("%.2f", py(yv));
        svg << "<line x1=\"" << xs << "\" y1=\"" << kTop + ph << "\" x2=\"" << xs << "\" y2=\"" << kTop + ph + 5
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << xs << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
            << fmt("%.4g", xv) << "</text>\n";
        svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << ys << "\" x2=\"" << kLeft << "\" y2=\"" << ys
            << "\" stroke=\"black\"/>\n";
        const std::string label = opts.log_y ? "1e" + fmt("%.2f", yv) : fmt("%.4g", yv);
        svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << ys << "\" text-anchor=\"end\" dominant-baseline=\"middle\">"
            << label << "</text>\n";
    }
    svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
        << escape(opts.x_label) << "</text>\n";
    svg << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << kTop + ph / 2 << ")\">" << escape(opts.y_label) << (opts.log_y ? " (log)" : "") << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kColors[k % std::size(kColors)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double y = view_y(s.y[i], opts.log_y);
            if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
            svg << fmt("%.2f", px(s.x[i])) << ',' << fmt("%.2f", py(y)) << ' ';
        }
        svg << "\"/>\n";
        const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
        svg << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << ly << "\" x2=\"" << kWidth - kRight + 36
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << kWidth - kRight + 42 << "\" y=\"" << ly << "\" dominant-baseline=\"middle\">"
            << escape(s.name) << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream csv(stem.string() + ".plot.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + stem.string() + ".plot.csv");
    csv << "series,x,y\n";
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i)
            csv << s.name << ',' << format_double(s.x[i]) << ',' << format_double(s.y[i]) << '\n';
}

}  // namespace mkzfrac::app
