#include "ratfe/errors.hpp"
#include "ratfe/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace ratfe {

namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 50;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#000000", "#aa3377"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
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

struct Axis {
    bool log = false;
    double lo = 0, hi = 1;

    double map(double v) const { return log ? std::log10(v) : v; }
    void fit(double a, double b) {
        lo = map(a);
        hi = map(b);
        if (log) {
            lo = std::floor(lo);
            hi = std::ceil(hi);
        }
        if (hi - lo < 1e-300) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
    std::vector<double> ticks() const {
        std::vector<double> t;
        if (log) {
            const int step = std::max(1, static_cast<int>((hi - lo) / 8));
            for (double e = lo; e <= hi + 1e-9; e += step) t.push_back(e);
        } else {
            for (int i = 0; i <= 5; ++i) t.push_back(lo + (hi - lo) * i / 5.0);
        }
        return t;
    }
};

}  // namespace

std::string emit_svg(const std::vector<Series>& series, const PlotAxes& axes) {
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    bool any = false;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw ConfigError("series '" + s.name + "' has mismatched x and y");
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (axes.xlog && !(s.x[i] > 0))
                throw ConfigError("log x axis needs positive values; series '" + s.name + "' has " + label(s.x[i]));
            if (axes.ylog && !(s.y[i] > 0))
                throw ConfigError("log y axis needs positive values; series '" + s.name + "' has " + label(s.y[i]));
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
            any = true;
        }
    }
    if (!any) throw EmptySeries("nothing to plot");

    Axis ax{axes.xlog}, ay{axes.ylog};
    ax.fit(xmin, xmax);
    ay.fit(ymin, ymax);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (ax.map(v) - ax.lo) / (ax.hi - ax.lo) * pw; };
    auto py = [&](double v) { return kTop + ph - (ay.map(v) - ay.lo) / (ay.hi - ay.lo) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!axes.title.empty())
        os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
           << escape(axes.title) << "</text>\n";
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : ax.ticks()) {
        const double x = kLeft + (t - ax.lo) / (ax.hi - ax.lo) * pw;
        os << "<line x1=\"" << num(x) << "\" y1=\"" << kTop << "\" x2=\"" << num(x) << "\" y2=\"" << kTop + ph
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + ph + 16) << "\" text-anchor=\"middle\">"
           << (ax.log ? "1e" + label(t) : label(t)) << "</text>\n";
    }
    for (double t : ay.ticks()) {
        const double y = kTop + ph - (t - ay.lo) / (ay.hi - ay.lo) * ph;
        os << "<line x1=\"" << kLeft << "\" y1=\"" << num(y) << "\" x2=\"" << kLeft + pw << "\" y2=\"" << num(y)
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
           << (ay.log ? "1e" + label(t) : label(t)) << "</text>\n";
    }
    os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 10) << "\" text-anchor=\"middle\">"
       << escape(axes.xlabel) << "</text>\n";
    os << "<text transform=\"translate(16," << num(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(axes.ylabel) << "</text>\n";

    for (size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
        const std::string dash = s.dashed ? " stroke-dasharray=\"6,4\"" : "";
        if (s.x.size() > 1) {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"" << dash << " points=\"";
            for (size_t i = 0; i < s.x.size(); ++i) os << (i ? " " : "") << num(px(s.x[i])) << ',' << num(py(s.y[i]));
            os << "\"/>\n";
        }
        if (!s.dashed)
            for (size_t i = 0; i < s.x.size(); ++i)
                os << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i])) << "\" r=\"2.5\" fill=\""
                   << color << "\"/>\n";
        const double ly = kTop + 10 + 16 * static_cast<double>(k);
        const double lx = kLeft + pw + 12;
        os << "<g class=\"legend\"><line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 22)
           << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"" << dash << "/>";
        os << "<text x=\"" << num(lx + 28) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.name) << "</text></g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::vector<Series> eig_plot_series(const std::vector<EigRow>& rows, bool with_guides) {
    std::map<int, Series> by_n;
    double x0 = INFINITY, x1 = 0, yref = 0;
    for (const auto& r : rows) {
        if (r.n == "exact") continue;
        const int n = std::stoi(r.n);
        Series& s = by_n[n];
        s.name = "n=" + r.n;
        s.x.push_back(r.ndof);
        s.y.push_back(r.rel_gap);
        if (r.ndof < x0) {
            x0 = r.ndof;
            yref = r.rel_gap;
        }
        x1 = std::max(x1, static_cast<double>(r.ndof));
    }
    std::vector<Series> out;
    for (auto& [n, s] : by_n) out.push_back(std::move(s));
    if (with_guides && x0 < x1 && yref > 0) {
        out.push_back({"O(ndof^-1/2)", {x0, x1}, {yref, yref * std::pow(x1 / x0, -0.5)}, true});
        out.push_back({"O(ndof^-1)", {x0, x1}, {yref, yref * std::pow(x1 / x0, -1.0)}, true});
    }
    return out;
}

std::vector<Series> stokes_plot_series(const std::vector<StokesRow>& rows) {
    Series s{"Guzman-Neilan", {}, {}, false};
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& r : rows) {
        if (r.n == "exact") continue;
        const double n = std::stod(r.n);
        // Exact zeros would break the log axis; they are dropped from the picture.
        if (r.grad_err <= 0) continue;
        s.x.push_back(n);
        s.y.push_back(r.grad_err);
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    std::vector<Series> out{s};
    if (lo <= hi) out.push_back({"Taylor-Hood", {lo, hi}, {kTaylorHoodReference, kTaylorHoodReference}, true});
    return out;
}

}  // namespace ratfe
