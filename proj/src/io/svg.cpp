#include "edgescope/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "edgescope/io/csv.hpp"

namespace edgescope {

namespace {

struct Bounds {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void grow(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool valid() const { return lo <= hi; }
    void pad() {
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            const double margin = 0.04 * (hi - lo);
            lo -= margin;
            hi += margin;
        }
    }
};

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

double nice_step(double span, int target_ticks) {
    const double raw = span / std::max(target_ticks, 2);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double mult = 10.0;
    if (norm < 1.5)
        mult = 1.0;
    else if (norm < 3.5)
        mult = 2.0;
    else if (norm < 7.5)
        mult = 5.0;
    return mult * mag;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_svg_plot(const std::string& path, const PlotSpec& spec) {
    const int w = spec.width, h = spec.height;
    const int ml = 70, mr = 20, mt = spec.title.empty() ? 20 : 40, mb = 55;
    const double plot_w = w - ml - mr, plot_h = h - mt - mb;

    const auto transform_y = [&](double v) { return spec.log_y ? std::log10(v) : v; };
    const auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!spec.log_y || y > 0.0);
    };

    Bounds bx, by;
    for (const auto& s : spec.series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i)
            if (usable(s.x[i], s.y[i])) {
                bx.grow(s.x[i]);
                by.grow(transform_y(s.y[i]));
            }
    }
    if (!bx.valid()) {
        bx = {0.0, 1.0};
        by = {0.0, 1.0};
    }
    bx.pad();
    by.pad();

    const auto px = [&](double v) { return ml + (v - bx.lo) / (bx.hi - bx.lo) * plot_w; };
    const auto py = [&](double v) { return mt + plot_h - (v - by.lo) / (by.hi - by.lo) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
        << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n"
        << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << fmt(plot_w) << "\" height=\""
        << fmt(plot_h) << "\" fill=\"none\" stroke=\"#333\"/>\n";

    // X ticks.
    const double sx = nice_step(bx.hi - bx.lo, 5);
    for (double t = std::ceil(bx.lo / sx) * sx; t <= bx.hi + 1e-12 * sx; t += sx) {
        const double xp = px(t);
        svg << "<line x1=\"" << fmt(xp) << "\" y1=\"" << mt + plot_h << "\" x2=\"" << fmt(xp)
            << "\" y2=\"" << fmt(mt + plot_h + 5) << "\" stroke=\"#333\"/>\n"
            << "<text x=\"" << fmt(xp) << "\" y=\"" << fmt(mt + plot_h + 20)
            << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt(t + 0.0) << "</text>\n";
    }
    // Y ticks.
    if (spec.log_y) {
        for (double e = std::ceil(by.lo); e <= std::floor(by.hi) + 1e-12; e += 1.0) {
            const double yp = py(e);
            svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt(yp) << "\" x2=\"" << ml << "\" y2=\""
                << fmt(yp) << "\" stroke=\"#333\"/>\n"
                << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(yp + 4)
                << "\" font-size=\"12\" text-anchor=\"end\">1e" << fmt(e, "%.0f") << "</text>\n";
        }
    } else {
        const double sy = nice_step(by.hi - by.lo, 5);
        for (double t = std::ceil(by.lo / sy) * sy; t <= by.hi + 1e-12 * sy; t += sy) {
            const double yp = py(t);
            svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt(yp) << "\" x2=\"" << ml << "\" y2=\""
                << fmt(yp) << "\" stroke=\"#333\"/>\n"
                << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(yp + 4)
                << "\" font-size=\"12\" text-anchor=\"end\">" << fmt(t + 0.0) << "</text>\n";
        }
    }

    // Series as polylines, split at unusable samples.
    for (const auto& s : spec.series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        std::vector<std::pair<double, double>> seg;
        const auto flush = [&]() {
            if (seg.size() < 2) {
                seg.clear();
                return;
            }
            svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
            if (s.dashed) svg << " stroke-dasharray=\"6,4\"";
            svg << " points=\"";
            for (const auto& [xp, yp] : seg) svg << fmt(xp, "%.2f") << "," << fmt(yp, "%.2f") << " ";
            svg << "\"/>\n";
            seg.clear();
        };
        for (std::size_t i = 0; i < n; ++i) {
            if (!usable(s.x[i], s.y[i])) {
                flush();
                continue;
            }
            seg.emplace_back(px(s.x[i]), py(transform_y(s.y[i])));
        }
        flush();
    }

    // Legend (deduplicated labels, top-right).
    std::vector<std::pair<std::string, const PlotSeries*>> legend;
    for (const auto& s : spec.series) {
        if (s.label.empty()) continue;
        bool seen = false;
        for (const auto& [label, ptr] : legend) seen = seen || label == s.label;
        if (!seen) legend.emplace_back(s.label, &s);
    }
    for (std::size_t i = 0; i < legend.size(); ++i) {
        const double ly = mt + 14 + 16 * static_cast<double>(i);
        const auto* s = legend[i].second;
        svg << "<line x1=\"" << w - mr - 130 << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
            << w - mr - 105 << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << s->color
            << "\" stroke-width=\"2\"" << (s->dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n"
            << "<text x=\"" << w - mr - 100 << "\" y=\"" << fmt(ly) << "\" font-size=\"12\">"
            << xml_escape(legend[i].first) << "</text>\n";
    }

    if (!spec.title.empty())
        svg << "<text x=\"" << w / 2 << "\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">"
            << xml_escape(spec.title) << "</text>\n";
    svg << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << h - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">" << xml_escape(spec.x_label) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << mt + plot_h / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << fmt(mt + plot_h / 2) << ")\">" << xml_escape(spec.y_label) << "</text>\n";
    svg << "</svg>\n";

    write_text_file(path, svg.str());
}

}  // namespace edgescope
