#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "xxz/io.hpp"

namespace xxz {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

double record_column(const ScanRecord& r, const std::string& column) {
    if (column == "e0") return r.e0;
    if (column == "e1") return r.e1;
    if (column == "gap_per_spin") return r.gap_per_spin;
    if (column == "q_leg") return r.q_leg;
    if (column == "q_leg_dev") return r.q_leg_dev;
    if (column == "q_rung") return r.q_rung;
    if (column == "q_rung_dev") return r.q_rung_dev;
    if (column == "cxx_leg") return r.cxx_leg;
    if (column == "czz_leg") return r.czz_leg;
    if (column == "cxx_rung") return r.cxx_rung;
    if (column == "czz_rung") return r.czz_rung;
    if (column == "ggm") return r.ggm;
    if (column == "solve_seconds") return r.solve_seconds;
    throw std::invalid_argument("render_heatmap: unknown observable column '" + column + "'");
}

// Compact viridis-like ramp, interpolated linearly in RGB.
struct Rgb {
    double r, g, b;
};
const Rgb kStops[5] = {
    {0.267, 0.005, 0.329}, {0.229, 0.322, 0.545}, {0.128, 0.567, 0.551},
    {0.369, 0.789, 0.383}, {0.993, 0.906, 0.144},
};

std::string color_at(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const double x = t * 4.0;
    const int i = std::min(3, static_cast<int>(x));
    const double f = x - i;
    const Rgb c{kStops[i].r + f * (kStops[i + 1].r - kStops[i].r),
                kStops[i].g + f * (kStops[i + 1].g - kStops[i].g),
                kStops[i].b + f * (kStops[i + 1].b - kStops[i].b)};
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(std::lround(c.r * 255)),
                  static_cast<int>(std::lround(c.g * 255)), static_cast<int>(std::lround(c.b * 255)));
    return buf;
}

}  // namespace

std::string render_heatmap(const std::vector<ScanRecord>& records, const std::string& column,
                           const std::string& alpha_label) {
    if (records.empty()) throw std::invalid_argument("render_heatmap: no records");

    std::set<double> alpha_set, delta_set;
    for (const ScanRecord& r : records) {
        alpha_set.insert(r.alpha);
        delta_set.insert(r.delta);
    }
    const std::vector<double> alphas(alpha_set.begin(), alpha_set.end());
    const std::vector<double> deltas(delta_set.begin(), delta_set.end());
    const int na = static_cast<int>(alphas.size());
    const int nd = static_cast<int>(deltas.size());

    std::map<std::pair<int, int>, const ScanRecord*> grid;
    auto index_of = [](const std::vector<double>& axis, double v) {
        return static_cast<int>(std::lower_bound(axis.begin(), axis.end(), v) - axis.begin());
    };
    for (const ScanRecord& r : records) {
        grid[{index_of(deltas, r.delta), index_of(alphas, r.alpha)}] = &r;
    }
    if (grid.size() != static_cast<std::size_t>(na) * static_cast<std::size_t>(nd)) {
        std::string missing;
        for (int di = 0; di < nd; ++di) {
            for (int ai = 0; ai < na; ++ai) {
                if (!grid.count({di, ai})) {
                    if (!missing.empty()) missing += ", ";
                    missing += "(delta_index=" + std::to_string(di) +
                               ", alpha_index=" + std::to_string(ai) + ")";
                }
            }
        }
        throw std::invalid_argument("render_heatmap: grid is incomplete; missing " + missing);
    }

    double lo = 0.0, hi = 0.0;
    bool have_range = false;
    for (const auto& [ij, rec] : grid) {
        if (rec->failed) continue;
        const double v = record_column(*rec, column);
        if (std::isnan(v)) {
            throw std::invalid_argument("render_heatmap: column '" + column +
                                        "' is empty at alpha=" + num(rec->alpha) +
                                        ", delta=" + num(rec->delta));
        }
        if (!have_range) {
            lo = hi = v;
            have_range = true;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!have_range) throw std::invalid_argument("render_heatmap: every grid point failed");

    const double margin_l = 70, margin_r = 100, margin_t = 30, margin_b = 55;
    const double plot_w = 640, plot_h = 520;
    const double width = margin_l + plot_w + margin_r;
    const double height = margin_t + plot_h + margin_b;
    const double cw = plot_w / na;
    const double ch = plot_h / nd;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
    svg += "<defs>\n<pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
           "patternTransform=\"rotate(45)\">\n"
           "<rect width=\"6\" height=\"6\" fill=\"#bbbbbb\"/>\n"
           "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#666666\" stroke-width=\"2\"/>\n"
           "</pattern>\n</defs>\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + num(margin_l + plot_w / 2) + "\" y=\"18\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"14\">" + column + "</text>\n";

    // Cells: alpha left to right, delta bottom to top.
    for (int di = 0; di < nd; ++di) {
        for (int ai = 0; ai < na; ++ai) {
            const ScanRecord* rec = grid[{di, ai}];
            const double x = margin_l + ai * cw;
            const double y = margin_t + plot_h - (di + 1) * ch;
            if (rec->failed) {
                svg += "<rect class=\"cell failed\" x=\"" + num(x) + "\" y=\"" + num(y) +
                       "\" width=\"" + num(cw) + "\" height=\"" + num(ch) +
                       "\" fill=\"url(#hatch)\"/>\n";
            } else {
                const double v = record_column(*rec, column);
                const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
                svg += "<rect class=\"cell\" x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
                       num(cw) + "\" height=\"" + num(ch) + "\" fill=\"" + color_at(t) + "\"/>\n";
            }
        }
    }

    // Axes.
    const double ax_y = margin_t + plot_h;
    svg += "<rect x=\"" + num(margin_l) + "\" y=\"" + num(margin_t) + "\" width=\"" + num(plot_w) +
           "\" height=\"" + num(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
    const std::string xlabel = alpha_label == "alpha_prime" ? "&#945;&#8242;" : "&#945;";
    svg += "<text x=\"" + num(margin_l + plot_w / 2) + "\" y=\"" + num(height - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" + xlabel +
           "</text>\n";
    svg += "<text x=\"18\" y=\"" + num(margin_t + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 18 " +
           num(margin_t + plot_h / 2) + ")\">&#916;</text>\n";
    svg += "<text x=\"" + num(margin_l) + "\" y=\"" + num(ax_y + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           num(alphas.front()) + "</text>\n";
    svg += "<text x=\"" + num(margin_l + plot_w) + "\" y=\"" + num(ax_y + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           num(alphas.back()) + "</text>\n";
    svg += "<text x=\"" + num(margin_l - 8) + "\" y=\"" + num(ax_y) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           num(deltas.front()) + "</text>\n";
    svg += "<text x=\"" + num(margin_l - 8) + "\" y=\"" + num(margin_t + 10) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           num(deltas.back()) + "</text>\n";

    // Color bar legend, low at the bottom.
    const double bar_x = margin_l + plot_w + 24, bar_w = 18;
    const int segments = 64;
    const double seg_h = plot_h / segments;
    for (int s = 0; s < segments; ++s) {
        const double t = (s + 0.5) / segments;
        const double y = margin_t + plot_h - (s + 1) * seg_h;
        svg += "<rect class=\"legend\" x=\"" + num(bar_x) + "\" y=\"" + num(y) + "\" width=\"" +
               num(bar_w) + "\" height=\"" + num(seg_h + 0.5) + "\" fill=\"" + color_at(t) +
               "\"/>\n";
    }
    svg += "<rect x=\"" + num(bar_x) + "\" y=\"" + num(margin_t) + "\" width=\"" + num(bar_w) +
           "\" height=\"" + num(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(bar_x + bar_w + 6) + "\" y=\"" + num(margin_t + plot_h) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + num(lo) + "</text>\n";
    svg += "<text x=\"" + num(bar_x + bar_w + 6) + "\" y=\"" + num(margin_t + 10) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + num(hi) + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

void render_heatmap_file(const std::vector<ScanRecord>& records, const std::string& column,
                         const std::string& path, const std::string& alpha_label) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("render_heatmap: cannot open '" + path + "'");
    const std::string svg = render_heatmap(records, column, alpha_label);
    out.write(svg.data(), static_cast<std::streamsize>(svg.size()));
    if (!out) throw std::runtime_error("render_heatmap: write failed for '" + path + "'");
}

}  // namespace xxz
