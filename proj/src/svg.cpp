#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "irhvac/report.hpp"

namespace irhvac {

namespace {

struct Rgb {
    int r, g, b;
};

Rgb lerp(Rgb a, Rgb b, double t) {
    auto mix = [t](int x, int y) { return static_cast<int>(std::lround(x + (y - x) * t)); };
    return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

// Piecewise-linear ramps; sequential is dark blue -> yellow, diverging is
// blue -> white -> red with white at the midpoint.
Rgb color_for(double v, const Heatmap& h) {
    const double span = h.vmax - h.vmin;
    double t = span > 0.0 ? (v - h.vmin) / span : 0.5;
    t = std::clamp(t, 0.0, 1.0);
    if (h.scale == ColorScale::diverging) {
        if (t < 0.5) return lerp({33, 102, 172}, {247, 247, 247}, t / 0.5);
        return lerp({247, 247, 247}, {178, 24, 43}, (t - 0.5) / 0.5);
    }
    if (t < 0.5) return lerp({13, 8, 135}, {204, 71, 120}, t / 0.5);
    return lerp({204, 71, 120}, {240, 249, 33}, (t - 0.5) / 0.5);
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

template <typename... T>
void put(std::string& out, fmt::format_string<T...> f, T&&... args) {
    fmt::format_to(std::back_inserter(out), f, std::forward<T>(args)...);
}

}  // namespace

std::string render_heatmap_svg(const Heatmap& h, bool deterministic) {
    const std::size_t rows = h.row_labels.size(), cols = h.col_labels.size();
    const double cell_w = std::clamp(720.0 / std::max<std::size_t>(cols, 1), 8.0, 40.0);
    const double cell_h = std::clamp(480.0 / std::max<std::size_t>(rows, 1), 8.0, 28.0);
    const double left = 110.0, top = 50.0, legend_w = 80.0;
    const double width = left + cell_w * static_cast<double>(cols) + legend_w + 20.0;
    const double height = top + cell_h * static_cast<double>(rows) + 70.0;

    std::string out;
    put(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    put(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\">\n",
        width, height, width, height);
    if (!deterministic)
        put(out, "<!-- generated {:%Y-%m-%dT%H:%M:%SZ} -->\n",
            std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
    put(out, "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
        "patternTransform=\"rotate(45)\"><rect width=\"6\" height=\"6\" fill=\"#ffffff\"/>"
        "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#999999\" stroke-width=\"2\"/></pattern></defs>\n");
    put(out, "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
    put(out, "<text x=\"{:.1f}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">{}</text>\n", left, escape(h.title));

    put(out, "<g font-family=\"sans-serif\" font-size=\"9\">\n");
    for (std::size_t r = 0; r < rows; ++r) {
        const double y = top + cell_h * static_cast<double>(r);
        put(out, "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n", left - 4.0, y + cell_h * 0.65,
            escape(h.row_labels[r]));
        for (std::size_t c = 0; c < cols; ++c) {
            const double x = left + cell_w * static_cast<double>(c);
            const std::size_t i = r * cols + c;
            if (h.missing[i] || !std::isfinite(h.values[i])) {
                put(out, "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"url(#hatch)\"/>\n", x, y,
                    cell_w, cell_h);
            } else {
                const Rgb k = color_for(h.values[i], h);
                put(out, "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"#{:02x}{:02x}{:02x}\">"
                    "<title>{:.4g}</title></rect>\n",
                    x, y, cell_w, cell_h, k.r, k.g, k.b, h.values[i]);
            }
        }
    }
    // Column labels, thinned so they stay legible.
    const std::size_t every = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(36.0 / cell_w)));
    const double base = top + cell_h * static_cast<double>(rows);
    for (std::size_t c = 0; c < cols; c += every) {
        const double x = left + cell_w * (static_cast<double>(c) + 0.5);
        put(out, "<text x=\"{:.1f}\" y=\"{:.1f}\" transform=\"rotate(60 {:.1f} {:.1f})\">{}</text>\n", x, base + 10.0, x,
            base + 10.0, escape(h.col_labels[c]));
    }
    put(out, "</g>\n");

    // Legend.
    const double lx = left + cell_w * static_cast<double>(cols) + 20.0;
    const int steps = 20;
    for (int s = 0; s < steps; ++s) {
        const double v = h.vmax - (h.vmax - h.vmin) * (s + 0.5) / steps;
        const Rgb k = color_for(v, h);
        put(out, "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"14\" height=\"{:.2f}\" fill=\"#{:02x}{:02x}{:02x}\"/>\n", lx,
            top + 8.0 * s, 8.0, k.r, k.g, k.b);
    }
    put(out, "<g font-family=\"sans-serif\" font-size=\"9\">\n");
    put(out, "<text x=\"{:.1f}\" y=\"{:.1f}\">{:.3g}</text>\n", lx + 18.0, top + 8.0, h.vmax);
    put(out, "<text x=\"{:.1f}\" y=\"{:.1f}\">{:.3g}</text>\n", lx + 18.0, top + 8.0 * steps, h.vmin);
    put(out, "<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", lx, top + 8.0 * steps + 16.0, escape(h.units));
    put(out, "</g>\n</svg>\n");
    return out;
}

Heatmap slope_heatmap(const SlopeGrid& g) {
    Heatmap h;
    h.title = "Window-wall detrended difference slope";
    h.units = "K/h";
    h.scale = ColorScale::diverging;
    for (Date d : g.dates) h.row_labels.push_back(format_date(d));
    for (auto b : g.bin_starts) h.col_labels.push_back(format_time_of_day(b));
    h.values = g.slopes;
    h.missing = g.missing;
    double extent = 0.0;
    for (std::size_t i = 0; i < g.slopes.size(); ++i)
        if (!g.missing[i]) extent = std::max(extent, std::abs(g.slopes[i]));
    if (extent == 0.0) extent = 1.0;
    h.vmin = -extent;
    h.vmax = extent;
    return h;
}

Heatmap cycling_heatmap(const std::vector<CyclingReport>& reports) {
    Heatmap h;
    h.title = "Nightly cycling fraction";
    h.units = "fraction";
    std::vector<Date> dates;
    for (const auto& r : reports)
        for (const auto& n : r.nights) dates.push_back(n.date);
    std::sort(dates.begin(), dates.end());
    dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
    for (Date d : dates) h.col_labels.push_back(format_date(d));
    for (const auto& r : reports) {
        h.row_labels.push_back(r.ac_name);
        for (Date d : dates) {
            auto it = std::find_if(r.nights.begin(), r.nights.end(), [&](const NightCycling& n) { return n.date == d; });
            const bool have = it != r.nights.end() && it->samples_used > 0;
            h.values.push_back(have ? it->fraction : 0.0);
            h.missing.push_back(!have);
        }
    }
    return h;
}

}  // namespace irhvac
