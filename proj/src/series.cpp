#include "irhvac/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "irhvac/error.hpp"

namespace irhvac {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct Line {
    double slope = 0.0;      // per unit of x
    double intercept = 0.0;  // at x = 0
};

// OLS fit over (x, y) pairs; x is centered internally for conditioning.
template <typename Pairs>
std::optional<Line> fit_line(const Pairs& pairs) {
    std::size_t n = 0;
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : pairs) {
        sx += x;
        sy += y;
        ++n;
    }
    if (n < 2) return std::nullopt;
    const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : pairs) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0) return std::nullopt;
    const double slope = sxy / sxx;
    return Line{slope, my - slope * mx};
}

std::vector<std::pair<double, double>> available_pairs(const TemperatureSeries& s, std::size_t first,
                                                       std::size_t last) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(last - first);
    for (std::size_t i = first; i < last; ++i)
        if (s.available(i)) pairs.emplace_back(static_cast<double>(i - first), s.values[i]);
    return pairs;
}

}  // namespace

std::string_view to_string(RoiLabel label) {
    switch (label) {
        case RoiLabel::wall: return "wall";
        case RoiLabel::window: return "window";
        case RoiLabel::ac_unit: return "ac_unit";
        case RoiLabel::none: return "none";
    }
    return "none";
}

RoiLabel parse_roi_label(std::string_view text) {
    if (text == "wall") return RoiLabel::wall;
    if (text == "window") return RoiLabel::window;
    if (text == "ac_unit") return RoiLabel::ac_unit;
    if (text == "none") return RoiLabel::none;
    throw FormatError(fmt::format("unknown roi label '{}' (expected wall, window, ac_unit or none)", text));
}

TemperatureSeries TemperatureSeries::from_values(Instant start, std::int64_t step, std::vector<double> values) {
    TemperatureSeries s;
    s.start = start;
    s.step = step;
    s.missing.assign(values.size(), false);
    s.values = std::move(values);
    return s;
}

std::size_t TemperatureSeries::count_available() const {
    return static_cast<std::size_t>(std::count(missing.begin(), missing.end(), false));
}

void TemperatureSeries::validate() const {
    if (step <= 0) throw GridMismatchError(fmt::format("series '{}': step {} must be positive", roi_name, step));
    if (values.size() != missing.size())
        throw GridMismatchError(fmt::format("series '{}': {} values but {} missing flags", roi_name, values.size(),
                                            missing.size()));
}

bool TemperatureSeries::same_grid(const TemperatureSeries& other) const {
    return start == other.start && step == other.step && size() == other.size();
}

TemperatureSeries TemperatureSeries::slice(std::size_t first, std::size_t last) const {
    TemperatureSeries out;
    out.roi_name = roi_name;
    out.label = label;
    out.step = step;
    out.start = time_at(first);
    out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(first),
                      values.begin() + static_cast<std::ptrdiff_t>(last));
    out.missing.assign(missing.begin() + static_cast<std::ptrdiff_t>(first),
                       missing.begin() + static_cast<std::ptrdiff_t>(last));
    return out;
}

double missing_fraction(const TemperatureSeries& s) {
    if (s.size() == 0) return 0.0;
    return 1.0 - static_cast<double>(s.count_available()) / static_cast<double>(s.size());
}

std::vector<double> fill_gaps(const TemperatureSeries& s) {
    s.validate();
    std::vector<double> out(s.size());
    std::ptrdiff_t prev = -1;
    const auto n = static_cast<std::ptrdiff_t>(s.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        if (s.available(i)) {
            out[i] = s.values[i];
            if (prev + 1 < i) {
                for (std::ptrdiff_t k = prev + 1; k < i; ++k) {
                    out[k] = prev < 0 ? s.values[i]
                                      : s.values[prev] + (s.values[i] - s.values[prev]) *
                                                             static_cast<double>(k - prev) /
                                                             static_cast<double>(i - prev);
                }
            }
            prev = i;
        }
    }
    if (prev < 0) throw DegenerateError(fmt::format("series '{}': no available samples", s.roi_name));
    for (std::ptrdiff_t k = prev + 1; k < n; ++k) out[k] = s.values[prev];
    return out;
}

TemperatureSeries resample_uniform(const RawSeries& raw, std::int64_t step, std::size_t max_gap_fill) {
    if (step <= 0) throw GridMismatchError(fmt::format("resample step {} must be positive", step));
    std::vector<RawSample> valid;
    for (const auto& s : raw.samples)
        if (!s.gap && std::isfinite(s.kelvin)) valid.push_back(s);
    std::stable_sort(valid.begin(), valid.end(), [](const RawSample& a, const RawSample& b) { return a.time < b.time; });
    if (valid.size() < 2)
        throw EmptyInputError(
            fmt::format("series '{}': need at least 2 valid samples, have {}", raw.roi_name, valid.size()));

    TemperatureSeries out;
    out.roi_name = raw.roi_name;
    out.label = raw.label;
    out.start = valid.front().time;
    out.step = step;
    const std::int64_t span = valid.back().time - valid.front().time;
    const std::size_t n = static_cast<std::size_t>(span / step) + 1;
    out.values.assign(n, nan);
    out.missing.assign(n, true);

    const std::int64_t reach = static_cast<std::int64_t>(max_gap_fill) * step;
    std::size_t k = 0;  // valid[k].time <= t < valid[k + 1].time
    for (std::size_t i = 0; i < n; ++i) {
        const Instant t = out.time_at(i);
        while (k + 1 < valid.size() && valid[k + 1].time <= t) ++k;
        const RawSample& lo = valid[k];
        if (lo.time == t) {
            out.values[i] = lo.kelvin;
            out.missing[i] = false;
            continue;
        }
        const RawSample& hi = valid[k + 1];
        if (std::min(t - lo.time, hi.time - t) > reach) continue;
        const double w = static_cast<double>(t - lo.time) / static_cast<double>(hi.time - lo.time);
        out.values[i] = lo.kelvin + w * (hi.kelvin - lo.kelvin);
        out.missing[i] = false;
    }
    return out;
}

TemperatureSeries detrend(const TemperatureSeries& s) {
    s.validate();
    const auto line = fit_line(available_pairs(s, 0, s.size()));
    if (!line)
        throw DegenerateError(fmt::format("series '{}': detrend needs at least 2 available samples", s.roi_name));
    TemperatureSeries out = s;
    for (std::size_t i = 0; i < s.size(); ++i)
        out.values[i] = s.available(i) ? s.values[i] - (line->slope * static_cast<double>(i) + line->intercept) : nan;
    return out;
}

TemperatureSeries detrend_per_day(const TemperatureSeries& s, UtcOffset offset) {
    s.validate();
    TemperatureSeries out = s;
    std::size_t first = 0;
    while (first < s.size()) {
        const Date d = local_date(s.time_at(first), offset);
        std::size_t last = first;
        while (last < s.size() && local_date(s.time_at(last), offset) == d) ++last;
        const auto line = fit_line(available_pairs(s, first, last));
        for (std::size_t i = first; i < last; ++i) {
            if (!line || !s.available(i)) {
                out.values[i] = nan;
                out.missing[i] = true;
            } else {
                out.values[i] = s.values[i] - (line->slope * static_cast<double>(i - first) + line->intercept);
            }
        }
        first = last;
    }
    return out;
}

TemperatureSeries moving_average(const TemperatureSeries& s, std::int64_t window) {
    s.validate();
    if (window < s.step)
        throw GridMismatchError(fmt::format("moving-average window {} s is shorter than step {} s", window, s.step));
    // Offsets |k| * step < window / 2 get weight 1, exactly window / 2 gets 1/2.
    const std::int64_t twice_half = window;  // compare 2 |k| step against window
    std::int64_t reach = 0;
    while (2 * (reach + 1) * s.step <= twice_half) ++reach;

    TemperatureSeries out = s;
    const auto n = static_cast<std::ptrdiff_t>(s.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double total_w = 0.0, present_w = 0.0, sum = 0.0;
        for (std::ptrdiff_t k = -reach; k <= reach; ++k) {
            const double w = (2 * std::abs(k) * s.step == twice_half) ? 0.5 : 1.0;
            total_w += w;
            const std::ptrdiff_t j = i + k;
            if (j < 0 || j >= n || !s.available(j)) continue;
            present_w += w;
            sum += w * s.values[j];
        }
        if (present_w * 2.0 < total_w || present_w == 0.0) {
            out.values[i] = nan;
            out.missing[i] = true;
        } else {
            out.values[i] = sum / present_w;
            out.missing[i] = false;
        }
    }
    return out;
}

TemperatureSeries difference(const TemperatureSeries& a, const TemperatureSeries& b) {
    a.validate();
    b.validate();
    if (!a.same_grid(b))
        throw GridMismatchError(fmt::format("series '{}' and '{}' are on different grids", a.roi_name, b.roi_name));
    TemperatureSeries out = a;
    out.roi_name = a.roi_name + "-" + b.roi_name;
    out.label = RoiLabel::none;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool ok = a.available(i) && b.available(i);
        out.missing[i] = !ok;
        out.values[i] = ok ? a.values[i] - b.values[i] : nan;
    }
    return out;
}

SlopeGrid interval_slopes(const TemperatureSeries& s, std::int64_t bin, UtcOffset offset) {
    s.validate();
    if (bin <= 0 || seconds_per_day % bin != 0)
        throw GridMismatchError(fmt::format("slope bin {} s must divide 24 h", bin));
    if (bin % s.step != 0)
        throw GridMismatchError(fmt::format("slope bin {} s must be a multiple of step {} s", bin, s.step));
    if (s.size() == 0) throw GridMismatchError("interval_slopes on an empty series");

    SlopeGrid g;
    g.bin = bin;
    g.offset = offset;
    const Date first = local_date(s.start, offset);
    const Date last = local_date(s.time_at(s.size() - 1), offset);
    for (Date d = first; d <= last; d += std::chrono::days{1}) g.dates.push_back(d);
    for (std::int64_t b = 0; b < seconds_per_day; b += bin) g.bin_starts.push_back(b);
    const std::size_t cols = g.bin_starts.size();
    g.slopes.assign(g.dates.size() * cols, nan);
    g.missing.assign(g.dates.size() * cols, true);

    // Accumulate (hours, value) pairs per cell.
    std::vector<std::vector<std::pair<double, double>>> cells(g.slopes.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!s.available(i)) continue;
        const Instant t = s.time_at(i);
        const auto day = static_cast<std::size_t>((local_date(t, offset) - first).count());
        const std::int64_t sod = local_seconds_of_day(t, offset);
        const auto col = static_cast<std::size_t>(sod / bin);
        cells[day * cols + col].emplace_back(static_cast<double>(sod % bin) / 3600.0, s.values[i]);
    }

    const auto ncells = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < ncells; ++c) {
        if (const auto line = fit_line(cells[c])) {
            g.slopes[c] = line->slope;
            g.missing[c] = false;
        }
    }
    return g;
}

std::vector<NightSegment> night_window(const TemperatureSeries& s, std::int64_t night_start, std::int64_t night_end,
                                       UtcOffset offset) {
    s.validate();
    std::vector<NightSegment> out;
    if (s.size() == 0) return out;
    std::int64_t length = night_end - night_start;
    if (length <= 0) length += seconds_per_day;

    const Date first = local_date(s.start, offset) - std::chrono::days{1};
    const Date last = local_date(s.time_at(s.size() - 1), offset);
    for (Date d = first; d <= last; d += std::chrono::days{1}) {
        const Instant begin = local_midnight(d, offset) + night_start;
        const Instant end = begin + length;
        // Sample indices with begin <= t < end.
        auto index_at_or_after = [&](Instant t) -> std::size_t {
            if (t <= s.start) return 0;
            const std::int64_t k = (t - s.start + s.step - 1) / s.step;
            return static_cast<std::size_t>(std::min<std::int64_t>(k, static_cast<std::int64_t>(s.size())));
        };
        const std::size_t lo = index_at_or_after(begin);
        const std::size_t hi = index_at_or_after(end);
        if (lo >= hi) continue;
        NightSegment seg;
        seg.date = d;
        seg.series = s.slice(lo, hi);
        seg.partial = begin < s.start || end > s.end();
        seg.empty = seg.series.count_available() == 0;
        out.push_back(std::move(seg));
    }
    return out;
}

}  // namespace irhvac
