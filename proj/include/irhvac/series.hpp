#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irhvac/time.hpp"

namespace irhvac {

enum class RoiLabel { wall, window, ac_unit, none };

std::string_view to_string(RoiLabel label);
/// Throws FormatError on unknown names.
RoiLabel parse_roi_label(std::string_view text);

/// One ROI sample at a frame instant. Rejected frames leave a gap marker.
struct RawSample {
    Instant time;
    double kelvin = 0.0;
    bool gap = false;
};

struct RawSeries {
    std::string roi_name;
    RoiLabel label = RoiLabel::none;
    std::vector<RawSample> samples;
};

/// Uniformly sampled temperature series (kelvin). Values at missing positions
/// are NaN and must not be read.
struct TemperatureSeries {
    std::string roi_name;
    RoiLabel label = RoiLabel::none;
    Instant start;
    std::int64_t step = 300;
    std::vector<double> values;
    std::vector<bool> missing;

    static TemperatureSeries from_values(Instant start, std::int64_t step, std::vector<double> values);

    std::size_t size() const { return values.size(); }
    bool available(std::size_t i) const { return !missing[i]; }
    std::size_t count_available() const;
    Instant time_at(std::size_t i) const { return start + static_cast<std::int64_t>(i) * step; }
    /// Half-open end of the covered span.
    Instant end() const { return time_at(size()); }

    /// Throws GridMismatchError if step <= 0 or the masks are misaligned.
    void validate() const;
    bool same_grid(const TemperatureSeries& other) const;
    /// Samples [first, last) as a new series.
    TemperatureSeries slice(std::size_t first, std::size_t last) const;
};

/// Day x bin grid of OLS slopes in kelvin per hour.
struct SlopeGrid {
    std::vector<Date> dates;
    std::vector<std::int64_t> bin_starts;  // seconds after local midnight
    std::int64_t bin = 1800;
    std::vector<double> slopes;             // row-major, dates.size() x bin_starts.size()
    std::vector<bool> missing;
    UtcOffset offset;

    std::size_t rows() const { return dates.size(); }
    std::size_t cols() const { return bin_starts.size(); }
    double at(std::size_t day, std::size_t b) const { return slopes[day * cols() + b]; }
    bool is_missing(std::size_t day, std::size_t b) const { return missing[day * cols() + b]; }
};

/// A night-window slice. `date` is the local date on which the night starts.
struct NightSegment {
    Date date;
    TemperatureSeries series;
    bool partial = false;  // truncated by the series edges
    bool empty = false;    // no available samples
};

TemperatureSeries resample_uniform(const RawSeries& raw, std::int64_t step, std::size_t max_gap_fill);

/// Subtracts the OLS line over available samples. Throws DegenerateError with
/// fewer than two available samples.
TemperatureSeries detrend(const TemperatureSeries& s);

/// Detrends each local calendar day independently. Days with fewer than two
/// available samples are marked missing.
TemperatureSeries detrend_per_day(const TemperatureSeries& s, UtcOffset offset);

/// Centered moving mean over a window of `window` seconds. Samples exactly on
/// the window edge get half weight, so even sample counts stay centered.
TemperatureSeries moving_average(const TemperatureSeries& s, std::int64_t window);

TemperatureSeries difference(const TemperatureSeries& a, const TemperatureSeries& b);

SlopeGrid interval_slopes(const TemperatureSeries& s, std::int64_t bin, UtcOffset offset);

std::vector<NightSegment> night_window(const TemperatureSeries& s, std::int64_t night_start, std::int64_t night_end,
                                       UtcOffset offset);

/// Fills missing samples by linear interpolation between available neighbours
/// (constant extension at the edges). Throws DegenerateError if nothing is available.
std::vector<double> fill_gaps(const TemperatureSeries& s);

double missing_fraction(const TemperatureSeries& s);

}  // namespace irhvac
