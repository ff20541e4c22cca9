#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "irhvac/detect.hpp"
#include "irhvac/ingest.hpp"
#include "irhvac/radiometry.hpp"
#include "irhvac/spectral.hpp"

namespace irhvac {

/// Every tunable of a batch run. Defaults are the library defaults.
struct RunConfig {
    std::filesystem::path frames;
    std::filesystem::path rois;
    std::filesystem::path ground_truth;  // indoor temperature series CSV, optional
    std::filesystem::path output = "out";
    std::filesystem::path series;        // defaults to <output>/series

    PlanckConstants planck;
    PlanckSign planck_sign = PlanckSign::plus_offset;
    RadiometricScene scene;

    std::int64_t step = 300;
    std::size_t max_gap_fill = 3;
    DetrendScope detrend_scope = DetrendScope::per_day;
    std::int64_t bin = 1800;

    FrequencyBand band;
    double omega0 = 6.0;
    double period_min = 240.0;
    double period_max = 15360.0;
    std::size_t period_count = 48;

    double k_mad = 4.0;
    double slope_spread_floor = 0.25;
    double theta = 0.35;
    double min_amplitude = 0.4;
    double min_cycles = 2.0;
    std::size_t closing = 2;

    std::int64_t night_start = 20 * 3600;
    std::int64_t night_end = 10 * 3600;
    UtcOffset utc_offset{8 * 3600};

    QualityThresholds quality;

    std::string window_roi;   // empty: first roi labelled window
    std::string wall_roi;     // empty: first roi labelled wall
    std::string accuracy_ac;  // empty: first roi labelled ac_unit

    std::filesystem::path series_dir() const { return series.empty() ? output / "series" : series; }
    ScheduleParams schedule_params() const;
    UsageParams usage_params() const;
    CyclingParams cycling_params() const;

    /// Throws ConfigError.
    void validate() const;
    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Missing keys keep their defaults; unknown keys are rejected. Throws ConfigError.
RunConfig parse_config(const std::string& json_text);
std::string config_to_json(const RunConfig& c);

/// parse_config on the file, with relative paths resolved against its directory.
RunConfig load_config(const std::filesystem::path& file);

}  // namespace irhvac
