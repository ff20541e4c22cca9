#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "irhvac/detect.hpp"
#include "irhvac/ingest.hpp"
#include "irhvac/radiometry.hpp"
#include "irhvac/series.hpp"

namespace irhvac {

/// Local-time interval repeated every day; end <= start wraps past midnight.
struct DailyInterval {
    std::int64_t start = 0;  // seconds after local midnight
    std::int64_t end = 0;
    friend bool operator==(const DailyInterval&, const DailyInterval&) = default;
};

struct AcUnitSpec {
    std::string name;
    double duty_period = 1440.0;  // seconds
    double duty_fraction = 0.5;   // share of each period the compressor runs
    double duty_amplitude = 2.0;  // kelvin rise of the condenser while running
    std::vector<DailyInterval> usage;
    friend bool operator==(const AcUnitSpec&, const AcUnitSpec&) = default;
};

struct ScenarioSpec {
    Date start_date = parse_date("2023-03-06");  // a Monday
    std::size_t days = 7;
    std::int64_t step = 300;
    UtcOffset offset{8 * 3600};
    std::array<std::optional<DailyInterval>, 7> hvac;  // Monday first; on/off times
    std::vector<AcUnitSpec> ac_units;
    double ambient_mean = 301.15;
    double diurnal_amplitude = 2.0;
    double solar_amplitude = 6.0;
    double solar_flicker = 0.0;  // kelvin of in-band cloud flicker at peak sun
    double noise_sigma = 0.1;
    double setpoint = 296.15;
    double indoor_free_offset = 3.0;
    double window_coupling = 0.8;
    bool allow_out_of_band_duty = false;
    std::uint64_t seed = 1;

    /// Throws SpecError on inconsistent values.
    void validate() const;

    /// Central plant on 06:00-22:00 on weekdays, 06:00-18:00 on Saturday, off
    /// Sunday, sampled every 2 minutes.
    static ScenarioSpec canonical();
    friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

ScenarioSpec parse_scenario(const std::string& json_text);
std::string scenario_to_json(const ScenarioSpec& spec);

struct ScenarioTruth {
    std::vector<ScheduleEvent> events;                   // central plant switches, time-ordered
    std::vector<std::vector<UsageInterval>> ac_usage;    // per unit
    StateSeries indoor_states;                           // room cooled (on) or not
    std::vector<Date> hvac_days;
    std::vector<Date> idle_days;
};

struct ScenarioOutput {
    TemperatureSeries wall;
    TemperatureSeries window;
    TemperatureSeries indoor;
    std::vector<TemperatureSeries> condensers;
    ScenarioTruth truth;
};

/// Deterministic for a given scenario (including seed).
ScenarioOutput generate(const ScenarioSpec& spec);

struct RoiPlacement {
    std::string roi_name;
    std::string source;  // "wall", "window", or an AC unit name
    int x = 0, y = 0, w = 1, h = 1;
};

struct FrameLayout {
    std::string scene_id = "facade";
    int width = 24;
    int height = 16;
    double background_contrast = 3.0;  // kelvin gradient across the frame
    std::size_t washout_every = 0;     // every n-th frame is flattened (0 = never)
    std::vector<RoiPlacement> placements;

    /// Wall, window, and one 2x2 block per AC unit.
    static FrameLayout standard(const ScenarioSpec& spec);
};

struct EmitResult {
    std::size_t frames_written = 0;
    std::vector<RoiMask> rois;
    std::vector<Instant> washed_out;
};

/// Writes `<frames_dir>/<scene_id>/<timestamp>.csv`, one frame per step.
/// Throws LayoutError on overlapping or out-of-frame placements.
EmitResult emit_frames(const ScenarioOutput& scenario, const FrameLayout& layout, const PlanckConstants& constants,
                       UtcOffset offset, const std::filesystem::path& frames_dir,
                       PlanckSign sign = PlanckSign::plus_offset);

}  // namespace irhvac
