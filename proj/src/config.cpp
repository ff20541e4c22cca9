#include "irhvac/config.hpp"

#include <algorithm>
#include <initializer_list>
#include <set>
#include <string_view>

#include <fmt/format.h>
#include <json.hpp>

#include "irhvac/error.hpp"
#include "irhvac/report.hpp"

namespace irhvac {

using nlohmann::json;

ScheduleParams RunConfig::schedule_params() const {
    return {bin, k_mad, slope_spread_floor, detrend_scope, utc_offset};
}

UsageParams RunConfig::usage_params() const {
    UsageParams p;
    p.band = band;
    p.theta = theta;
    p.min_amplitude = min_amplitude;
    p.min_cycles = min_cycles;
    p.wavelet = MorletWavelet{omega0};
    p.period_min = period_min;
    p.period_max = period_max;
    p.period_count = period_count;
    p.closing = closing;
    return p;
}

CyclingParams RunConfig::cycling_params() const { return {usage_params(), night_start, night_end, utc_offset}; }

void RunConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError("config: " + m); };
    try {
        planck.validate();
        scene.validate();
    } catch (const DomainError& e) {
        fail(e.what());
    }
    band.validate();
    if (step <= 0 || seconds_per_day % step != 0) fail(fmt::format("step {} must divide 24 h", step));
    if (bin <= 0 || seconds_per_day % bin != 0 || bin % step != 0)
        fail(fmt::format("bin {} must divide 24 h and be a multiple of step", bin));
    if (!(omega0 > 0.0)) fail("omega0 must be positive");
    if (!(period_min > 0.0 && period_max > period_min) || period_count < 2) fail("invalid period grid");
    if (!(k_mad > 0.0) || slope_spread_floor < 0.0) fail("k_mad must be positive");
    if (!(theta >= 0.0 && theta < 1.0)) fail("theta must lie in [0, 1)");
    if (!(min_amplitude >= 0.0)) fail("min_amplitude must be non-negative");
    if (!(min_cycles >= 0.0)) fail("min_cycles must be non-negative");
    if (night_start < 0 || night_start >= seconds_per_day || night_end < 0 || night_end > seconds_per_day)
        fail("night window times out of range");
    if (quality.saturated_fraction < 0.0 || quality.out_of_family_k <= 0.0 || quality.history_length == 0)
        fail("invalid quality thresholds");
}

namespace {

const std::set<std::string> known_keys = {
    "frames", "rois", "ground_truth", "output", "series", "planck", "planck_sign", "scene", "step", "max_gap_fill",
    "detrend_scope", "bin", "band", "omega0", "period_min", "period_max", "period_count",
    "k_mad", "slope_spread_floor", "theta", "min_amplitude", "min_cycles", "closing", "night_start", "night_end", "utc_offset", "quality",
    "window_roi", "wall_roi", "accuracy_ac"};

void check_keys(const json& o, const char* section, std::initializer_list<std::string_view> keys) {
    if (!o.is_object()) throw ConfigError(fmt::format("config: '{}' must be an object", section));
    for (const auto& [key, value] : o.items())
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError(fmt::format("config: unknown key '{}.{}'", section, key));
}

template <typename T>
void read(const json& o, const char* key, T& out) {
    if (o.contains(key)) out = o.at(key).get<T>();
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config: invalid JSON ({})", e.what()));
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    for (const auto& [key, value] : doc.items())
        if (!known_keys.contains(key)) throw ConfigError(fmt::format("config: unknown key '{}'", key));

    RunConfig c;
    try {
        std::string s;
        if (doc.contains("frames")) c.frames = doc["frames"].get<std::string>();
        if (doc.contains("rois")) c.rois = doc["rois"].get<std::string>();
        if (doc.contains("ground_truth")) c.ground_truth = doc["ground_truth"].get<std::string>();
        if (doc.contains("output")) c.output = doc["output"].get<std::string>();
        if (doc.contains("series")) c.series = doc["series"].get<std::string>();
        if (doc.contains("planck")) {
            const json& p = doc["planck"];
            check_keys(p, "planck", {"r1", "r2", "b", "o", "f"});
            read(p, "r1", c.planck.r1);
            read(p, "r2", c.planck.r2);
            read(p, "b", c.planck.b);
            read(p, "o", c.planck.o);
            read(p, "f", c.planck.f);
        }
        if (doc.contains("planck_sign")) {
            s = doc["planck_sign"].get<std::string>();
            if (s == "plus") c.planck_sign = PlanckSign::plus_offset;
            else if (s == "minus") c.planck_sign = PlanckSign::minus_offset;
            else throw ConfigError(fmt::format("config: planck_sign '{}' must be plus or minus", s));
        }
        if (doc.contains("scene")) {
            const json& p = doc["scene"];
            check_keys(p, "scene", {"emissivity", "transmissivity", "reflected_signal", "atmospheric_signal"});
            read(p, "emissivity", c.scene.emissivity);
            read(p, "transmissivity", c.scene.transmissivity);
            read(p, "reflected_signal", c.scene.reflected_signal);
            read(p, "atmospheric_signal", c.scene.atmospheric_signal);
        }
        read(doc, "step", c.step);
        read(doc, "max_gap_fill", c.max_gap_fill);
        if (doc.contains("detrend_scope")) {
            s = doc["detrend_scope"].get<std::string>();
            if (s == "per_day") c.detrend_scope = DetrendScope::per_day;
            else if (s == "whole") c.detrend_scope = DetrendScope::whole;
            else throw ConfigError(fmt::format("config: detrend_scope '{}' must be per_day or whole", s));
        }
        read(doc, "bin", c.bin);
        if (doc.contains("band")) {
            check_keys(doc["band"], "band", {"low", "high"});
            read(doc["band"], "low", c.band.low);
            read(doc["band"], "high", c.band.high);
        }
        read(doc, "omega0", c.omega0);
        read(doc, "period_min", c.period_min);
        read(doc, "period_max", c.period_max);
        read(doc, "period_count", c.period_count);
        read(doc, "k_mad", c.k_mad);
        read(doc, "slope_spread_floor", c.slope_spread_floor);
        read(doc, "theta", c.theta);
        read(doc, "min_amplitude", c.min_amplitude);
        read(doc, "min_cycles", c.min_cycles);
        read(doc, "closing", c.closing);
        if (doc.contains("night_start")) c.night_start = parse_time_of_day(doc["night_start"].get<std::string>());
        if (doc.contains("night_end")) c.night_end = parse_time_of_day(doc["night_end"].get<std::string>());
        if (doc.contains("utc_offset")) c.utc_offset = parse_utc_offset(doc["utc_offset"].get<std::string>());
        if (doc.contains("quality")) {
            const json& q = doc["quality"];
            check_keys(q, "quality", {"iqr_floor", "saturation_low", "saturation_high", "saturated_fraction",
                                      "out_of_family_k", "mad_floor", "history_length", "min_history"});
            read(q, "iqr_floor", c.quality.iqr_floor);
            read(q, "saturation_low", c.quality.saturation_low);
            read(q, "saturation_high", c.quality.saturation_high);
            read(q, "saturated_fraction", c.quality.saturated_fraction);
            read(q, "out_of_family_k", c.quality.out_of_family_k);
            read(q, "mad_floor", c.quality.mad_floor);
            read(q, "history_length", c.quality.history_length);
            read(q, "min_history", c.quality.min_history);
        }
        read(doc, "window_roi", c.window_roi);
        read(doc, "wall_roi", c.wall_roi);
        read(doc, "accuracy_ac", c.accuracy_ac);
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("config: {}", e.what()));
    } catch (const FormatError& e) {
        throw ConfigError(fmt::format("config: {}", e.what()));
    }
    c.validate();
    return c;
}

std::string config_to_json(const RunConfig& c) {
    json doc = {
        {"frames", c.frames.string()},
        {"rois", c.rois.string()},
        {"ground_truth", c.ground_truth.string()},
        {"output", c.output.string()},
        {"series", c.series.string()},
        {"planck", {{"r1", c.planck.r1}, {"r2", c.planck.r2}, {"b", c.planck.b}, {"o", c.planck.o}, {"f", c.planck.f}}},
        {"planck_sign", c.planck_sign == PlanckSign::plus_offset ? "plus" : "minus"},
        {"scene",
         {{"emissivity", c.scene.emissivity},
          {"transmissivity", c.scene.transmissivity},
          {"reflected_signal", c.scene.reflected_signal},
          {"atmospheric_signal", c.scene.atmospheric_signal}}},
        {"step", c.step},
        {"max_gap_fill", c.max_gap_fill},
        {"detrend_scope", c.detrend_scope == DetrendScope::per_day ? "per_day" : "whole"},
        {"bin", c.bin},
        {"band", {{"low", c.band.low}, {"high", c.band.high}}},
        {"omega0", c.omega0},
        {"period_min", c.period_min},
        {"period_max", c.period_max},
        {"period_count", c.period_count},
        {"k_mad", c.k_mad},
        {"slope_spread_floor", c.slope_spread_floor},
        {"theta", c.theta},
        {"min_amplitude", c.min_amplitude},
        {"min_cycles", c.min_cycles},
        {"closing", c.closing},
        {"night_start", format_time_of_day(c.night_start)},
        {"night_end", format_time_of_day(c.night_end)},
        {"utc_offset", format_utc_offset(c.utc_offset)},
        {"quality",
         {{"iqr_floor", c.quality.iqr_floor},
          {"saturation_low", c.quality.saturation_low},
          {"saturation_high", c.quality.saturation_high},
          {"saturated_fraction", c.quality.saturated_fraction},
          {"out_of_family_k", c.quality.out_of_family_k},
          {"mad_floor", c.quality.mad_floor},
          {"history_length", c.quality.history_length},
          {"min_history", c.quality.min_history}}},
        {"window_roi", c.window_roi},
        {"wall_roi", c.wall_roi},
        {"accuracy_ac", c.accuracy_ac},
    };
    return doc.dump(2) + "\n";
}

RunConfig load_config(const std::filesystem::path& file) {
    RunConfig c = parse_config(read_text(file));
    const std::filesystem::path base = file.parent_path();
    for (std::filesystem::path* p : {&c.frames, &c.rois, &c.ground_truth, &c.output, &c.series})
        if (!p->empty() && p->is_relative()) *p = base / *p;
    return c;
}

}  // namespace irhvac
