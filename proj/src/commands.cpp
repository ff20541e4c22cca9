#include "irhvac/commands.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "irhvac/error.hpp"
#include "irhvac/report.hpp"
#include "irhvac/synth.hpp"

namespace irhvac {

namespace fs = std::filesystem;

namespace {

const RoiMask& pick_roi(const std::vector<RoiMask>& rois, const std::string& name, RoiLabel label) {
    for (const auto& r : rois)
        if (name.empty() ? r.label == label : r.name == name) return r;
    if (!name.empty()) throw ConfigError(fmt::format("roi '{}' is not defined in the roi file", name));
    throw InsufficientDataError(fmt::format("no roi labelled {}", to_string(label)));
}

TemperatureSeries load_series(const RunConfig& c, const RoiMask& roi) {
    const fs::path file = c.series_dir() / (roi.name + ".csv");
    if (!fs::exists(file))
        throw InsufficientDataError(fmt::format("series '{}' not found; run extract first", file.string()));
    return read_series_csv(file, roi.name, roi.label);
}

// Both series cut to their common span; they must share step and phase.
std::pair<TemperatureSeries, TemperatureSeries> common_span(const TemperatureSeries& a, const TemperatureSeries& b) {
    if (a.step != b.step || (a.start - b.start) % a.step != 0)
        throw GridMismatchError(fmt::format("series '{}' and '{}' are on different grids", a.roi_name, b.roi_name));
    const Instant lo = std::max(a.start, b.start);
    const Instant hi = std::min(a.end(), b.end());
    if (hi <= lo) throw InsufficientDataError("window and wall series do not overlap");
    auto cut = [&](const TemperatureSeries& s) {
        const auto first = static_cast<std::size_t>((lo - s.start) / s.step);
        const auto last = static_cast<std::size_t>((hi - s.start) / s.step);
        return s.slice(first, last);
    };
    return {cut(a), cut(b)};
}

// Samples covering whole local days only.
TemperatureSeries whole_days(const TemperatureSeries& s, UtcOffset offset) {
    Instant first = local_midnight(local_date(s.start, offset), offset);
    if (first < s.start) first = first + seconds_per_day;
    const Instant last = local_midnight(local_date(s.end(), offset), offset);
    if (last - first < seconds_per_day)
        throw InsufficientDataError(fmt::format("series '{}' covers less than one full local day", s.roi_name));
    if ((first - s.start) % s.step != 0) throw GridMismatchError("series grid is not aligned to local midnight");
    return s.slice(static_cast<std::size_t>((first - s.start) / s.step),
                   static_cast<std::size_t>((last - s.start) / s.step));
}

std::string usage_to_csv(const UsageDetection& u, UtcOffset offset) {
    std::string out = "start,end,duration_min\n";
    for (const auto& iv : u.intervals)
        fmt::format_to(std::back_inserter(out), "{},{},{:.1f}\n", format_instant(iv.start, offset),
                       format_instant(iv.end, offset), static_cast<double>(iv.end - iv.start) / 60.0);
    return out;
}

}  // namespace

int cmd_extract(const RunConfig& c, std::ostream& log) {
    c.validate();
    const std::vector<RoiMask> rois = read_roi_file(c.rois);
    if (rois.empty()) throw EmptyInputError(fmt::format("{}: no regions defined", c.rois.string()));

    std::vector<std::string> scenes;
    for (const auto& r : rois)
        if (std::find(scenes.begin(), scenes.end(), r.scene_id) == scenes.end()) scenes.push_back(r.scene_id);

    std::vector<QualityVerdict> log_rows;
    std::vector<TemperatureSeries> outputs;
    for (const auto& scene : scenes) {
        const FrameLoad load = load_frames(c.frames, scene);
        for (const auto& e : load.errors) log << "warning: skipped " << e << '\n';
        for (const auto& w : load.warnings) log << "warning: " << w << '\n';
        const std::vector<QualityVerdict> verdicts = screen_frames(load.frames, c.quality);
        const auto rejected = std::count_if(verdicts.begin(), verdicts.end(), [](auto& v) { return !v.accepted; });
        log << fmt::format("scene {}: {} frames, {} rejected by the quality filter, {} files skipped\n", scene,
                           load.frames.size(), rejected, load.skipped());
        log_rows.insert(log_rows.end(), verdicts.begin(), verdicts.end());

        const ThermalFrame& first = load.frames.front();
        for (const auto& roi : rois) {
            if (roi.scene_id != scene) continue;
            roi.validate(first.width, first.height);
            const RawSeries raw = extract_series(load.frames, verdicts, roi, c.planck, c.scene, c.planck_sign);
            outputs.push_back(resample_uniform(raw, c.step, c.max_gap_fill));
        }
    }

    const fs::path dir = c.series_dir();
    fs::create_directories(dir);
    for (const auto& s : outputs) {
        write_series_csv(dir / (s.roi_name + ".csv"), s, c.utc_offset);
        log << fmt::format("series {}: {} samples, {:.1f}% missing\n", s.roi_name, s.size(),
                           100.0 * missing_fraction(s));
    }
    write_text(c.output / "quality_log.csv", quality_log_to_csv(log_rows, c.utc_offset));
    return exit_code::ok;
}

int cmd_schedule(const RunConfig& c, const CommandOptions& opts, std::ostream& log) {
    c.validate();
    const std::vector<RoiMask> rois = read_roi_file(c.rois);
    const RoiMask& window_roi = pick_roi(rois, c.window_roi, RoiLabel::window);
    const RoiMask& wall_roi = pick_roi(rois, c.wall_roi, RoiLabel::wall);
    auto [window, wall] = common_span(load_series(c, window_roi), load_series(c, wall_roi));
    window = whole_days(window, c.utc_offset);
    wall = whole_days(wall, c.utc_offset);

    const ScheduleDetection det = detect_schedule(window, wall, c.schedule_params());
    fs::create_directories(c.output);
    write_text(c.output / "schedule.csv", schedule_to_csv(det.events, det.grid.dates, c.utc_offset));
    write_text(c.output / "slopes.csv", slope_grid_to_csv(det.grid));
    write_text(c.output / "slopes.svg", render_heatmap_svg(slope_heatmap(det.grid), opts.deterministic));
    log << fmt::format("schedule: {} days, {} events\n", det.grid.rows(), det.events.size());
    return exit_code::ok;
}

int cmd_acreport(const RunConfig& c, const CommandOptions& opts, std::ostream& log) {
    c.validate();
    const std::vector<RoiMask> rois = read_roi_file(c.rois);
    std::vector<TemperatureSeries> units;
    for (const auto& r : rois)
        if (r.label == RoiLabel::ac_unit) units.push_back(load_series(c, r));
    if (units.empty()) throw InsufficientDataError("no roi labelled ac_unit");

    const CyclingParams params = c.cycling_params();
    std::vector<CyclingReport> reports;
    std::vector<UsageDetection> usages;
    std::vector<Scalogram> scalograms;
    for (const auto& s : units) {
        reports.push_back(cycling_report(s, params));
        usages.push_back(detect_ac_usage(s, params.usage));
        const auto periods = clip_periods(
            log_period_grid(params.usage.period_min, params.usage.period_max, params.usage.period_count), s.step,
            s.size());
        scalograms.push_back(cwt(s, periods, params.usage.wavelet));
    }
    const bool any_night = std::any_of(reports.begin(), reports.end(), [](const CyclingReport& r) {
        return std::any_of(r.nights.begin(), r.nights.end(), [](const NightCycling& n) { return n.samples_used > 0; });
    });
    if (!any_night) throw InsufficientDataError("no usable nights in any ac_unit series");

    std::vector<AccuracyRow> accuracy;
    const bool with_truth = !c.ground_truth.empty();
    if (with_truth) {
        const TemperatureSeries indoor = read_series_csv(c.ground_truth, "indoor");
        const StateSeries truth = truth_states_from_indoor(indoor);
        std::size_t k = 0;
        if (!c.accuracy_ac.empty()) {
            while (k < units.size() && units[k].roi_name != c.accuracy_ac) ++k;
            if (k == units.size()) throw ConfigError(fmt::format("accuracy_ac '{}' is not an ac_unit roi", c.accuracy_ac));
        }
        const StateSeries predicted = usage_to_states(usages[k].intervals, truth.start, truth.step, truth.size());
        accuracy = accuracy_by_hour(predicted, truth, c.utc_offset);
    }

    fs::create_directories(c.output);
    write_text(c.output / "cycling.csv", cycling_to_csv(reports));
    write_text(c.output / "cycling.svg", render_heatmap_svg(cycling_heatmap(reports), opts.deterministic));
    for (std::size_t i = 0; i < units.size(); ++i) {
        const std::string& name = units[i].roi_name;
        write_text(c.output / (name + "_usage.csv"), usage_to_csv(usages[i], c.utc_offset));
        write_text(c.output / (name + "_scalogram.csv"), scalogram_to_csv(scalograms[i], c.utc_offset));
        write_text(c.output / (name + "_scalogram.json"), scalogram_sidecar_json(scalograms[i]));
        log << fmt::format("{}: {} usage intervals, mean night cycling fraction {:.3f}\n", name,
                           usages[i].intervals.size(), reports[i].overall_mean_fraction);
    }
    if (with_truth) write_text(c.output / "accuracy.csv", accuracy_to_csv(accuracy));
    return exit_code::ok;
}

int cmd_synth(const fs::path& spec_file, const fs::path& out_dir, std::ostream& log) {
    const ScenarioSpec spec = parse_scenario(read_text(spec_file));
    const ScenarioOutput out = generate(spec);
    const FrameLayout layout = FrameLayout::standard(spec);
    const PlanckConstants constants;

    fs::create_directories(out_dir);
    const EmitResult emitted = emit_frames(out, layout, constants, spec.offset, out_dir / "frames");
    write_text(out_dir / "rois.json", rois_to_json(emitted.rois));
    write_text(out_dir / "scenario.json", scenario_to_json(spec));

    const fs::path truth_dir = out_dir / "truth";
    write_series_csv(truth_dir / "wall.csv", out.wall, spec.offset);
    write_series_csv(truth_dir / "window.csv", out.window, spec.offset);
    write_series_csv(truth_dir / "indoor.csv", out.indoor, spec.offset);
    for (const auto& s : out.condensers) write_series_csv(truth_dir / (s.roi_name + ".csv"), s, spec.offset);

    using nlohmann::json;
    json labels;
    labels["events"] = json::array();
    for (const auto& e : out.truth.events)
        labels["events"].push_back({{"instant", format_instant(e.instant, spec.offset)},
                                    {"kind", e.kind == EventKind::switch_on ? "switch_on" : "switch_off"}});
    labels["ac_usage"] = json::object();
    for (std::size_t u = 0; u < spec.ac_units.size(); ++u) {
        json list = json::array();
        for (const auto& iv : out.truth.ac_usage[u])
            list.push_back({{"start", format_instant(iv.start, spec.offset)}, {"end", format_instant(iv.end, spec.offset)}});
        labels["ac_usage"][spec.ac_units[u].name] = list;
    }
    labels["hvac_days"] = json::array();
    for (Date d : out.truth.hvac_days) labels["hvac_days"].push_back(format_date(d));
    labels["idle_days"] = json::array();
    for (Date d : out.truth.idle_days) labels["idle_days"].push_back(format_date(d));
    labels["washed_out"] = json::array();
    for (Instant t : emitted.washed_out) labels["washed_out"].push_back(format_instant(t, spec.offset));
    write_text(truth_dir / "labels.json", labels.dump(2) + "\n");

    RunConfig config;
    config.frames = "frames";
    config.rois = "rois.json";
    config.ground_truth = spec.ac_units.empty() ? fs::path{} : fs::path{"truth/indoor.csv"};
    config.output = "report";
    config.planck = constants;
    config.step = spec.step;
    config.utc_offset = spec.offset;
    if (config.bin % config.step != 0) config.bin = config.step;
    write_text(out_dir / "config.json", config_to_json(config));

    log << fmt::format("synth: {} days, {} frames, {} rois written to {}\n", spec.days, emitted.frames_written,
                       emitted.rois.size(), out_dir.string());
    return exit_code::ok;
}

int run_guarded(const std::function<int()>& fn, std::ostream& err) {
    try {
        return fn();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::io;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::io;
    }
}

}  // namespace irhvac
