#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "irhvac/commands.hpp"
#include "irhvac/error.hpp"
#include "irhvac/time.hpp"

namespace {

struct Overrides {
    std::string config;
    std::string out;
    std::string frames;
    std::string rois;
    std::string ground_truth;
    std::string series;
    std::optional<std::int64_t> step;
    std::optional<std::int64_t> bin;
    std::optional<double> k_mad;
    std::optional<double> theta;
    std::string utc_offset;
    std::string night_start;
    std::string night_end;
    bool deterministic = false;
};

void add_run_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "Run configuration (JSON)");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_flag("--deterministic", o.deterministic, "Omit the generation timestamp from SVG figures");
    cmd->add_option("--frames", o.frames, "Frame directory");
    cmd->add_option("--rois", o.rois, "ROI definition file");
    cmd->add_option("--ground-truth", o.ground_truth, "Indoor temperature series CSV");
    cmd->add_option("--series", o.series, "Series directory (default <out>/series)");
    cmd->add_option("--step", o.step, "Resampling step, seconds");
    cmd->add_option("--bin", o.bin, "Slope bin, seconds");
    cmd->add_option("--k-mad", o.k_mad, "Schedule outlier threshold");
    cmd->add_option("--theta", o.theta, "Band-energy fraction threshold");
    cmd->add_option("--utc-offset", o.utc_offset, "Local time offset, e.g. +08:00");
    cmd->add_option("--night-start", o.night_start, "Night window start, hh:mm");
    cmd->add_option("--night-end", o.night_end, "Night window end, hh:mm");
}

irhvac::RunConfig resolve(const Overrides& o) {
    irhvac::RunConfig c = o.config.empty() ? irhvac::RunConfig{} : irhvac::load_config(o.config);
    if (!o.out.empty()) c.output = o.out;
    if (!o.frames.empty()) c.frames = o.frames;
    if (!o.rois.empty()) c.rois = o.rois;
    if (!o.ground_truth.empty()) c.ground_truth = o.ground_truth;
    if (!o.series.empty()) c.series = o.series;
    if (o.step) c.step = *o.step;
    if (o.bin) c.bin = *o.bin;
    if (o.k_mad) c.k_mad = *o.k_mad;
    if (o.theta) c.theta = *o.theta;
    try {
        if (!o.utc_offset.empty()) c.utc_offset = irhvac::parse_utc_offset(o.utc_offset);
        if (!o.night_start.empty()) c.night_start = irhvac::parse_time_of_day(o.night_start);
        if (!o.night_end.empty()) c.night_end = irhvac::parse_time_of_day(o.night_end);
    } catch (const irhvac::FormatError& e) {
        throw irhvac::ConfigError(e.what());
    }
    c.validate();
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Infrared facade time series and HVAC analytics"};
    app.require_subcommand(1);

    Overrides extract_opts, schedule_opts, acreport_opts;
    auto* extract = app.add_subcommand("extract", "Frames + ROIs -> per-ROI temperature series");
    add_run_options(extract, extract_opts);
    auto* schedule = app.add_subcommand("schedule", "Central HVAC on/off schedule from window and wall series");
    add_run_options(schedule, schedule_opts);
    auto* acreport = app.add_subcommand("acreport", "Window AC usage, cycling fractions and accuracy");
    add_run_options(acreport, acreport_opts);

    std::string spec_file, synth_out = "synth";
    auto* synth = app.add_subcommand("synth", "Generate a synthetic scenario dataset");
    synth->add_option("--spec", spec_file, "Scenario spec (JSON)")->required();
    synth->add_option("--out", synth_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? irhvac::exit_code::ok : irhvac::exit_code::usage;
    }

    return irhvac::run_guarded(
        [&]() -> int {
            if (*extract) return irhvac::cmd_extract(resolve(extract_opts), std::cerr);
            if (*schedule)
                return irhvac::cmd_schedule(resolve(schedule_opts), {schedule_opts.deterministic}, std::cerr);
            if (*acreport)
                return irhvac::cmd_acreport(resolve(acreport_opts), {acreport_opts.deterministic}, std::cerr);
            return irhvac::cmd_synth(spec_file, synth_out, std::cerr);
        },
        std::cerr);
}
