#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>

#include "irhvac/config.hpp"

namespace irhvac {

struct CommandOptions {
    bool deterministic = false;
};

// Each command writes its reports under config.output and returns 0, or throws
// an irhvac::Error whose exit_code_for() is the process exit code.

/// series/<roi>.csv per ROI plus quality_log.csv.
int cmd_extract(const RunConfig& config, std::ostream& log);

/// schedule.csv, slopes.csv, slopes.svg.
int cmd_schedule(const RunConfig& config, const CommandOptions& opts, std::ostream& log);

/// cycling.csv, cycling.svg, per-unit usage and scalogram exports, and
/// accuracy.csv when ground truth is configured.
int cmd_acreport(const RunConfig& config, const CommandOptions& opts, std::ostream& log);

/// frames/, rois.json, truth/, labels.json, and a config.json that runs the
/// other commands on the generated dataset.
int cmd_synth(const std::filesystem::path& spec_file, const std::filesystem::path& out_dir, std::ostream& log);

/// Runs `fn`, printing any error to `err` and mapping it to an exit code.
int run_guarded(const std::function<int()>& fn, std::ostream& err);

}  // namespace irhvac
