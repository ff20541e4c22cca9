#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "irhvac/detect.hpp"
#include "irhvac/ingest.hpp"
#include "irhvac/series.hpp"
#include "irhvac/spectral.hpp"

namespace irhvac {

// ---------------------------------------------------------------- CSV

/// Header `timestamp,temperature_k,missing`; missing rows leave the value empty.
std::string series_to_csv(const TemperatureSeries& s, UtcOffset offset);
void write_series_csv(const std::filesystem::path& file, const TemperatureSeries& s, UtcOffset offset);
/// Parses a series CSV; the grid (start, step) is taken from the timestamps,
/// which must be uniformly spaced. Throws FormatError.
TemperatureSeries parse_series_csv(const std::string& text, const std::string& name, RoiLabel label = RoiLabel::none);
TemperatureSeries read_series_csv(const std::filesystem::path& file, const std::string& name,
                                  RoiLabel label = RoiLabel::none);

/// Date rows by bin columns; empty cells are missing.
std::string slope_grid_to_csv(const SlopeGrid& g);

/// One row per day of `dates`: `date,switch_on,switch_off,on_score,off_score`.
std::string schedule_to_csv(const std::vector<ScheduleEvent>& events, const std::vector<Date>& dates,
                            UtcOffset offset);

/// `ac_name,date,cycling_fraction,samples_used`, with a `mean` summary row per unit.
std::string cycling_to_csv(const std::vector<CyclingReport>& reports);

std::string accuracy_to_csv(const std::vector<AccuracyRow>& rows);

std::string quality_log_to_csv(const std::vector<QualityVerdict>& verdicts, UtcOffset offset);

/// Period rows by time columns of magnitudes, plus a JSON sidecar holding the
/// wavelet descriptor and the cone-of-influence mask.
std::string scalogram_to_csv(const Scalogram& s, UtcOffset offset);
std::string scalogram_sidecar_json(const Scalogram& s);

void write_text(const std::filesystem::path& file, const std::string& text);
std::string read_text(const std::filesystem::path& file);

// ---------------------------------------------------------------- SVG

enum class ColorScale { sequential, diverging };

struct Heatmap {
    std::string title;
    std::string units;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<double> values;  // row-major
    std::vector<bool> missing;   // same shape; hatched when true
    ColorScale scale = ColorScale::sequential;
    double vmin = 0.0;
    double vmax = 1.0;
};

/// Self-contained SVG text. Without `deterministic` a generation-time comment
/// is embedded.
std::string render_heatmap_svg(const Heatmap& h, bool deterministic);

Heatmap slope_heatmap(const SlopeGrid& g);
Heatmap cycling_heatmap(const std::vector<CyclingReport>& reports);

}  // namespace irhvac
