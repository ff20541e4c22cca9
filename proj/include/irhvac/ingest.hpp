#pragma once

#include <cstddef>
#include <deque>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "irhvac/radiometry.hpp"
#include "irhvac/series.hpp"
#include "irhvac/time.hpp"

namespace irhvac {

struct ThermalFrame {
    Instant timestamp;
    std::string scene_id;
    int width = 0;
    int height = 0;
    std::vector<double> counts;  // row-major

    void validate() const;
    double at(int x, int y) const { return counts[static_cast<std::size_t>(y) * width + x]; }
};

struct PixelPoint {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(PixelPoint, PixelPoint) = default;
};

/// Labelled polygon in continuous pixel coordinates; pixel (i, j) covers
/// [i, i+1) x [j, j+1) and is inside when its center is.
struct RoiMask {
    std::string name;
    std::string scene_id;
    RoiLabel label = RoiLabel::none;
    std::vector<PixelPoint> polygon;

    /// Throws FormatError for < 3 vertices and DimensionMismatchError for
    /// vertices outside [0, width] x [0, height].
    void validate(int width, int height) const;
    friend bool operator==(const RoiMask&, const RoiMask&) = default;
};

struct FrameLoad {
    std::vector<ThermalFrame> frames;
    std::vector<std::string> errors;    // one per malformed file
    std::vector<std::string> warnings;  // duplicate timestamps
    std::size_t skipped() const { return errors.size(); }
};

/// Reads `<stem>.csv` where the stem is the ISO-8601 timestamp.
/// Throws FormatError naming the offending line.
ThermalFrame read_frame_file(const std::filesystem::path& file, const std::string& scene_id);
void write_frame_file(const std::filesystem::path& file, const ThermalFrame& frame);
std::string frame_file_name(Instant t, UtcOffset offset);

/// Loads every frame CSV under `path/scene_id/`, or under `path` itself, or the
/// single file `path`. Sorted by timestamp, duplicates dropped (first kept).
/// Throws EmptyInputError when no valid frame was found.
FrameLoad load_frames(const std::filesystem::path& path, const std::string& scene_id);

std::vector<RoiMask> parse_rois(const std::string& json_text);
std::vector<RoiMask> read_roi_file(const std::filesystem::path& file);
std::string rois_to_json(const std::vector<RoiMask>& rois);

/// Indices (row-major) of pixels whose centers fall inside the polygon under
/// the even-odd rule. Throws EmptyRoiError when none do.
std::vector<std::size_t> rasterize(const RoiMask& mask, int width, int height);

enum class QualityReason { ok, low_contrast, saturated, out_of_family };
std::string_view to_string(QualityReason r);

struct QualityThresholds {
    double iqr_floor = 20.0;           // counts
    double saturation_low = 0.0;       // counts at or below are saturated
    double saturation_high = 65535.0;  // counts at or above are saturated
    double saturated_fraction = 0.01;
    double out_of_family_k = 5.0;
    double mad_floor = 50.0;  // counts; lower bound on the MAD of history means
    std::size_t history_length = 12;
    std::size_t min_history = 6;
    friend bool operator==(const QualityThresholds&, const QualityThresholds&) = default;
};

struct QualityVerdict {
    Instant timestamp;
    std::string scene_id;
    bool accepted = true;
    QualityReason reason = QualityReason::ok;
    double frame_mean = 0.0;
};

/// Rolling window of the means of recently accepted frames.
class FrameHistory {
public:
    explicit FrameHistory(std::size_t capacity = 12) : capacity_(capacity) {}
    void push(double frame_mean);
    std::vector<double> means() const { return {means_.begin(), means_.end()}; }
    std::size_t size() const { return means_.size(); }

private:
    std::size_t capacity_;
    std::deque<double> means_;
};

QualityVerdict quality_filter(const ThermalFrame& frame, const FrameHistory& history, const QualityThresholds& q);

/// Runs the filter over frames in timestamp order, feeding accepted frames
/// into the history.
std::vector<QualityVerdict> screen_frames(std::span<const ThermalFrame> frames, const QualityThresholds& q);

/// One sample per accepted frame: ROI mean of the per-pixel temperature.
/// Rejected frames become gap markers. Parallel over frames.
RawSeries extract_series(std::span<const ThermalFrame> frames, std::span<const QualityVerdict> verdicts,
                         const RoiMask& mask, const PlanckConstants& constants,
                         const RadiometricScene& scene = {}, PlanckSign sign = PlanckSign::plus_offset);

namespace reference {
RawSeries extract_series_serial(std::span<const ThermalFrame> frames, std::span<const QualityVerdict> verdicts,
                                const RoiMask& mask, const PlanckConstants& constants,
                                const RadiometricScene& scene = {}, PlanckSign sign = PlanckSign::plus_offset);
}  // namespace reference

}  // namespace irhvac
