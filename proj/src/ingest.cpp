#include "irhvac/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "irhvac/error.hpp"

namespace irhvac {

namespace fs = std::filesystem;
using nlohmann::json;

void ThermalFrame::validate() const {
    if (width <= 0 || height <= 0)
        throw DimensionMismatchError(fmt::format("frame {}x{} must have positive size", width, height));
    if (counts.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw DimensionMismatchError(
            fmt::format("frame grid has {} values, expected {}x{}", counts.size(), width, height));
}

void RoiMask::validate(int width, int height) const {
    if (polygon.size() < 3)
        throw FormatError(fmt::format("roi '{}': polygon needs at least 3 vertices, has {}", name, polygon.size()));
    for (const auto& p : polygon) {
        if (!(p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height))
            throw DimensionMismatchError(
                fmt::format("roi '{}': vertex ({}, {}) outside {}x{} frame", name, p.x, p.y, width, height));
    }
}

// ---------------------------------------------------------------- frame files

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_count(std::string_view field, const fs::path& file, std::size_t line_no) {
    field = trim(field);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v))
        throw FormatError(fmt::format("{}:{}: bad count '{}'", file.string(), line_no, field));
    return v;
}

int parse_dim(std::string_view field, const fs::path& file) {
    field = trim(field);
    int v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || v <= 0)
        throw FormatError(fmt::format("{}:1: bad dimension '{}'", file.string(), field));
    return v;
}

}  // namespace

ThermalFrame read_frame_file(const fs::path& file, const std::string& scene_id) {
    ThermalFrame frame;
    frame.scene_id = scene_id;
    try {
        frame.timestamp = parse_instant(file.stem().string());
    } catch (const FormatError& e) {
        throw FormatError(fmt::format("{}: file name is not a timestamp ({})", file.string(), e.what()));
    }

    std::ifstream in(file);
    if (!in) throw FormatError(fmt::format("{}: cannot open", file.string()));

    std::string line;
    if (!std::getline(in, line)) throw FormatError(fmt::format("{}:1: empty file", file.string()));
    std::string_view header = trim(line);
    if (header.empty() || header.front() != '#')
        throw FormatError(fmt::format("{}:1: expected '# width,height' header", file.string()));
    header.remove_prefix(1);
    const auto comma = header.find(',');
    if (comma == std::string_view::npos)
        throw FormatError(fmt::format("{}:1: expected '# width,height' header", file.string()));
    frame.width = parse_dim(header.substr(0, comma), file);
    frame.height = parse_dim(header.substr(comma + 1), file);
    frame.counts.reserve(static_cast<std::size_t>(frame.width) * frame.height);

    std::size_t line_no = 1;
    int row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view rest = trim(line);
        if (rest.empty()) continue;
        if (row == frame.height)
            throw FormatError(fmt::format("{}:{}: more than {} rows", file.string(), line_no, frame.height));
        int n = 0;
        while (true) {
            const auto c = rest.find(',');
            frame.counts.push_back(parse_count(rest.substr(0, c), file, line_no));
            ++n;
            if (c == std::string_view::npos) break;
            rest.remove_prefix(c + 1);
        }
        if (n != frame.width)
            throw FormatError(fmt::format("{}:{}: row {} has {} values, expected {}", file.string(), line_no, row,
                                          n, frame.width));
        ++row;
    }
    if (row != frame.height)
        throw FormatError(fmt::format("{}: {} rows, expected {}", file.string(), row, frame.height));
    return frame;
}

void write_frame_file(const fs::path& file, const ThermalFrame& frame) {
    frame.validate();
    std::string out = fmt::format("# {},{}\n", frame.width, frame.height);
    out.reserve(out.size() + frame.counts.size() * 18);
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            if (x) out.push_back(',');
            // Shortest round-trip representation; integers print without a point.
            fmt::format_to(std::back_inserter(out), "{}", frame.at(x, y));
        }
        out.push_back('\n');
    }
    std::ofstream f(file, std::ios::binary);
    if (!f) throw IoError(fmt::format("{}: cannot write", file.string()));
    f << out;
}

std::string frame_file_name(Instant t, UtcOffset offset) { return format_instant(t, offset) + ".csv"; }

FrameLoad load_frames(const fs::path& path, const std::string& scene_id) {
    std::vector<fs::path> files;
    std::error_code ec;
    if (fs::is_directory(path / scene_id, ec)) {
        for (const auto& e : fs::directory_iterator(path / scene_id))
            if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    } else if (fs::is_directory(path, ec)) {
        for (const auto& e : fs::directory_iterator(path))
            if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    } else if (fs::is_regular_file(path, ec)) {
        files.push_back(path);
    } else {
        throw EmptyInputError(fmt::format("{}: no such frame file or directory", path.string()));
    }
    std::sort(files.begin(), files.end());

    FrameLoad load;
    for (const auto& f : files) {
        try {
            load.frames.push_back(read_frame_file(f, scene_id));
        } catch (const FormatError& e) {
            load.errors.emplace_back(e.what());
        }
    }
    std::stable_sort(load.frames.begin(), load.frames.end(),
                     [](const ThermalFrame& a, const ThermalFrame& b) { return a.timestamp < b.timestamp; });
    std::vector<ThermalFrame> unique;
    unique.reserve(load.frames.size());
    for (auto& fr : load.frames) {
        if (!unique.empty() && unique.back().timestamp == fr.timestamp) {
            load.warnings.push_back(
                fmt::format("scene '{}': duplicate frame at {} dropped", scene_id, fr.timestamp.seconds));
            continue;
        }
        unique.push_back(std::move(fr));
    }
    load.frames = std::move(unique);
    if (load.frames.empty())
        throw EmptyInputError(fmt::format("{}: no valid frames for scene '{}' ({} malformed)", path.string(),
                                          scene_id, load.errors.size()));
    return load;
}

// ---------------------------------------------------------------- ROI files

std::vector<RoiMask> parse_rois(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw FormatError(fmt::format("roi file: invalid JSON ({})", e.what()));
    }
    if (!doc.is_array()) throw FormatError("roi file: top level must be an array");

    std::vector<RoiMask> rois;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& o = doc[i];
        auto field = [&](const char* key) -> const json& {
            if (!o.is_object() || !o.contains(key))
                throw FormatError(fmt::format("roi file: entry {} missing field '{}'", i, key));
            return o.at(key);
        };
        auto string_field = [&](const char* key) {
            const json& v = field(key);
            if (!v.is_string()) throw FormatError(fmt::format("roi file: entry {} field '{}' must be a string", i, key));
            return v.get<std::string>();
        };
        RoiMask m;
        m.name = string_field("name");
        m.scene_id = string_field("scene_id");
        m.label = parse_roi_label(string_field("label"));
        const json& poly = field("polygon");
        if (!poly.is_array()) throw FormatError(fmt::format("roi file: entry {} field 'polygon' must be an array", i));
        for (const json& v : poly) {
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
                throw FormatError(fmt::format("roi file: entry {} field 'polygon' needs [x, y] pairs", i));
            m.polygon.push_back({v[0].get<double>(), v[1].get<double>()});
        }
        if (m.polygon.size() < 3)
            throw FormatError(fmt::format("roi file: entry {} field 'polygon' needs at least 3 vertices", i));
        rois.push_back(std::move(m));
    }
    return rois;
}

std::vector<RoiMask> read_roi_file(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError(fmt::format("{}: cannot open roi file", file.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_rois(ss.str());
}

std::string rois_to_json(const std::vector<RoiMask>& rois) {
    json doc = json::array();
    for (const auto& m : rois) {
        json poly = json::array();
        for (const auto& p : m.polygon) poly.push_back({p.x, p.y});
        doc.push_back({{"name", m.name}, {"scene_id", m.scene_id}, {"label", to_string(m.label)}, {"polygon", poly}});
    }
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------- rasterize

std::vector<std::size_t> rasterize(const RoiMask& mask, int width, int height) {
    mask.validate(width, height);
    const auto& poly = mask.polygon;
    const std::size_t nv = poly.size();

    std::vector<std::size_t> pixels;
    std::vector<double> crossings;
    for (int j = 0; j < height; ++j) {
        const double yc = j + 0.5;
        crossings.clear();
        for (std::size_t a = 0, b = nv - 1; a < nv; b = a++) {
            const PixelPoint& p = poly[a];
            const PixelPoint& q = poly[b];
            if ((p.y > yc) != (q.y > yc)) crossings.push_back((q.x - p.x) * (yc - p.y) / (q.y - p.y) + p.x);
        }
        std::sort(crossings.begin(), crossings.end());
        // Center xc is inside iff an odd number of crossings lie strictly right of it,
        // i.e. xc falls in [c0, c1), [c2, c3), ...
        for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
            const int first = std::max(0, static_cast<int>(std::ceil(crossings[k] - 0.5)));
            for (int i = first; i < width && i + 0.5 < crossings[k + 1]; ++i)
                pixels.push_back(static_cast<std::size_t>(j) * width + i);
        }
    }
    if (pixels.empty()) throw EmptyRoiError(fmt::format("roi '{}' covers no pixel center", mask.name));
    std::sort(pixels.begin(), pixels.end());
    return pixels;
}

// ---------------------------------------------------------------- quality filter

std::string_view to_string(QualityReason r) {
    switch (r) {
        case QualityReason::ok: return "ok";
        case QualityReason::low_contrast: return "low_contrast";
        case QualityReason::saturated: return "saturated";
        case QualityReason::out_of_family: return "out_of_family";
    }
    return "?";
}

void FrameHistory::push(double frame_mean) {
    means_.push_back(frame_mean);
    while (means_.size() > capacity_) means_.pop_front();
}

namespace {

double quantile_sorted(const std::vector<double>& v, double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, 0.5);
}

}  // namespace

QualityVerdict quality_filter(const ThermalFrame& frame, const FrameHistory& history, const QualityThresholds& q) {
    frame.validate();
    QualityVerdict v{frame.timestamp, frame.scene_id, true, QualityReason::ok, 0.0};

    std::vector<double> sorted = frame.counts;
    std::sort(sorted.begin(), sorted.end());
    v.frame_mean = std::accumulate(frame.counts.begin(), frame.counts.end(), 0.0) /
                   static_cast<double>(frame.counts.size());

    auto reject = [&](QualityReason r) {
        v.accepted = false;
        v.reason = r;
        return v;
    };

    if (quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25) < q.iqr_floor)
        return reject(QualityReason::low_contrast);

    const auto low_end = std::upper_bound(sorted.begin(), sorted.end(), q.saturation_low) - sorted.begin();
    const auto high_end = sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), q.saturation_high);
    if (static_cast<double>(low_end + high_end) > q.saturated_fraction * static_cast<double>(sorted.size()))
        return reject(QualityReason::saturated);

    if (history.size() >= q.min_history) {
        const std::vector<double> means = history.means();
        const double center = median_of(means);
        std::vector<double> dev(means.size());
        std::transform(means.begin(), means.end(), dev.begin(), [&](double m) { return std::abs(m - center); });
        const double mad = std::max(median_of(std::move(dev)), q.mad_floor);
        if (std::abs(v.frame_mean - center) > q.out_of_family_k * mad) return reject(QualityReason::out_of_family);
    }
    return v;
}

std::vector<QualityVerdict> screen_frames(std::span<const ThermalFrame> frames, const QualityThresholds& q) {
    FrameHistory history(q.history_length);
    std::vector<QualityVerdict> out;
    out.reserve(frames.size());
    // A long unbroken run of out-of-family frames means the scene
    // itself moved on; restart the history from that run instead of rejecting forever.
    std::vector<double> run;
    const std::size_t reset_after = std::max<std::size_t>(q.min_history, q.history_length / 2);
    for (const auto& f : frames) {
        out.push_back(quality_filter(f, history, q));
        const QualityVerdict& v = out.back();
        if (v.accepted) {
            history.push(v.frame_mean);
            run.clear();
        } else if (v.reason == QualityReason::out_of_family) {
            run.push_back(v.frame_mean);
            if (run.size() >= reset_after) {
                history = FrameHistory(q.history_length);
                for (double m : run) history.push(m);
                run.clear();
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------- extraction

namespace {

struct ExtractionPlan {
    std::vector<std::size_t> pixels;
};

ExtractionPlan plan_extraction(std::span<const ThermalFrame> frames, std::span<const QualityVerdict> verdicts,
                               const RoiMask& mask, const PlanckConstants& constants, const RadiometricScene& scene) {
    constants.validate();
    scene.validate();
    if (frames.empty()) throw EmptyInputError(fmt::format("roi '{}': no frames", mask.name));
    if (verdicts.size() != frames.size())
        throw DimensionMismatchError(
            fmt::format("{} verdicts for {} frames", verdicts.size(), frames.size()));
    const int w = frames.front().width, h = frames.front().height;
    for (const auto& f : frames) {
        f.validate();
        if (f.width != w || f.height != h)
            throw DimensionMismatchError(fmt::format("frame at {} is {}x{}, expected {}x{}", f.timestamp.seconds,
                                                     f.width, f.height, w, h));
        if (f.scene_id != mask.scene_id)
            throw DimensionMismatchError(
                fmt::format("frame scene '{}' does not match roi scene '{}'", f.scene_id, mask.scene_id));
    }
    if (std::none_of(verdicts.begin(), verdicts.end(), [](const QualityVerdict& v) { return v.accepted; }))
        throw EmptyInputError(fmt::format("roi '{}': every frame was rejected", mask.name));
    return {rasterize(mask, w, h)};
}

double roi_mean_kelvin(const ThermalFrame& f, const std::vector<std::size_t>& pixels, const PlanckConstants& c,
                       const RadiometricScene& scene, PlanckSign sign) {
    double sum = 0.0;
    for (std::size_t p : pixels) sum += counts_to_temperature(object_signal(f.counts[p], scene), c, sign);
    return sum / static_cast<double>(pixels.size());
}

RawSeries make_raw(const RoiMask& mask, std::size_t n) {
    RawSeries out;
    out.roi_name = mask.name;
    out.label = mask.label;
    out.samples.resize(n);
    return out;
}

}  // namespace

RawSeries extract_series(std::span<const ThermalFrame> frames, std::span<const QualityVerdict> verdicts,
                         const RoiMask& mask, const PlanckConstants& constants, const RadiometricScene& scene,
                         PlanckSign sign) {
    const ExtractionPlan plan = plan_extraction(frames, verdicts, mask, constants, scene);
    RawSeries out = make_raw(mask, frames.size());
    const auto n = static_cast<std::ptrdiff_t>(frames.size());
    std::vector<std::string> failures(frames.size());

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        RawSample& s = out.samples[i];
        s.time = frames[i].timestamp;
        if (!verdicts[i].accepted) {
            s.gap = true;
            s.kelvin = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        try {
            s.kelvin = roi_mean_kelvin(frames[i], plan.pixels, constants, scene, sign);
        } catch (const DomainError& e) {
            failures[i] = e.what();
        }
    }
    for (std::size_t i = 0; i < failures.size(); ++i)
        if (!failures[i].empty())
            throw DomainError(fmt::format("roi '{}', frame {}: {}", mask.name, frames[i].timestamp.seconds, failures[i]));
    return out;
}

namespace reference {

RawSeries extract_series_serial(std::span<const ThermalFrame> frames, std::span<const QualityVerdict> verdicts,
                                const RoiMask& mask, const PlanckConstants& constants, const RadiometricScene& scene,
                                PlanckSign sign) {
    const ExtractionPlan plan = plan_extraction(frames, verdicts, mask, constants, scene);
    RawSeries out = make_raw(mask, frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        RawSample& s = out.samples[i];
        s.time = frames[i].timestamp;
        if (!verdicts[i].accepted) {
            s.gap = true;
            s.kelvin = std::numeric_limits<double>::quiet_NaN();
        } else {
            s.kelvin = roi_mean_kelvin(frames[i], plan.pixels, constants, scene, sign);
        }
    }
    return out;
}

}  // namespace reference

}  // namespace irhvac
