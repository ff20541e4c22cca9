#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "irhvac/error.hpp"
#include "irhvac/report.hpp"

namespace irhvac {

namespace fs = std::filesystem;

void write_text(const fs::path& file, const std::string& text) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError(fmt::format("{}: cannot write", file.string()));
    out << text;
    if (!out) throw IoError(fmt::format("{}: write failed", file.string()));
}

std::string read_text(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError(fmt::format("{}: cannot open", file.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string series_to_csv(const TemperatureSeries& s, UtcOffset offset) {
    s.validate();
    std::string out = "timestamp,temperature_k,missing\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.available(i))
            fmt::format_to(std::back_inserter(out), "{},{},0\n", format_instant(s.time_at(i), offset), s.values[i]);
        else
            fmt::format_to(std::back_inserter(out), "{},,1\n", format_instant(s.time_at(i), offset));
    }
    return out;
}

void write_series_csv(const fs::path& file, const TemperatureSeries& s, UtcOffset offset) {
    write_text(file, series_to_csv(s, offset));
}

TemperatureSeries parse_series_csv(const std::string& text, const std::string& name, RoiLabel label) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("timestamp,temperature_k,missing", 0) != 0)
        throw FormatError(fmt::format("series '{}': expected header timestamp,temperature_k,missing", name));
    TemperatureSeries s;
    s.roi_name = name;
    s.label = label;
    std::vector<Instant> times;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw FormatError(fmt::format("series '{}' line {}: expected 3 fields", name, line_no));
        times.push_back(parse_instant(std::string_view(line).substr(0, c1)));
        const std::string_view value = std::string_view(line).substr(c1 + 1, c2 - c1 - 1);
        const std::string_view flag = std::string_view(line).substr(c2 + 1);
        if (flag == "1") {
            s.values.push_back(std::numeric_limits<double>::quiet_NaN());
            s.missing.push_back(true);
        } else if (flag == "0") {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec != std::errc{} || ptr != value.data() + value.size())
                throw FormatError(fmt::format("series '{}' line {}: bad temperature '{}'", name, line_no, value));
            s.values.push_back(v);
            s.missing.push_back(false);
        } else {
            throw FormatError(fmt::format("series '{}' line {}: missing flag must be 0 or 1", name, line_no));
        }
    }
    if (times.size() < 2) throw FormatError(fmt::format("series '{}': need at least 2 rows", name));
    s.start = times.front();
    s.step = times[1] - times[0];
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] - times[i - 1] != s.step || s.step <= 0)
            throw FormatError(fmt::format("series '{}': row {} breaks the uniform {} s grid", name, i + 2, s.step));
    return s;
}

TemperatureSeries read_series_csv(const fs::path& file, const std::string& name, RoiLabel label) {
    return parse_series_csv(read_text(file), name, label);
}

std::string slope_grid_to_csv(const SlopeGrid& g) {
    std::string out = "date";
    for (auto b : g.bin_starts) out += "," + format_time_of_day(b);
    out += "\n";
    for (std::size_t d = 0; d < g.rows(); ++d) {
        out += format_date(g.dates[d]);
        for (std::size_t b = 0; b < g.cols(); ++b) {
            out += ",";
            if (!g.is_missing(d, b)) fmt::format_to(std::back_inserter(out), "{:.6f}", g.at(d, b));
        }
        out += "\n";
    }
    return out;
}

std::string schedule_to_csv(const std::vector<ScheduleEvent>& events, const std::vector<Date>& dates,
                            UtcOffset offset) {
    std::string out = "date,switch_on,switch_off,on_score,off_score\n";
    for (Date d : dates) {
        std::string on, off, on_score, off_score;
        for (const auto& e : events) {
            if (local_date(e.instant, offset) != d) continue;
            const std::string when = format_time_of_day(local_seconds_of_day(e.instant, offset));
            const std::string score = fmt::format("{:.3f}", e.score);
            if (e.kind == EventKind::switch_on) {
                on = when;
                on_score = score;
            } else {
                off = when;
                off_score = score;
            }
        }
        fmt::format_to(std::back_inserter(out), "{},{},{},{},{}\n", format_date(d), on, off, on_score, off_score);
    }
    return out;
}

std::string cycling_to_csv(const std::vector<CyclingReport>& reports) {
    std::string out = "ac_name,date,cycling_fraction,samples_used\n";
    for (const auto& r : reports) {
        std::size_t total = 0;
        for (const auto& n : r.nights) {
            fmt::format_to(std::back_inserter(out), "{},{},{:.6f},{}\n", r.ac_name, format_date(n.date), n.fraction,
                           n.samples_used);
            total += n.samples_used;
        }
        fmt::format_to(std::back_inserter(out), "{},mean,{:.6f},{}\n", r.ac_name, r.overall_mean_fraction, total);
    }
    return out;
}

std::string accuracy_to_csv(const std::vector<AccuracyRow>& rows) {
    std::string out = "hour,accuracy,n\n";
    for (const auto& r : rows) fmt::format_to(std::back_inserter(out), "{},{:.6f},{}\n", r.hour, r.accuracy, r.n);
    return out;
}

std::string quality_log_to_csv(const std::vector<QualityVerdict>& verdicts, UtcOffset offset) {
    std::string out = "timestamp,scene_id,accepted,reason,frame_mean\n";
    for (const auto& v : verdicts)
        fmt::format_to(std::back_inserter(out), "{},{},{},{},{:.3f}\n", format_instant(v.timestamp, offset),
                       v.scene_id, v.accepted ? 1 : 0, to_string(v.reason), v.frame_mean);
    return out;
}

std::string scalogram_to_csv(const Scalogram& s, UtcOffset offset) {
    std::string out = "period_s";
    for (std::size_t t = 0; t < s.n_times; ++t) out += "," + format_instant(s.time_at(t), offset);
    out += "\n";
    for (std::size_t p = 0; p < s.periods.size(); ++p) {
        fmt::format_to(std::back_inserter(out), "{:.3f}", s.periods[p]);
        for (std::size_t t = 0; t < s.n_times; ++t) fmt::format_to(std::back_inserter(out), ",{:.9g}", s.at(p, t));
        out += "\n";
    }
    return out;
}

std::string scalogram_sidecar_json(const Scalogram& s) {
    nlohmann::json coi = nlohmann::json::array();
    for (std::size_t p = 0; p < s.periods.size(); ++p) {
        std::string row(s.n_times, '0');
        for (std::size_t t = 0; t < s.n_times; ++t)
            if (s.in_coi(p, t)) row[t] = '1';
        coi.push_back(row);
    }
    nlohmann::json doc = {{"wavelet", {{"family", "morlet"}, {"omega0", s.wavelet.omega0}}},
                          {"step_s", s.step},
                          {"n_times", s.n_times},
                          {"periods_s", s.periods},
                          {"cone_of_influence", coi}};
    return doc.dump(2) + "\n";
}

}  // namespace irhvac
