#pragma once

// Matching of detections against synth ground truth, shared by the unit and
// acceptance suites.

#include <cstdint>
#include <algorithm>
#include <cstdlib>
#include <vector>

#include "irhvac/detect.hpp"

namespace scoring {

struct ScheduleScore {
    std::size_t truth = 0;
    std::size_t matched = 0;
    std::size_t on_idle_days = 0;  // detections on days without HVAC
    double recall() const { return truth ? static_cast<double>(matched) / static_cast<double>(truth) : 1.0; }
};

inline ScheduleScore score_schedule(const std::vector<irhvac::ScheduleEvent>& found,
                                    const std::vector<irhvac::ScheduleEvent>& truth,
                                    const std::vector<irhvac::Date>& idle_days, irhvac::UtcOffset offset,
                                    std::int64_t tolerance) {
    ScheduleScore s;
    s.truth = truth.size();
    std::vector<bool> used(found.size(), false);
    for (const auto& t : truth)
        for (std::size_t i = 0; i < found.size(); ++i) {
            if (used[i] || found[i].kind != t.kind) continue;
            if (std::abs(found[i].instant - t.instant) <= tolerance) {
                used[i] = true;
                ++s.matched;
                break;
            }
        }
    for (const auto& f : found)
        for (const auto& d : idle_days)
            if (irhvac::local_date(f.instant, offset) == d) ++s.on_idle_days;
    return s;
}

// Largest edge error (seconds) pairing each truth interval with the detected
// interval that overlaps it most; -1 when some truth interval has no partner.
inline std::int64_t worst_edge_error(const std::vector<irhvac::UsageInterval>& found,
                                     const std::vector<irhvac::UsageInterval>& truth) {
    std::int64_t worst = 0;
    for (const auto& t : truth) {
        const irhvac::UsageInterval* best = nullptr;
        std::int64_t best_overlap = 0;
        for (const auto& f : found) {
            const std::int64_t o = std::min(f.end, t.end) - std::max(f.start, t.start);
            if (o > best_overlap) {
                best_overlap = o;
                best = &f;
            }
        }
        if (!best) return -1;
        worst = std::max({worst, std::abs(best->start - t.start), std::abs(best->end - t.end)});
    }
    return worst;
}

}  // namespace scoring
