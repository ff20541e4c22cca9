#include "irhvac/detect.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "irhvac/error.hpp"

namespace irhvac {

namespace {

double median_inplace(std::vector<double>& v) {
    const std::size_t n = v.size();
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n / 2), v.end());
    const double upper = v[n / 2];
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n / 2));
    return 0.5 * (lower + upper);
}

constexpr double mad_to_sigma = 1.4826;

}  // namespace

// ------------------------------------------------------------ schedule

ScheduleDetection detect_schedule(const TemperatureSeries& window, const TemperatureSeries& wall,
                                  const ScheduleParams& params) {
    window.validate();
    wall.validate();
    if (!window.same_grid(wall))
        throw GridMismatchError(
            fmt::format("window '{}' and wall '{}' series are on different grids", window.roi_name, wall.roi_name));

    const TemperatureSeries diff = difference(window, wall);
    const TemperatureSeries flat =
        params.scope == DetrendScope::per_day ? detrend_per_day(diff, params.offset) : detrend(diff);

    ScheduleDetection out;
    out.grid = interval_slopes(flat, params.bin, params.offset);
    const SlopeGrid& g = out.grid;

    for (std::size_t d = 0; d < g.rows(); ++d) {
        std::vector<double> usable;
        for (std::size_t b = 0; b < g.cols(); ++b)
            if (!g.is_missing(d, b)) usable.push_back(g.at(d, b));
        if (usable.size() < 4)
            throw DegenerateError(fmt::format("schedule: {} has {} usable slope bins, need 4",
                                              format_date(g.dates[d]), usable.size()));
        const double median = median_inplace(usable);
        std::vector<double> dev(usable.size());
        std::transform(usable.begin(), usable.end(), dev.begin(), [&](double s) { return std::abs(s - median); });
        const double spread = std::max(mad_to_sigma * median_inplace(dev), params.spread_floor);
        const double limit = params.k_mad * spread;

        std::optional<ScheduleEvent> best_on, best_off;
        bool prev_on = false, prev_off = false;
        for (std::size_t b = 0; b < g.cols(); ++b) {
            const bool missing = g.is_missing(d, b);
            const double s = missing ? 0.0 : g.at(d, b);
            const bool on = !missing && s < median - limit;
            const bool off = !missing && s > median + limit;
            const Instant at = local_midnight(g.dates[d], params.offset) + g.bin_starts[b];
            const double score = std::abs(s - median) / spread;
            if (on && !prev_on && (!best_on || score > best_on->score))
                best_on = ScheduleEvent{at, EventKind::switch_on, score};
            if (off && !prev_off && (!best_off || score > best_off->score))
                best_off = ScheduleEvent{at, EventKind::switch_off, score};
            prev_on = on;
            prev_off = off;
        }
        if (best_on) out.events.push_back(*best_on);
        if (best_off) out.events.push_back(*best_off);
    }
    std::stable_sort(out.events.begin(), out.events.end(),
                     [](const ScheduleEvent& a, const ScheduleEvent& b) { return a.instant < b.instant; });
    return out;
}

// ------------------------------------------------------------ k-means

StateSeries kmeans2_states(const TemperatureSeries& segment, OnCluster polarity) {
    segment.validate();
    StateSeries out;
    out.start = segment.start;
    out.step = segment.step;
    out.states.assign(segment.size(), State::unknown);

    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < segment.size(); ++i)
        if (segment.available(i)) idx.push_back(i);
    const std::size_t n = idx.size();
    if (n < 8)
        throw DegenerateError(
            fmt::format("kmeans2: series '{}' has {} available samples, need 8", segment.roi_name, n));

    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return segment.values[a] < segment.values[b]; });
    const double lo = segment.values[idx.front()], hi = segment.values[idx.back()];
    if (lo == hi) {
        for (std::size_t i : idx) out.states[i] = State::off;
        out.boundary = lo;
        out.degenerate = true;
        return out;
    }

    double mean = 0.0;
    for (std::size_t i : idx) mean += segment.values[i];
    mean /= static_cast<double>(n);

    // Prefix sums of centered values and their squares in sorted order.
    std::vector<double> s(n + 1, 0.0), q(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double y = segment.values[idx[k]] - mean;
        s[k + 1] = s[k] + y;
        q[k + 1] = q[k] + y * y;
    }
    std::size_t split = 0;  // last index of the lower cluster
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const auto n1 = static_cast<double>(k + 1), n2 = static_cast<double>(n - k - 1);
        const double s2 = s[n] - s[k + 1];
        const double sse = (q[k + 1] - s[k + 1] * s[k + 1] / n1) + ((q[n] - q[k + 1]) - s2 * s2 / n2);
        if (sse < best) {
            best = sse;
            split = k;
        }
    }
    out.boundary = 0.5 * (segment.values[idx[split]] + segment.values[idx[split + 1]]);
    const State lower = polarity == OnCluster::higher_mean ? State::off : State::on;
    const State upper = polarity == OnCluster::higher_mean ? State::on : State::off;
    for (std::size_t k = 0; k < n; ++k) out.states[idx[k]] = k <= split ? lower : upper;
    return out;
}

StateSeries truth_states_from_indoor(const TemperatureSeries& indoor) {
    return kmeans2_states(indoor, OnCluster::lower_mean);
}

// ------------------------------------------------------------ AC usage

bool UsageDetection::in_usage(Instant t) const {
    return std::any_of(intervals.begin(), intervals.end(),
                       [&](const UsageInterval& u) { return t >= u.start && t < u.end; });
}

namespace {

// Fills false runs of length <= max_gap that sit between true values.
void close_gaps(std::vector<bool>& flags, std::size_t max_gap) {
    std::size_t i = 0;
    const std::size_t n = flags.size();
    while (i < n && !flags[i]) ++i;
    while (i < n) {
        std::size_t j = i;
        while (j < n && flags[j]) ++j;
        std::size_t k = j;
        while (k < n && !flags[k]) ++k;
        if (k < n && k - j <= max_gap) std::fill(flags.begin() + static_cast<std::ptrdiff_t>(j),
                                                 flags.begin() + static_cast<std::ptrdiff_t>(k), true);
        i = k;
    }
}

}  // namespace

UsageDetection detect_ac_usage(const TemperatureSeries& ac, const UsageParams& params) {
    ac.validate();
    params.band.validate();
    const std::int64_t span = static_cast<std::int64_t>(ac.size()) * ac.step;
    if (span < 4 * 3600)
        throw TooShortError(fmt::format("ac usage: series '{}' spans {} s, need at least 4 h", ac.roi_name, span));

    const std::vector<double> periods = clip_periods(
        log_period_grid(params.period_min, params.period_max, params.period_count), ac.step, ac.size());
    const Scalogram raw = cwt(ac, periods, params.wavelet);
    const Scalogram cleaned = cwt(bandpass_clean(ac, params.band), periods, params.wavelet);
    const std::vector<std::size_t> rows = band_rows(raw, params.band);
    const std::vector<double> amplitude = band_envelope(ac, params.band);
    std::vector<bool> in_band_row(periods.size(), false);
    for (std::size_t r : rows) in_band_row[r] = true;

    UsageDetection out;
    out.start = ac.start;
    out.step = ac.step;
    const std::size_t n = raw.n_times;
    out.fraction.assign(n, 0.0);
    out.in_band.assign(n, false);

    for (std::size_t t = 0; t < n; ++t) {
        double clean_in = 0.0, raw_total = 0.0;
        bool coi = false;
        for (std::size_t p = 0; p < periods.size(); ++p) {
            const double e = raw.at(p, t) * raw.at(p, t);
            raw_total += e;
            if (!in_band_row[p]) continue;
            clean_in += cleaned.at(p, t) * cleaned.at(p, t);
            coi = coi || raw.in_coi(p, t);
        }
        out.fraction[t] = raw_total > 0.0 ? std::min(1.0, clean_in / raw_total) : 0.0;
        out.in_band[t] = !coi && out.fraction[t] > params.theta && amplitude[t] >= params.min_amplitude;
    }

    std::vector<bool> usage = out.in_band;
    close_gaps(usage, params.closing);

    // Columns outside the cone of influence bound every interval.
    std::size_t valid_lo = n, valid_hi = 0;
    for (std::size_t t = 0; t < n; ++t) {
        bool coi = false;
        for (std::size_t r : rows) coi = coi || raw.in_coi(r, t);
        if (!coi) {
            valid_lo = std::min(valid_lo, t);
            valid_hi = std::max(valid_hi, t + 1);
        }
    }

    std::vector<std::pair<std::size_t, std::size_t>> runs;  // [first, last)
    for (std::size_t t = 0; t < n;) {
        if (!usage[t]) {
            ++t;
            continue;
        }
        std::size_t e = t;
        while (e < n && usage[e]) ++e;
        runs.emplace_back(t, e);
        t = e;
    }

    if (params.refine_edges) {
        for (std::size_t r = 0; r < runs.size(); ++r) {
            auto& [first, last] = runs[r];
            std::vector<double> level(amplitude.begin() + static_cast<std::ptrdiff_t>(first),
                                      amplitude.begin() + static_cast<std::ptrdiff_t>(last));
            const double half = 0.5 * median_inplace(level);
            const std::size_t lo_bound = std::max(valid_lo, r > 0 ? runs[r - 1].second : std::size_t{0});
            const std::size_t hi_bound = std::min(valid_hi, r + 1 < runs.size() ? runs[r + 1].first : n);
            while (first > lo_bound && amplitude[first - 1] >= half) --first;
            while (first + 1 < last && amplitude[first] < half) ++first;
            while (last < hi_bound && amplitude[last] >= half) ++last;
            while (last > first + 1 && amplitude[last - 1] < half) --last;
        }
    }

    // Refined neighbours can end up touching; intervals stay maximal.
    std::vector<UsageInterval> merged;
    for (const auto& [first, last] : runs) {
        if (!merged.empty() && merged.back().end >= ac.time_at(first))
            merged.back().end = std::max(merged.back().end, ac.time_at(last));
        else
            merged.push_back({ac.time_at(first), ac.time_at(last)});
    }
    const double min_span = params.min_cycles / params.band.low;
    for (const auto& u : merged)
        if (static_cast<double>(u.end - u.start) >= min_span) out.intervals.push_back(u);
    return out;
}

StateSeries usage_to_states(const std::vector<UsageInterval>& intervals, Instant start, std::int64_t step,
                            std::size_t n) {
    StateSeries out;
    out.start = start;
    out.step = step;
    out.states.assign(n, State::off);
    for (std::size_t i = 0; i < n; ++i) {
        const Instant t = out.time_at(i);
        for (const auto& u : intervals)
            if (t >= u.start && t < u.end) out.states[i] = State::on;
    }
    return out;
}

// ------------------------------------------------------------ cycling

NightCycling cycling_fraction(const StateSeries& states, const UsageDetection& usage, const NightSegment& night) {
    const TemperatureSeries& s = night.series;
    if (states.size() != s.size() || states.start != s.start || states.step != s.step)
        throw GridMismatchError("cycling_fraction: states are not aligned to the night segment");

    NightCycling out;
    out.date = night.date;
    out.samples_used = s.count_available();
    if (out.samples_used == 0 || usage.intervals.empty()) return out;

    std::size_t cycling = 0;
    const auto n = static_cast<std::ptrdiff_t>(s.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        if (!s.available(i)) continue;
        const Instant t = s.time_at(i);
        if (!usage.in_usage(t)) continue;
        bool seen_on = false, seen_off = false;
        for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(0, i - 2); k <= std::min(n - 1, i + 2); ++k) {
            seen_on = seen_on || states.states[k] == State::on;
            seen_off = seen_off || states.states[k] == State::off;
        }
        bool flagged = false;
        if (usage.step > 0 && t >= usage.start) {
            const auto j = static_cast<std::size_t>((t - usage.start) / usage.step);
            flagged = j < usage.in_band.size() && usage.in_band[j];
        }
        if ((seen_on && seen_off) || flagged) ++cycling;
    }
    out.fraction = static_cast<double>(cycling) / static_cast<double>(out.samples_used);
    return out;
}

double overall_mean_fraction(const std::vector<NightCycling>& nights) {
    double sum = 0.0;
    std::size_t used = 0;
    for (const auto& n : nights) {
        if (n.samples_used == 0) continue;
        sum += n.fraction;
        ++used;
    }
    return used ? sum / static_cast<double>(used) : 0.0;
}

CyclingReport cycling_report(const TemperatureSeries& ac, const CyclingParams& params) {
    CyclingReport report;
    report.ac_name = ac.roi_name;
    const UsageDetection usage = detect_ac_usage(ac, params.usage);
    for (const NightSegment& night : night_window(ac, params.night_start, params.night_end, params.offset)) {
        if (night.partial) continue;
        NightCycling row;
        row.date = night.date;
        if (night.series.count_available() >= 8) {
            const StateSeries states = kmeans2_states(night.series, OnCluster::higher_mean);
            row = cycling_fraction(states, usage, night);
        }
        report.nights.push_back(row);
    }
    report.overall_mean_fraction = overall_mean_fraction(report.nights);
    return report;
}

// ------------------------------------------------------------ accuracy

std::vector<AccuracyRow> accuracy_by_hour(const StateSeries& predicted, const StateSeries& truth, UtcOffset offset) {
    if (predicted.start != truth.start || predicted.step != truth.step || predicted.size() != truth.size())
        throw GridMismatchError("accuracy_by_hour: predicted and truth states are on different grids");
    std::array<std::size_t, 24> hits{}, total{};
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const State p = predicted.states[i], t = truth.states[i];
        if (p == State::unknown || t == State::unknown) continue;
        const auto h = static_cast<std::size_t>(local_seconds_of_day(predicted.time_at(i), offset) / 3600);
        ++total[h];
        if (p == t) ++hits[h];
    }
    std::vector<AccuracyRow> rows;
    for (int h = 0; h < 24; ++h)
        if (total[h] > 0)
            rows.push_back({h, static_cast<double>(hits[h]) / static_cast<double>(total[h]), total[h]});
    return rows;
}

}  // namespace irhvac
