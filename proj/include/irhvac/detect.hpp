#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "irhvac/series.hpp"
#include "irhvac/spectral.hpp"

namespace irhvac {

// ------------------------------------------------------------ centralized HVAC

enum class EventKind { switch_on, switch_off };

struct ScheduleEvent {
    Instant instant;
    EventKind kind = EventKind::switch_on;
    double score = 0.0;  // |slope - median| / spread
};

enum class DetrendScope { whole, per_day };

struct ScheduleParams {
    std::int64_t bin = 1800;
    double k_mad = 4.0;
    /// Lower bound (K/h) on the robust slope spread, so near-noiseless days
    /// do not turn smooth solar curvature into events.
    double spread_floor = 0.25;
    DetrendScope scope = DetrendScope::per_day;
    UtcOffset offset{8 * 3600};
};

struct ScheduleDetection {
    std::vector<ScheduleEvent> events;  // time-ordered
    SlopeGrid grid;
};

/// Schedule events from window-minus-wall slope outliers. A bin is a candidate
/// switch_on when its slope drops below median - k_mad * spread (switch_off:
/// above median + k_mad * spread) and the previous bin was not a candidate of
/// the same kind. The strongest on and off per day are kept.
/// spread = max(1.4826 * MAD, spread_floor).
/// Throws GridMismatchError, or DegenerateError when a day has < 4 usable bins.
ScheduleDetection detect_schedule(const TemperatureSeries& window, const TemperatureSeries& wall,
                                  const ScheduleParams& params = {});

// ------------------------------------------------------------ on/off states

enum class State : std::uint8_t { off, on, unknown };

struct StateSeries {
    Instant start;
    std::int64_t step = 0;
    std::vector<State> states;
    double boundary = std::numeric_limits<double>::quiet_NaN();  // kelvin
    bool degenerate = false;

    std::size_t size() const { return states.size(); }
    Instant time_at(std::size_t i) const { return start + static_cast<std::int64_t>(i) * step; }
};

/// Which of the two clusters means "running".
enum class OnCluster { higher_mean, lower_mean };

/// Exact univariate 2-means over the available samples: every split of the
/// sorted values is scored and the minimum within-cluster sum of squares wins
/// (earliest split on ties). Needs >= 8 available samples (DegenerateError).
/// All-equal input yields all-off with `degenerate` set.
StateSeries kmeans2_states(const TemperatureSeries& segment, OnCluster polarity = OnCluster::higher_mean);

/// Indoor air cools while a unit runs, so the lower cluster is "on".
StateSeries truth_states_from_indoor(const TemperatureSeries& indoor);

// ------------------------------------------------------------ window AC units

struct UsageInterval {
    Instant start;
    Instant end;  // exclusive
    friend bool operator==(const UsageInterval&, const UsageInterval&) = default;
};

struct UsageParams {
    FrequencyBand band;
    double theta = 0.35;
    /// Kelvin; the band-limited envelope must reach this for a column to count,
    /// so sensor noise (whose in-band share hovers near theta) is not read as usage.
    double min_amplitude = 0.4;
    /// Intervals shorter than this many periods of the band's slowest edge
    /// (1 / band.low) are dropped; a duty cycle needs repeats to be one.
    double min_cycles = 2.0;
    MorletWavelet wavelet;
    double period_min = 240.0;
    double period_max = 15360.0;
    std::size_t period_count = 48;
    std::size_t closing = 2;   // fill false runs of at most this many columns
    bool refine_edges = true;  // move interval edges to the half-amplitude point
};

struct UsageDetection {
    Instant start;
    std::int64_t step = 0;
    std::vector<double> fraction;  // per column
    std::vector<bool> in_band;     // fraction > theta, outside the cone of influence
    std::vector<UsageInterval> intervals;

    std::size_t size() const { return fraction.size(); }
    bool in_usage(Instant t) const;
};

/// Time intervals during which the duty-cycle band dominates the scalogram.
/// Throws TooShortError for series spanning < 4 h.
UsageDetection detect_ac_usage(const TemperatureSeries& ac, const UsageParams& params = {});

StateSeries usage_to_states(const std::vector<UsageInterval>& intervals, Instant start, std::int64_t step,
                            std::size_t n);

// ------------------------------------------------------------ cycling

struct NightCycling {
    Date date;
    double fraction = 0.0;
    std::size_t samples_used = 0;
};

/// Fraction of the night's available samples spent cycling. A sample cycles
/// when it lies in a usage interval and either its state alternates within
/// +/- 2 samples or its in-band flag is set. `states` must be aligned to
/// `night.series`.
NightCycling cycling_fraction(const StateSeries& states, const UsageDetection& usage, const NightSegment& night);

struct CyclingReport {
    std::string ac_name;
    std::vector<NightCycling> nights;
    double overall_mean_fraction = 0.0;  // over nights with samples_used > 0
};

struct CyclingParams {
    UsageParams usage;
    std::int64_t night_start = 20 * 3600;
    std::int64_t night_end = 10 * 3600;
    UtcOffset offset{8 * 3600};
};

/// Usage detection over the full series, then per-night states and fractions.
CyclingReport cycling_report(const TemperatureSeries& ac, const CyclingParams& params = {});

double overall_mean_fraction(const std::vector<NightCycling>& nights);

// ------------------------------------------------------------ accuracy

struct AccuracyRow {
    int hour = 0;
    double accuracy = 0.0;
    std::size_t n = 0;
};

/// Per local hour, fraction of aligned known samples on which the two agree.
/// Hours with no comparable samples are omitted.
std::vector<AccuracyRow> accuracy_by_hour(const StateSeries& predicted, const StateSeries& truth, UtcOffset offset);

}  // namespace irhvac
