#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "irhvac/detect.hpp"
#include "irhvac/error.hpp"
#include "irhvac/synth.hpp"
#include "oracles.hpp"
#include "scoring.hpp"

using namespace irhvac;

namespace {

const UtcOffset sgt{8 * 3600};
const Instant monday = parse_instant("2023-03-06T00:00:00+08:00");

TemperatureSeries make(std::vector<double> v, std::int64_t step = 300, Instant start = monday) {
    return TemperatureSeries::from_values(start, step, std::move(v));
}

std::vector<State> upper_to_states(const std::vector<bool>& upper) {
    std::vector<State> s;
    for (bool u : upper) s.push_back(u ? State::on : State::off);
    return s;
}

long double wcss(const std::vector<double>& v, const std::vector<State>& st) {
    long double m[2] = {0, 0};
    std::size_t c[2] = {0, 0};
    for (std::size_t i = 0; i < v.size(); ++i) {
        const int k = st[i] == State::on;
        m[k] += v[i];
        ++c[k];
    }
    for (int k = 0; k < 2; ++k) m[k] /= c[k] ? c[k] : 1;
    long double e = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const int k = st[i] == State::on;
        e += (v[i] - m[k]) * (v[i] - m[k]);
    }
    return e;
}

ScenarioSpec ac_spec(std::size_t days, double duty_period, DailyInterval usage, std::uint64_t seed = 3) {
    ScenarioSpec s;
    s.days = days;
    s.seed = seed;
    AcUnitSpec ac;
    ac.name = "ac1";
    ac.duty_period = duty_period;
    ac.usage = {usage};
    s.ac_units.push_back(ac);
    AcUnitSpec idle;
    idle.name = "ac2";
    s.ac_units.push_back(idle);
    return s;
}

}  // namespace

// ------------------------------------------------------------ k-means

TEST_CASE("k-means on the symmetric two-cluster example") {
    const StateSeries s = kmeans2_states(make({0, 0, 0, 10, 10, 10, 0, 10}));
    CHECK(s.boundary == 5.0);
    CHECK(s.states == std::vector<State>{State::off, State::off, State::off, State::on, State::on, State::on,
                                         State::off, State::on});
    CHECK_FALSE(s.degenerate);
}

TEST_CASE("k-means degenerate and short inputs") {
    const StateSeries s = kmeans2_states(make(std::vector<double>(12, 3.0)));
    CHECK(s.degenerate);
    for (State x : s.states) CHECK(x == State::off);
    CHECK_THROWS_AS(kmeans2_states(make({1, 2, 3, 4, 5, 6, 7})), DegenerateError);
}

TEST_CASE("k-means leaves missing samples unknown") {
    TemperatureSeries t = make({0, 0, 0, 0, 9, 9, 9, 9, 5, 0});
    t.missing[8] = true;
    const StateSeries s = kmeans2_states(t);
    CHECK(s.states[8] == State::unknown);
    CHECK(s.states[9] == State::off);
    CHECK(s.states[4] == State::on);
}

TEST_CASE("k-means matches exhaustive splits on random inputs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(8, 120)(rng);
        std::vector<double> v(n);
        const double sep = std::uniform_real_distribution<double>(0.0, 5.0)(rng);
        std::normal_distribution<double> g(0.0, 1.0);
        for (double& x : v) x = g(rng) + (rng() % 2 ? sep : 0.0);
        if (trial % 5 == 0)
            for (double& x : v) x = std::round(x);  // ties
        const StateSeries s = kmeans2_states(make(v));
        const oracle::Split o = oracle::kmeans2(v);
        REQUIRE(s.states == upper_to_states(o.upper));
        REQUIRE(s.boundary == o.boundary);
        CHECK(std::abs(static_cast<double>(wcss(v, s.states) - o.wcss)) <= 1e-9 * (1.0 + static_cast<double>(o.wcss)));
    }
}

TEST_CASE("k-means partition is invariant to shift and positive scale") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(40);
        for (double& x : v) x = std::floor(u(rng) * 64.0) / 4.0;
        const StateSeries base = kmeans2_states(make(v));
        std::vector<double> shifted = v, scaled = v;
        for (double& x : shifted) x += 128.0;
        for (double& x : scaled) x *= 4.0;
        const StateSeries a = kmeans2_states(make(shifted)), b = kmeans2_states(make(scaled));
        CHECK(a.states == base.states);
        CHECK(b.states == base.states);
        if (!base.degenerate) {
            CHECK(a.boundary == base.boundary + 128.0);
            CHECK(b.boundary == base.boundary * 4.0);
        }
    }
}

TEST_CASE("indoor truth labels the cooler cluster on") {
    std::vector<double> room(30, 301.0);
    for (std::size_t i = 10; i < 20; ++i) room[i] = 296.0;
    const StateSeries s = truth_states_from_indoor(make(room));
    for (std::size_t i = 0; i < room.size(); ++i) CHECK((s.states[i] == State::on) == (i >= 10 && i < 20));
    CHECK(truth_states_from_indoor(make(std::vector<double>(30, 300.0))).degenerate);
}

// ------------------------------------------------------------ schedule

TEST_CASE("schedule events on a synthetic week") {
    ScenarioSpec spec = ScenarioSpec::canonical();
    spec.days = 14;
    spec.noise_sigma = 0.1;
    const ScenarioOutput out = generate(spec);
    const ScheduleDetection d = detect_schedule(out.window, out.wall);
    const auto score = scoring::score_schedule(d.events, out.truth.events, out.truth.idle_days, sgt, 1800);
    CHECK(score.recall() >= 0.95);
    CHECK(score.on_idle_days == 0);
    for (std::size_t i = 1; i < d.events.size(); ++i) CHECK(d.events[i - 1].instant < d.events[i].instant);
    for (const auto& e : d.events) CHECK(e.score > 0.0);

    // Saturday switches off at 18:00.
    bool saturday_off = false;
    for (const auto& e : d.events)
        if (weekday_index(local_date(e.instant, sgt)) == 5 && e.kind == EventKind::switch_off)
            saturday_off = saturday_off || std::abs(local_seconds_of_day(e.instant, sgt) - 18 * 3600) <= 1800;
    CHECK(saturday_off);
}

TEST_CASE("schedule finds nothing without HVAC") {
    ScenarioSpec spec;
    spec.days = 7;
    spec.noise_sigma = 0.0;
    const ScenarioOutput out = generate(spec);
    CHECK(detect_schedule(out.window, out.wall).events.empty());
}

TEST_CASE("schedule is invariant to a common affine trend") {
    ScenarioSpec spec = ScenarioSpec::canonical();
    spec.days = 7;
    const ScenarioOutput out = generate(spec);
    TemperatureSeries w = out.window, v = out.wall;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w.values[i] += 2.0 + 1e-5 * static_cast<double>(i) * 300.0;
        v.values[i] += 2.0 + 1e-5 * static_cast<double>(i) * 300.0;
    }
    const auto a = detect_schedule(out.window, out.wall).events, b = detect_schedule(w, v).events;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].instant == b[i].instant);
        CHECK(a[i].kind == b[i].kind);
    }
}

TEST_CASE("schedule errors") {
    const TemperatureSeries a = make(std::vector<double>(288, 1.0));
    const TemperatureSeries b = make(std::vector<double>(288, 1.0), 300, monday + 300);
    CHECK_THROWS_AS(detect_schedule(a, b), GridMismatchError);
    TemperatureSeries gappy = a;
    for (std::size_t i = 0; i < 270; ++i) gappy.missing[i] = true;
    CHECK_THROWS_AS(detect_schedule(gappy, a), DegenerateError);
}

// ------------------------------------------------------------ usage

TEST_CASE("usage interval brackets the daytime duty cycle") {
    const ScenarioSpec spec = ac_spec(4, 1440.0, {10 * 3600, 23 * 3600 + 20 * 60});
    const ScenarioOutput out = generate(spec);
    const UsageDetection d = detect_ac_usage(out.condensers[0]);
    REQUIRE(d.intervals.size() == out.truth.ac_usage[0].size());
    const std::int64_t err = scoring::worst_edge_error(d.intervals, out.truth.ac_usage[0]);
    CHECK(err >= 0);
    CHECK(err <= 15 * 60);
    CHECK(detect_ac_usage(out.condensers[1]).intervals.empty());
}

TEST_CASE("all-night 20-minute duty yields one interval covering the night") {
    ScenarioSpec spec = ac_spec(1, 1200.0, {20 * 3600, 6 * 3600});
    spec.start_date = parse_date("2023-03-06");
    spec.days = 2;
    const ScenarioOutput out = generate(spec);
    const auto nights = night_window(out.condensers[0], 20 * 3600, 6 * 3600, sgt);
    const NightSegment* full = nullptr;
    for (const auto& n : nights)
        if (!n.partial && !n.empty) full = &n;
    REQUIRE(full);
    const UsageDetection d = detect_ac_usage(out.condensers[0]);
    std::size_t covering = 0;
    for (const auto& u : d.intervals)
        if (u.start <= full->series.start + 900 && u.end >= full->series.end() - 900) ++covering;
    CHECK(covering == 1);
}

TEST_CASE("usage on pure noise and short series") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 0.1);
    std::vector<double> v(288 * 3);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 300.0 + 0.5 * std::sin(i * 0.02) + g(rng);
    CHECK(detect_ac_usage(make(v)).intervals.empty());
    CHECK_THROWS_AS(detect_ac_usage(make(std::vector<double>(40, 1.0))), TooShortError);
}

TEST_CASE("usage_to_states marks interval samples") {
    const StateSeries s = usage_to_states({{monday + 600, monday + 1500}}, monday, 300, 8);
    CHECK(s.states == std::vector<State>{State::off, State::off, State::on, State::on, State::on, State::off,
                                         State::off, State::off});
}

// ------------------------------------------------------------ cycling

namespace {

struct NightFixture {
    NightSegment night;
    StateSeries states;
    UsageDetection usage;
};

// 8-hour night at 300 s, alternating states every 2 samples inside [a, b).
NightFixture cycling_night(std::size_t a, std::size_t b) {
    NightFixture f;
    const Instant start = monday + 22 * 3600;
    f.night.date = parse_date("2023-03-06");
    f.night.series = make(std::vector<double>(96, 300.0), 300, start);
    f.states.start = start;
    f.states.step = 300;
    f.states.states.assign(96, State::off);
    for (std::size_t i = a; i < b; ++i) f.states.states[i] = (i / 2) % 2 ? State::on : State::off;
    f.usage.start = start;
    f.usage.step = 300;
    f.usage.fraction.assign(96, 0.0);
    f.usage.in_band.assign(96, false);
    if (b > a) f.usage.intervals.push_back({start + static_cast<std::int64_t>(a) * 300, start + static_cast<std::int64_t>(b) * 300});
    return f;
}

}  // namespace

TEST_CASE("cycling fraction fixtures") {
    auto two_hours = cycling_night(24, 48);
    CHECK(cycling_fraction(two_hours.states, two_hours.usage, two_hours.night).fraction == doctest::Approx(0.25));
    auto never = cycling_night(0, 0);
    CHECK(cycling_fraction(never.states, never.usage, never.night).fraction == 0.0);
    auto all = cycling_night(0, 96);
    CHECK(cycling_fraction(all.states, all.usage, all.night).fraction == 1.0);

    // In-band flags count even without alternation.
    auto flat = cycling_night(10, 20);
    for (std::size_t i = 10; i < 20; ++i) flat.states.states[i] = State::on;
    for (std::size_t i = 12; i < 16; ++i) flat.usage.in_band[i] = true;
    const double f = cycling_fraction(flat.states, flat.usage, flat.night).fraction;
    CHECK(f == doctest::Approx(8.0 / 96.0));  // 10, 11 see 8, 9; 12-15 flagged; 18, 19 see 20
}

TEST_CASE("extending usage never lowers the cycling fraction") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        auto f = cycling_night(0, 96);
        for (auto& s : f.states.states) s = rng() % 2 ? State::on : State::off;
        for (std::size_t i = 0; i < 96; ++i) f.usage.in_band[i] = rng() % 3 == 0;
        const std::int64_t a = static_cast<std::int64_t>(rng() % 48), b = a + static_cast<std::int64_t>(rng() % 48);
        f.usage.intervals = {{f.night.series.start + a * 300, f.night.series.start + b * 300}};
        const double before = cycling_fraction(f.states, f.usage, f.night).fraction;
        f.usage.intervals[0].end = f.usage.intervals[0].end + static_cast<std::int64_t>(rng() % 20) * 300;
        f.usage.intervals[0].start = f.usage.intervals[0].start - static_cast<std::int64_t>(rng() % 20) * 300;
        CHECK(cycling_fraction(f.states, f.usage, f.night).fraction >= before);
    }
}

TEST_CASE("cycling report over synthetic nights") {
    ScenarioSpec spec = ac_spec(5, 1440.0, {0, 2 * 3600});
    spec.step = 120;
    const ScenarioOutput out = generate(spec);
    CyclingParams p;
    p.night_start = 22 * 3600;
    p.night_end = 6 * 3600;
    const CyclingReport r = cycling_report(out.condensers[0], p);
    std::size_t used = 0;
    for (const auto& n : r.nights)
        if (n.samples_used) {
            ++used;
            CHECK(std::abs(n.fraction - 0.25) <= 0.05);
        }
    CHECK(used >= 3);
    CHECK(std::abs(r.overall_mean_fraction - 0.25) <= 0.02);
    const CyclingReport idle = cycling_report(out.condensers[1], p);
    CHECK(idle.overall_mean_fraction == 0.0);
}

TEST_CASE("cycling rejects misaligned states") {
    auto f = cycling_night(0, 10);
    f.states.start = f.states.start + 300;
    CHECK_THROWS_AS(cycling_fraction(f.states, f.usage, f.night), GridMismatchError);
}

// ------------------------------------------------------------ accuracy

TEST_CASE("accuracy by hour") {
    StateSeries truth;
    truth.start = monday;
    truth.step = 600;
    for (int i = 0; i < 144; ++i) truth.states.push_back(i % 3 ? State::on : State::off);
    StateSeries inverse = truth;
    for (auto& s : inverse.states) s = s == State::on ? State::off : State::on;
    const auto same = accuracy_by_hour(truth, truth, sgt);
    REQUIRE(same.size() == 24);
    for (const auto& r : same) {
        CHECK(r.accuracy == 1.0);
        CHECK(r.n == 6);
    }
    for (const auto& r : accuracy_by_hour(inverse, truth, sgt)) CHECK(r.accuracy == 0.0);

    StateSeries partial = truth;
    for (int i = 0; i < 6; ++i) partial.states[i] = State::unknown;  // hour 0 vanishes
    const auto rows = accuracy_by_hour(partial, truth, sgt);
    CHECK(rows.size() == 23);
    CHECK(rows.front().hour == 1);

    StateSeries shifted = truth;
    shifted.start = monday + 600;
    CHECK_THROWS_AS(accuracy_by_hour(shifted, truth, sgt), GridMismatchError);
}

TEST_CASE("bursts shorter than two slow-edge periods are not usage") {
    ScenarioSpec spec = ac_spec(2, 1440.0, {12 * 3600, 12 * 3600 + 40 * 60});
    spec.step = 120;
    const ScenarioOutput out = generate(spec);
    CHECK(detect_ac_usage(out.condensers[0]).intervals.empty());
    UsageParams p;
    p.min_cycles = 0.0;
    CHECK_FALSE(detect_ac_usage(out.condensers[0], p).intervals.empty());
}
