#include <doctest.h>

#include <fstream>

#include "irhvac/config.hpp"
#include "irhvac/error.hpp"
#include "oracles.hpp"

using namespace irhvac;

TEST_CASE("defaults equal the module defaults") {
    const RunConfig c = parse_config("{}");
    CHECK(c == RunConfig{});
    CHECK(c.planck == PlanckConstants::reference_camera());
    CHECK(c.band == FrequencyBand{});
    CHECK(c.quality == QualityThresholds{});
    const ScheduleParams sp = c.schedule_params();
    const ScheduleParams sd;
    CHECK(sp.bin == sd.bin);
    CHECK(sp.k_mad == sd.k_mad);
    CHECK(sp.spread_floor == sd.spread_floor);
    CHECK(sp.scope == sd.scope);
    const UsageParams up = c.usage_params();
    const UsageParams ud;
    CHECK(up.theta == ud.theta);
    CHECK(up.min_amplitude == ud.min_amplitude);
    CHECK(up.min_cycles == ud.min_cycles);
    CHECK(up.period_min == ud.period_min);
    CHECK(up.period_max == ud.period_max);
    CHECK(up.period_count == ud.period_count);
    CHECK(up.closing == ud.closing);
    CHECK(up.wavelet.omega0 == ud.wavelet.omega0);
    const CyclingParams cp = c.cycling_params();
    CHECK(cp.night_start == 20 * 3600);
    CHECK(cp.night_end == 10 * 3600);
    CHECK(c.series_dir() == std::filesystem::path("out") / "series");
}

TEST_CASE("config round-trips losslessly") {
    RunConfig c;
    c.frames = "frames";
    c.rois = "rois.json";
    c.ground_truth = "truth/indoor.csv";
    c.output = "report";
    c.planck.o = -6000.5;
    c.planck_sign = PlanckSign::minus_offset;
    c.scene.emissivity = 0.93;
    c.step = 120;
    c.detrend_scope = DetrendScope::whole;
    c.band = {0.0004, 0.0012};
    c.k_mad = 3.5;
    c.theta = 0.3;
    c.min_cycles = 3.0;
    c.night_start = 22 * 3600;
    c.night_end = 6 * 3600 + 1800;
    c.utc_offset = UtcOffset{-(3 * 3600 + 1800)};
    c.quality.mad_floor = 40.0;
    c.window_roi = "w";
    c.accuracy_ac = "ac3";
    CHECK(parse_config(config_to_json(c)) == c);
    CHECK(parse_config(config_to_json(RunConfig{})) == RunConfig{});
}

TEST_CASE("config rejects unknown keys and bad values") {
    CHECK_THROWS_AS(parse_config(R"({"thetaa": 0.3})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"quality": {"bogus": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"planck_sign": "sideways"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"detrend_scope": "weekly"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"step": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"theta": 1.5})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"band": {"low": 0.002, "high": 0.001}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"night_start": "25:00"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"k_mad": "four"})"), ConfigError);
    try {
        parse_config(R"({"thetaa": 0.3})");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("thetaa") != std::string::npos);
    }
}

TEST_CASE("load_config resolves relative paths against the file") {
    const auto dir = oracle::scratch_dir("config_load");
    std::ofstream(dir / "run.json") << R"({"frames": "frames", "rois": "/abs/rois.json", "output": "report"})";
    const RunConfig c = load_config(dir / "run.json");
    CHECK(c.frames == dir / "frames");
    CHECK(c.rois == std::filesystem::path("/abs/rois.json"));
    CHECK(c.output == dir / "report");
    CHECK(c.ground_truth.empty());
    CHECK_THROWS_AS(load_config(dir / "missing.json"), IoError);
}
