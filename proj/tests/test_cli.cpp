#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include "irhvac/report.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string err;
};

Run run(const std::string& args, const fs::path& dir) {
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string(IRHVAC_CLI_PATH) + " " + args + " > " + (dir / "stdout.txt").string() +
                            " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = irhvac::read_text(err);
    return r;
}

void write(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("usage errors exit 1") {
    const auto dir = oracle::scratch_dir("cli_usage");
    CHECK(run("", dir).code == 1);
    CHECK(run("frobnicate", dir).code == 1);
    CHECK(run("extract --no-such-flag", dir).code == 1);
    CHECK(run("synth", dir).code == 1);  // --spec is required
}

TEST_CASE("empty frame directory exits 2") {
    const auto dir = oracle::scratch_dir("cli_empty");
    fs::create_directories(dir / "frames");
    write(dir / "rois.json", R"([{"name": "wall", "scene_id": "facade", "label": "wall",
                                  "polygon": [[0, 0], [4, 0], [4, 4], [0, 4]]}])");
    const Run r = run("extract --frames " + (dir / "frames").string() + " --rois " + (dir / "rois.json").string() +
                          " --out " + (dir / "out").string(),
                      dir);
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("bad ROI JSON exits 3 naming the field") {
    const auto dir = oracle::scratch_dir("cli_badroi");
    write(dir / "rois.json", R"([{"name": "wall", "scene_id": "facade", "label": "wall"}])");
    const Run r = run("extract --frames " + dir.string() + " --rois " + (dir / "rois.json").string() + " --out " +
                          (dir / "out").string(),
                      dir);
    CHECK(r.code == 3);
    CHECK(r.err.find("polygon") != std::string::npos);

    write(dir / "bad.json", R"({"thetaa": 1})");
    CHECK(run("schedule --config " + (dir / "bad.json").string(), dir).code == 3);
    write(dir / "spec.json", R"({"days": 0})");
    CHECK(run("synth --spec " + (dir / "spec.json").string() + " --out " + (dir / "s").string(), dir).code == 3);
}

TEST_CASE("schedule with less than one full day exits 4") {
    const auto dir = oracle::scratch_dir("cli_short");
    write(dir / "spec.json", R"({"days": 1, "start_date": "2023-03-06"})");
    REQUIRE(run("synth --spec " + (dir / "spec.json").string() + " --out " + (dir / "data").string(), dir).code == 0);
    const fs::path cfg = dir / "data" / "config.json";
    REQUIRE(run("extract --config " + cfg.string(), dir).code == 0);
    // Drop the last half day of series so no whole local day remains.
    for (const char* name : {"wall", "window"}) {
        const fs::path p = dir / "data" / "report" / "series" / (std::string(name) + ".csv");
        const std::string text = irhvac::read_text(p);
        std::size_t pos = 0;
        for (int line = 0; line < 1 + 144; ++line) pos = text.find('\n', pos) + 1;
        irhvac::write_text(p, text.substr(0, pos));
    }
    const Run r = run("schedule --config " + cfg.string(), dir);
    CHECK(r.code == 4);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("acreport without ac units exits 4") {
    const auto dir = oracle::scratch_dir("cli_noac");
    write(dir / "spec.json", R"({"days": 2})");
    REQUIRE(run("synth --spec " + (dir / "spec.json").string() + " --out " + (dir / "data").string(), dir).code == 0);
    const fs::path cfg = dir / "data" / "config.json";
    REQUIRE(run("extract --config " + cfg.string(), dir).code == 0);
    CHECK(run("acreport --config " + cfg.string(), dir).code == 4);
}

TEST_CASE("missing config file exits 6") {
    const auto dir = oracle::scratch_dir("cli_io");
    CHECK(run("schedule --config " + (dir / "nope.json").string(), dir).code == 6);
}

TEST_CASE("full run writes every report") {
    const auto dir = oracle::scratch_dir("cli_full");
    write(dir / "spec.json", R"({"days": 3, "step": 300,
        "hvac": {"mon": {"on": "06:00", "off": "22:00"}, "tue": {"on": "06:00", "off": "22:00"},
                 "wed": {"on": "06:00", "off": "22:00"}},
        "ac_units": [{"name": "ac2"},
                     {"name": "ac1", "duty_period": 1440, "usage": [{"start": "21:00", "end": "03:00"}]}]})");
    // The first unit cools the room; keeping it idle leaves the plant schedule alone.
    REQUIRE(run("synth --spec " + (dir / "spec.json").string() + " --out " + (dir / "data").string(), dir).code == 0);
    const fs::path data = dir / "data";
    for (const char* f : {"rois.json", "scenario.json", "config.json", "truth/labels.json", "truth/indoor.csv"})
        CHECK(fs::exists(data / f));
    const fs::path cfg = data / "config.json";
    CHECK(run("extract --config " + cfg.string(), dir).code == 0);
    CHECK(run("schedule --deterministic --config " + cfg.string(), dir).code == 0);
    CHECK(run("acreport --deterministic --config " + cfg.string(), dir).code == 0);
    const fs::path rep = data / "report";
    for (const char* f : {"series/wall.csv", "series/window.csv", "series/ac1.csv", "series/ac2.csv",
                          "quality_log.csv", "schedule.csv", "slopes.csv", "slopes.svg", "cycling.csv", "cycling.svg",
                          "accuracy.csv", "ac1_usage.csv", "ac1_scalogram.csv", "ac1_scalogram.json"})
        CHECK_MESSAGE(fs::exists(rep / f), f);
    const std::string schedule = irhvac::read_text(rep / "schedule.csv");
    CHECK(schedule.find("2023-03-06,06:00,22:00") != std::string::npos);
    const std::string cycling = irhvac::read_text(rep / "cycling.csv");
    CHECK(cycling.find("ac2,mean,0.000000") != std::string::npos);

    // Flags override the file.
    CHECK(run("schedule --deterministic --config " + cfg.string() + " --out " + (dir / "alt").string() +
                  " --series " + (rep / "series").string() + " --k-mad 6",
              dir)
              .code == 0);
    CHECK(fs::exists(dir / "alt" / "schedule.csv"));
}
