#include <doctest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cmath>
#include <cstring>
#include <json.hpp>
#include <random>
#include <sstream>

#include "irhvac/error.hpp"
#include "irhvac/report.hpp"
#include "oracles.hpp"

using namespace irhvac;

namespace {

const UtcOffset sgt{8 * 3600};
const Instant monday = parse_instant("2023-03-06T00:00:00+08:00");

bool well_formed(const std::string& xml) {
    std::istringstream in(xml);
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_xml(in, tree);
    } catch (const boost::property_tree::xml_parser_error&) {
        return false;
    }
    return tree.count("svg") == 1;
}

Heatmap sample_heatmap() {
    Heatmap h;
    h.title = "slopes <K/h> & more";
    h.units = "K/h";
    h.row_labels = {"2023-03-06", "2023-03-07"};
    h.col_labels = {"00:00", "00:30", "01:00"};
    h.values = {-1.0, 0.0, 1.0, 2.0, std::nan(""), -3.0};
    h.missing = {false, false, false, false, true, false};
    h.scale = ColorScale::diverging;
    h.vmin = -3.0;
    h.vmax = 3.0;
    return h;
}

}  // namespace

TEST_CASE("series CSV round-trips bit for bit") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(250.0, 330.0);
    std::vector<double> v(500);
    for (double& x : v) x = u(rng);
    TemperatureSeries s = TemperatureSeries::from_values(monday, 120, v);
    s.roi_name = "wall";
    s.label = RoiLabel::wall;
    s.missing[3] = s.missing[4] = true;
    s.values[3] = s.values[4] = std::nan("");
    const std::string text = series_to_csv(s, sgt);
    CHECK(text.rfind("timestamp,temperature_k,missing\n2023-03-06T00:00:00+08:00,", 0) == 0);
    const TemperatureSeries back = parse_series_csv(text, "wall", RoiLabel::wall);
    REQUIRE(back.size() == s.size());
    CHECK(back.start == s.start);
    CHECK(back.step == 120);
    CHECK(back.missing == s.missing);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.available(i)) REQUIRE(std::memcmp(&back.values[i], &s.values[i], sizeof(double)) == 0);

    const auto dir = oracle::scratch_dir("report_series");
    write_series_csv(dir / "wall.csv", s, sgt);
    CHECK(read_text(dir / "wall.csv") == text);
    CHECK(read_series_csv(dir / "wall.csv", "wall").missing == s.missing);
}

TEST_CASE("series CSV errors") {
    CHECK_THROWS_AS(parse_series_csv("a,b,c\n", "x"), FormatError);
    CHECK_THROWS_AS(parse_series_csv("timestamp,temperature_k,missing\n2023-03-06T00:00:00Z,abc,0\n", "x"), FormatError);
    CHECK_THROWS_AS(parse_series_csv("timestamp,temperature_k,missing\n2023-03-06T00:00:00Z,1,0\n"
                                     "2023-03-06T00:05:00Z,1,0\n2023-03-06T00:07:00Z,1,0\n",
                                     "x"),
                    FormatError);
    CHECK_THROWS_AS(read_text("/nonexistent/irhvac/file.csv"), IoError);
}

TEST_CASE("schedule, cycling, accuracy, and quality CSV formats") {
    const std::vector<ScheduleEvent> events = {{monday + 6 * 3600, EventKind::switch_on, 7.25},
                                               {monday + 22 * 3600, EventKind::switch_off, 5.5}};
    const std::vector<Date> dates = {parse_date("2023-03-06"), parse_date("2023-03-07")};
    CHECK(schedule_to_csv(events, dates, sgt) ==
          "date,switch_on,switch_off,on_score,off_score\n"
          "2023-03-06,06:00,22:00,7.250,5.500\n"
          "2023-03-07,,,,\n");

    CyclingReport r;
    r.ac_name = "ac1";
    r.nights = {{parse_date("2023-03-06"), 0.25, 96}, {parse_date("2023-03-07"), 0.0, 0}};
    r.overall_mean_fraction = 0.25;
    const std::string c = cycling_to_csv({r});
    CHECK(c.rfind("ac_name,date,cycling_fraction,samples_used\nac1,2023-03-06,0.250000,96\n", 0) == 0);
    CHECK(c.find("ac1,mean,0.250000,") != std::string::npos);

    CHECK(accuracy_to_csv({{20, 0.9, 12}}) == "hour,accuracy,n\n20,0.900000,12\n");

    QualityVerdict q;
    q.timestamp = monday;
    q.scene_id = "facade";
    q.accepted = false;
    q.reason = QualityReason::low_contrast;
    const std::string ql = quality_log_to_csv({q}, sgt);
    CHECK(ql.rfind("timestamp,scene_id,accepted,reason,frame_mean\n2023-03-06T00:00:00+08:00,facade,0,", 0) == 0);
}

TEST_CASE("scalogram export") {
    std::vector<double> v(200);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(i * 0.7);
    const Scalogram s = cwt(TemperatureSeries::from_values(monday, 300, v), {900.0, 1800.0, 3600.0});
    const std::string csv = scalogram_to_csv(s, sgt);
    std::size_t lines = 0;
    for (char ch : csv) lines += ch == '\n';
    CHECK(lines == 1 + s.periods.size());
    const auto doc = nlohmann::json::parse(scalogram_sidecar_json(s));
    CHECK(doc["wavelet"]["family"] == "morlet");
    CHECK(doc["wavelet"]["omega0"] == 6.0);
    CHECK(doc["periods_s"].size() == 3);
    CHECK(doc["cone_of_influence"][0].get<std::string>().size() == 200);
    CHECK(doc["cone_of_influence"][2].get<std::string>().front() == '1');
}

TEST_CASE("heatmap SVG is well-formed and deterministic on request") {
    const Heatmap h = sample_heatmap();
    const std::string a = render_heatmap_svg(h, true), b = render_heatmap_svg(h, true);
    CHECK(a == b);
    CHECK(well_formed(a));
    CHECK(a.find("<!--") == std::string::npos);
    const std::string stamped = render_heatmap_svg(h, false);
    CHECK(well_formed(stamped));
    CHECK(stamped.find("<!-- generated") != std::string::npos);
    CHECK(a.find("&lt;K/h&gt; &amp; more") != std::string::npos);
    // The missing cell is hatched.
    CHECK(a.find("url(#hatch)") != std::string::npos);
}

TEST_CASE("slope and cycling heatmaps") {
    SlopeGrid g;
    g.dates = {parse_date("2023-03-06")};
    g.bin_starts = {0, 1800};
    g.slopes = {1.0, std::nan("")};
    g.missing = {false, true};
    g.offset = sgt;
    const Heatmap h = slope_heatmap(g);
    CHECK(h.row_labels.size() == 1);
    CHECK(h.col_labels.size() == 2);
    CHECK(h.scale == ColorScale::diverging);
    CHECK(well_formed(render_heatmap_svg(h, true)));

    CyclingReport r;
    r.ac_name = "ac1";
    r.nights = {{parse_date("2023-03-06"), 0.25, 96}};
    const Heatmap c = cycling_heatmap({r});
    CHECK(well_formed(render_heatmap_svg(c, true)));
    CHECK(well_formed(render_heatmap_svg(cycling_heatmap({}), true)));
}
