#include <doctest.h>

#include <cstring>
#include <random>

#include "irhvac/ingest.hpp"
#include "irhvac/spectral.hpp"

using namespace irhvac;

// The OpenMP kernels must agree bit for bit with their serial twins.

namespace {

template <typename T>
bool same_bits(const std::vector<T>& a, const std::vector<T>& b) {
    return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0);
}

}  // namespace

TEST_CASE("parallel cwt equals the serial reference") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(300.0, 2.0);
    for (std::size_t n : {64u, 500u, 2048u}) {
        std::vector<double> v(n);
        for (double& x : v) x = g(rng);
        TemperatureSeries s = TemperatureSeries::from_values(Instant{0}, 300, v);
        s.missing[n / 3] = true;
        const auto periods = clip_periods(log_period_grid(240, 15360, 48), 300, n);
        const auto par = cwt_coefficients(s, periods);
        const auto ser = reference::cwt_coefficients_serial(s, periods);
        CHECK(par.n_times == ser.n_times);
        CHECK(same_bits(par.values, ser.values));
    }
}

TEST_CASE("parallel extraction equals the serial reference") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(12000.0, 22000.0);
    std::vector<ThermalFrame> frames(300);
    std::vector<QualityVerdict> verdicts(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        frames[i].timestamp = Instant{static_cast<std::int64_t>(i) * 120};
        frames[i].scene_id = "s";
        frames[i].width = 40;
        frames[i].height = 30;
        frames[i].counts.resize(1200);
        for (double& c : frames[i].counts) c = u(rng);
        verdicts[i].timestamp = frames[i].timestamp;
        verdicts[i].accepted = i % 17 != 0;
    }
    RoiMask mask{"r", "s", RoiLabel::wall, {{3.2, 4.1}, {31.7, 2.0}, {25.0, 27.9}, {5.5, 20.0}}};
    const RawSeries par = extract_series(frames, verdicts, mask, PlanckConstants{});
    const RawSeries ser = reference::extract_series_serial(frames, verdicts, mask, PlanckConstants{});
    REQUIRE(par.samples.size() == ser.samples.size());
    for (std::size_t i = 0; i < par.samples.size(); ++i) {
        CHECK(par.samples[i].time == ser.samples[i].time);
        CHECK(par.samples[i].gap == ser.samples[i].gap);
        CHECK(std::memcmp(&par.samples[i].kelvin, &ser.samples[i].kelvin, sizeof(double)) == 0);
    }
}
