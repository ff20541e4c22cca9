// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>

#include "irhvac/ingest.hpp"
#include "irhvac/spectral.hpp"

using namespace irhvac;

namespace {

TemperatureSeries noise_series(std::size_t n) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(300.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = g(rng);
    return TemperatureSeries::from_values(Instant{0}, 120, std::move(v));
}

std::vector<double> grid_for(const TemperatureSeries& s) {
    return clip_periods(log_period_grid(240, 15360, 48), s.step, s.size());
}

struct FrameSet {
    std::vector<ThermalFrame> frames;
    std::vector<QualityVerdict> verdicts;
    RoiMask mask{"roi", "s", RoiLabel::wall, {{4, 4}, {280, 10}, {300, 220}, {20, 200}}};
};

const FrameSet& frame_set() {
    static const FrameSet set = [] {
        FrameSet f;
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(14000.0, 21000.0);
        for (int i = 0; i < 200; ++i) {
            ThermalFrame fr;
            fr.timestamp = Instant{i * 120};
            fr.scene_id = "s";
            fr.width = 320;
            fr.height = 240;
            fr.counts.resize(320 * 240);
            for (double& c : fr.counts) c = u(rng);
            f.frames.push_back(std::move(fr));
            QualityVerdict v;
            v.timestamp = Instant{i * 120};
            f.verdicts.push_back(v);
        }
        return f;
    }();
    return set;
}

void BM_cwt_serial(benchmark::State& state) {
    const auto s = noise_series(static_cast<std::size_t>(state.range(0)));
    const auto grid = grid_for(s);
    for (auto _ : state) benchmark::DoNotOptimize(reference::cwt_coefficients_serial(s, grid));
}

void BM_cwt_parallel(benchmark::State& state) {
    const auto s = noise_series(static_cast<std::size_t>(state.range(0)));
    const auto grid = grid_for(s);
    for (auto _ : state) benchmark::DoNotOptimize(cwt_coefficients(s, grid));
}

void BM_extract_serial(benchmark::State& state) {
    const auto& f = frame_set();
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::extract_series_serial(f.frames, f.verdicts, f.mask, PlanckConstants{}));
}

void BM_extract_parallel(benchmark::State& state) {
    const auto& f = frame_set();
    for (auto _ : state) benchmark::DoNotOptimize(extract_series(f.frames, f.verdicts, f.mask, PlanckConstants{}));
}

}  // namespace

BENCHMARK(BM_cwt_serial)->Arg(720)->Arg(5040)->Arg(20160)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cwt_parallel)->Arg(720)->Arg(5040)->Arg(20160)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_extract_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_extract_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
