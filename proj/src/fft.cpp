#include "fft.hpp"

#include <map>
#include <mutex>
#include <utility>

#include <fftw3.h>

namespace irhvac::fft {

namespace {

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        auto it = plans_.find({n, sign});
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> scratch(n);
        auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(std::make_pair(n, sign), plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void run(std::vector<std::complex<double>>& data, int sign) {
    if (data.empty()) return;
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(cache().get(data.size(), sign), p, p);
}

}  // namespace

void forward(std::vector<std::complex<double>>& data) { run(data, FFTW_FORWARD); }
void inverse(std::vector<std::complex<double>>& data) { run(data, FFTW_BACKWARD); }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace irhvac::fft
