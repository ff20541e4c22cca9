#include "irhvac/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "fft.hpp"
#include "irhvac/error.hpp"

namespace irhvac {

using cplx = std::complex<double>;

namespace {

constexpr std::size_t min_length = 8;
constexpr double max_missing = 0.10;

std::vector<double> prepared_signal(const TemperatureSeries& s, const char* op) {
    s.validate();
    if (s.size() < min_length)
        throw TooShortError(fmt::format("{}: series '{}' has {} samples, need {}", op, s.roi_name, s.size(), min_length));
    if (missing_fraction(s) > max_missing)
        throw TooGappyError(fmt::format("{}: series '{}' is {:.1f}% missing (limit 10%)", op, s.roi_name,
                                        100.0 * missing_fraction(s)));
    return fill_gaps(s);
}

void remove_mean(std::vector<double>& x) {
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    for (double& v : x) v -= mean;
}

}  // namespace

void FrequencyBand::validate() const {
    if (!(low > 0.0 && high > low && std::isfinite(high)))
        throw ConfigError(fmt::format("frequency band [{}, {}] Hz must satisfy 0 < low < high", low, high));
}

cplx MorletWavelet::operator()(double u) const {
    static const double norm = std::pow(std::numbers::pi, -0.25);
    return norm * std::exp(-0.5 * u * u) * cplx(std::cos(omega0 * u), std::sin(omega0 * u));
}

double MorletWavelet::period_for_scale(double scale) const {
    return scale * 4.0 * std::numbers::pi / (omega0 + std::sqrt(2.0 + omega0 * omega0));
}

double MorletWavelet::scale_for_period(double period) const {
    return period * (omega0 + std::sqrt(2.0 + omega0 * omega0)) / (4.0 * std::numbers::pi);
}

double MorletWavelet::efolding_time(double scale) const { return std::numbers::sqrt2 * scale; }

std::vector<double> log_period_grid(double min_period, double max_period, std::size_t count) {
    if (!(min_period > 0.0 && max_period > min_period) || count < 2)
        throw ConfigError(fmt::format("period grid [{}, {}] x {} is invalid", min_period, max_period, count));
    std::vector<double> grid(count);
    const double ratio = std::log(max_period / min_period) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) grid[i] = min_period * std::exp(ratio * static_cast<double>(i));
    grid.back() = max_period;
    return grid;
}

std::vector<double> clip_periods(const std::vector<double>& grid, std::int64_t step, std::size_t n) {
    const double lo = 2.0 * static_cast<double>(step);
    const double hi = static_cast<double>(n) * static_cast<double>(step) / 2.0;
    std::vector<double> out;
    std::copy_if(grid.begin(), grid.end(), std::back_inserter(out), [&](double p) { return p > lo && p < hi; });
    return out;
}

// ---------------------------------------------------------------- Fourier

Spectrum fft_magnitude(const TemperatureSeries& s) {
    std::vector<double> x = prepared_signal(s, "fft_magnitude");
    remove_mean(x);
    const std::size_t n = fft::next_pow2(x.size());
    std::vector<cplx> buf(n);
    std::copy(x.begin(), x.end(), buf.begin());
    fft::forward(buf);

    Spectrum out;
    out.step = s.step;
    out.transform_length = n;
    for (std::size_t k = 0; k <= n / 2; ++k) {
        out.frequencies.push_back(static_cast<double>(k) / (static_cast<double>(n) * static_cast<double>(s.step)));
        out.magnitudes.push_back(std::abs(buf[k]));
    }
    return out;
}

namespace {

// Weight of one-sided bin k in a length-n transform: DC and Nyquist appear once.
double onesided_weight(std::size_t k, std::size_t n) { return (k == 0 || 2 * k == n) ? 1.0 : 2.0; }

}  // namespace

double spectrum_energy(const Spectrum& s) {
    double e = 0.0;
    for (std::size_t k = 0; k < s.magnitudes.size(); ++k)
        e += onesided_weight(k, s.transform_length) * s.magnitudes[k] * s.magnitudes[k];
    return e / static_cast<double>(s.transform_length);
}

double band_energy(const Spectrum& s, const FrequencyBand& band) {
    band.validate();
    if (s.frequencies.empty() || band.low > s.frequencies.back() || band.high < s.frequencies.front())
        throw BandOutOfRangeError(fmt::format("band [{}, {}] Hz lies outside the spectrum", band.low, band.high));
    double in = 0.0, total = 0.0;
    for (std::size_t k = 0; k < s.magnitudes.size(); ++k) {
        const double e = onesided_weight(k, s.transform_length) * s.magnitudes[k] * s.magnitudes[k];
        total += e;
        if (band.contains(s.frequencies[k])) in += e;
    }
    return total > 0.0 ? in / total : 0.0;
}

TemperatureSeries bandpass_clean(const TemperatureSeries& s, const FrequencyBand& band) {
    band.validate();
    const std::vector<double> x = prepared_signal(s, "bandpass_clean");
    const std::size_t n = x.size();
    const double fs_step = static_cast<double>(n) * static_cast<double>(s.step);
    if (band.low > 0.5 / static_cast<double>(s.step))
        throw BandOutOfRangeError(fmt::format("band [{}, {}] Hz is above Nyquist", band.low, band.high));

    std::vector<cplx> buf(x.begin(), x.end());
    fft::forward(buf);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t folded = std::min(k, n - k);
        if (!band.contains(static_cast<double>(folded) / fs_step)) buf[k] = 0.0;
    }
    fft::inverse(buf);

    TemperatureSeries out = s;
    for (std::size_t i = 0; i < n; ++i)
        out.values[i] = s.available(i) ? buf[i].real() / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
    return out;
}

std::vector<double> band_envelope(const TemperatureSeries& s, const FrequencyBand& band) {
    band.validate();
    const std::vector<double> x = prepared_signal(s, "band_envelope");
    const std::size_t n = x.size();
    const double fs_step = static_cast<double>(n) * static_cast<double>(s.step);

    // Analytic signal of the band-limited series: positive in-band bins doubled.
    std::vector<cplx> buf(x.begin(), x.end());
    fft::forward(buf);
    for (std::size_t k = 0; k < n; ++k) {
        const bool positive = k > 0 && 2 * k < n;
        const bool nyquist = 2 * k == n;
        const double f = static_cast<double>(std::min(k, n - k)) / fs_step;
        if (!band.contains(f) || !(positive || nyquist)) buf[k] = 0.0;
        else if (positive) buf[k] *= 2.0;
    }
    fft::inverse(buf);

    std::vector<double> env(n);
    for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(buf[i]) / static_cast<double>(n);
    return env;
}

// ---------------------------------------------------------------- wavelet

namespace {

struct CwtInput {
    std::vector<cplx> spectrum;  // DFT of the zero-padded signal
    std::size_t n = 0;           // signal length
    std::int64_t step = 0;
};

CwtInput prepare_cwt(const TemperatureSeries& s, const std::vector<double>& periods) {
    std::vector<double> x = prepared_signal(s, "cwt");
    remove_mean(x);
    if (periods.empty()) throw PeriodOutOfRangeError("cwt: empty period grid");
    const double lo = 2.0 * static_cast<double>(s.step);
    const double hi = static_cast<double>(x.size()) * static_cast<double>(s.step) / 2.0;
    for (std::size_t i = 0; i < periods.size(); ++i) {
        if (!(periods[i] > lo && periods[i] < hi))
            throw PeriodOutOfRangeError(
                fmt::format("cwt: period {} s outside ({} s, {} s) for series '{}'", periods[i], lo, hi, s.roi_name));
        if (i > 0 && !(periods[i] > periods[i - 1]))
            throw PeriodOutOfRangeError("cwt: periods must be strictly increasing");
    }
    // Linear (not circular) correlation needs room for every lag in (-n, n).
    CwtInput in;
    in.n = x.size();
    in.step = s.step;
    in.spectrum.assign(fft::next_pow2(2 * x.size() - 1), 0.0);
    std::copy(x.begin(), x.end(), in.spectrum.begin());
    fft::forward(in.spectrum);
    return in;
}

// One scalogram row. The correlation sum_t x(t) g(t - b) is computed as the
// convolution x * h with h(m) = g(-m), g(k) = conj(psi(k dt / a)) dt / sqrt(a).
void cwt_row(const CwtInput& in, double period, const MorletWavelet& w, cplx* row) {
    const std::size_t N = in.spectrum.size();
    const double dt = static_cast<double>(in.step);
    const double a = w.scale_for_period(period);
    const double gain = dt / std::sqrt(a);
    const auto n = static_cast<std::ptrdiff_t>(in.n);

    std::vector<cplx> h(N, 0.0);
    for (std::ptrdiff_t k = -(n - 1); k <= n - 1; ++k) {
        const double u = static_cast<double>(k) * dt / a;
        if (std::abs(u) > 40.0) continue;  // exp(-u^2/2) underflows
        const std::size_t m = static_cast<std::size_t>((-k + static_cast<std::ptrdiff_t>(N)) % static_cast<std::ptrdiff_t>(N));
        h[m] = std::conj(w(u)) * gain;
    }
    fft::forward(h);
    for (std::size_t k = 0; k < N; ++k) h[k] *= in.spectrum[k];
    fft::inverse(h);
    for (std::size_t b = 0; b < in.n; ++b) row[b] = h[b] / static_cast<double>(N);
}

CwtCoefficients empty_coefficients(const CwtInput& in, const std::vector<double>& periods) {
    CwtCoefficients c;
    c.periods = periods;
    c.n_times = in.n;
    c.values.assign(periods.size() * in.n, 0.0);
    return c;
}

}  // namespace

CwtCoefficients cwt_coefficients(const TemperatureSeries& s, const std::vector<double>& periods,
                                 const MorletWavelet& wavelet) {
    const CwtInput in = prepare_cwt(s, periods);
    CwtCoefficients c = empty_coefficients(in, periods);
    const auto rows = static_cast<std::ptrdiff_t>(periods.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t p = 0; p < rows; ++p) cwt_row(in, periods[p], wavelet, &c.values[p * in.n]);
    return c;
}

namespace reference {

CwtCoefficients cwt_coefficients_serial(const TemperatureSeries& s, const std::vector<double>& periods,
                                        const MorletWavelet& wavelet) {
    const CwtInput in = prepare_cwt(s, periods);
    CwtCoefficients c = empty_coefficients(in, periods);
    for (std::size_t p = 0; p < periods.size(); ++p) cwt_row(in, periods[p], wavelet, &c.values[p * in.n]);
    return c;
}

}  // namespace reference

Scalogram cwt(const TemperatureSeries& s, const std::vector<double>& periods, const MorletWavelet& wavelet) {
    const CwtCoefficients c = cwt_coefficients(s, periods, wavelet);
    Scalogram out;
    out.periods = periods;
    out.start = s.start;
    out.step = s.step;
    out.n_times = c.n_times;
    out.wavelet = wavelet;
    out.magnitudes.resize(c.values.size());
    out.coi.resize(c.values.size());
    for (std::size_t p = 0; p < periods.size(); ++p) {
        const double reach = wavelet.efolding_time(wavelet.scale_for_period(periods[p]));
        for (std::size_t t = 0; t < c.n_times; ++t) {
            const std::size_t i = p * c.n_times + t;
            out.magnitudes[i] = std::abs(c.values[i]);
            const double edge = static_cast<double>(std::min(t, c.n_times - 1 - t)) * static_cast<double>(s.step);
            out.coi[i] = edge < reach;
        }
    }
    return out;
}

std::vector<std::size_t> band_rows(const Scalogram& s, const FrequencyBand& band) {
    band.validate();
    std::vector<std::size_t> rows;
    for (std::size_t p = 0; p < s.periods.size(); ++p)
        if (band.contains_period(s.periods[p])) rows.push_back(p);
    if (rows.empty())
        throw BandOutOfRangeError(fmt::format("band [{}, {}] Hz has no period in the scalogram grid [{}, {}] s",
                                              band.low, band.high, s.periods.empty() ? 0.0 : s.periods.front(),
                                              s.periods.empty() ? 0.0 : s.periods.back()));
    return rows;
}

std::vector<double> band_energy(const Scalogram& s, const FrequencyBand& band) {
    const std::vector<std::size_t> rows = band_rows(s, band);
    std::vector<bool> in_band(s.periods.size(), false);
    for (std::size_t r : rows) in_band[r] = true;

    std::vector<double> out(s.n_times, 0.0);
    const auto nt = static_cast<std::ptrdiff_t>(s.n_times);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < nt; ++t) {
        double in = 0.0, total = 0.0;
        for (std::size_t p = 0; p < s.periods.size(); ++p) {
            const double e = s.at(p, t) * s.at(p, t);
            total += e;
            if (in_band[p]) in += e;
        }
        out[t] = total > 0.0 ? in / total : 0.0;
    }
    return out;
}

void check_default_band_consistency(const FrequencyBand& band) {
    band.validate();
    constexpr double duty_min = 16.0 * 60.0, duty_max = 32.0 * 60.0;
    if (!(band.shortest_period() <= duty_min && band.longest_period() >= duty_max))
        throw ConfigError(fmt::format("band [{}, {}] Hz (periods {:.0f}-{:.0f} s) does not bracket the {}-{} s duty band",
                                      band.low, band.high, band.shortest_period(), band.longest_period(), duty_min,
                                      duty_max));
}

}  // namespace irhvac
