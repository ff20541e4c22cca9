#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "irhvac/series.hpp"

namespace irhvac {

/// One-sided magnitude spectrum of a mean-removed, zero-padded series.
struct Spectrum {
    std::vector<double> frequencies;  // hertz, ascending from 0 to Nyquist
    std::vector<double> magnitudes;   // |X_k|, unnormalized DFT
    std::int64_t step = 0;            // seconds
    std::size_t transform_length = 0; // padded DFT length
};

struct FrequencyBand {
    double low = 0.0005;   // hertz
    double high = 0.0011;  // hertz

    void validate() const;
    double shortest_period() const { return 1.0 / high; }
    double longest_period() const { return 1.0 / low; }
    bool contains(double frequency) const { return frequency >= low && frequency <= high; }
    bool contains_period(double period) const { return period >= shortest_period() && period <= longest_period(); }
    friend bool operator==(const FrequencyBand&, const FrequencyBand&) = default;
};

/// Complex Morlet psi(u) = pi^-1/4 exp(i omega0 u) exp(-u^2 / 2).
struct MorletWavelet {
    double omega0 = 6.0;

    std::complex<double> operator()(double u) const;
    /// Fourier period (seconds) of scale a: a 4 pi / (omega0 + sqrt(2 + omega0^2)).
    double period_for_scale(double scale) const;
    double scale_for_period(double period) const;
    /// e-folding time of the wavelet power at a given scale.
    double efolding_time(double scale) const;
};

struct CwtCoefficients {
    std::vector<double> periods;
    std::size_t n_times = 0;
    std::vector<std::complex<double>> values;  // row-major periods x times

    const std::complex<double>& at(std::size_t p, std::size_t t) const { return values[p * n_times + t]; }
};

struct Scalogram {
    std::vector<double> periods;  // seconds, strictly increasing
    Instant start;
    std::int64_t step = 0;
    std::size_t n_times = 0;
    std::vector<double> magnitudes;  // row-major periods x times
    std::vector<bool> coi;           // true inside the cone of influence
    MorletWavelet wavelet;

    double at(std::size_t p, std::size_t t) const { return magnitudes[p * n_times + t]; }
    bool in_coi(std::size_t p, std::size_t t) const { return coi[p * n_times + t]; }
    Instant time_at(std::size_t t) const { return start + static_cast<std::int64_t>(t) * step; }
};

/// `count` log-spaced periods from `min_period` to `max_period` inclusive.
std::vector<double> log_period_grid(double min_period, double max_period, std::size_t count);

/// Periods of `grid` inside the admissible open interval (2 step, n step / 2).
std::vector<double> clip_periods(const std::vector<double>& grid, std::int64_t step, std::size_t n);

/// Throws TooShortError (< 8 samples) or TooGappyError (> 10% missing).
Spectrum fft_magnitude(const TemperatureSeries& s);

/// Time-domain energy implied by a spectrum (Parseval).
double spectrum_energy(const Spectrum& s);

/// Discretized CWT, X(a, b) = a^-1/2 sum_t x(t) conj(psi((t - b) / a)) dt, of
/// the gap-filled, mean-removed series. Parallel over periods.
/// Throws PeriodOutOfRangeError for periods outside (2 step, n step / 2).
CwtCoefficients cwt_coefficients(const TemperatureSeries& s, const std::vector<double>& periods,
                                 const MorletWavelet& wavelet = {});

Scalogram cwt(const TemperatureSeries& s, const std::vector<double>& periods, const MorletWavelet& wavelet = {});

namespace reference {
CwtCoefficients cwt_coefficients_serial(const TemperatureSeries& s, const std::vector<double>& periods,
                                        const MorletWavelet& wavelet = {});
}  // namespace reference

/// Fraction of spectral energy inside the band; 0 when the total is 0.
double band_energy(const Spectrum& s, const FrequencyBand& band);

/// Per time column, fraction of scalogram energy at in-band periods.
std::vector<double> band_energy(const Scalogram& s, const FrequencyBand& band);

/// Periods of the scalogram that lie in the band. Throws BandOutOfRangeError if none.
std::vector<std::size_t> band_rows(const Scalogram& s, const FrequencyBand& band);

/// Orthogonal projection onto the band: DFT at the series' own length, zero
/// every bin outside the band, inverse DFT.
TemperatureSeries bandpass_clean(const TemperatureSeries& s, const FrequencyBand& band);

/// Instantaneous amplitude (kelvin) of the band-limited series, from the
/// analytic signal. Same preconditions as bandpass_clean.
std::vector<double> band_envelope(const TemperatureSeries& s, const FrequencyBand& band);

/// Verifies the default FFT band brackets the 16-32 min wavelet duty band.
/// Throws ConfigError if not.
void check_default_band_consistency(const FrequencyBand& band = {});

}  // namespace irhvac
