#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace irhvac::fft {

// In-place, unnormalized complex DFTs of any length. Thread-safe: plans are
// cached under a lock and executed with FFTW's new-array interface.
void forward(std::vector<std::complex<double>>& data);
void inverse(std::vector<std::complex<double>>& data);

std::size_t next_pow2(std::size_t n);

}  // namespace irhvac::fft
