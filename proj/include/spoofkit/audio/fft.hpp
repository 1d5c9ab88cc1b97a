#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace spoofkit::fft {

// Real-input DFT of length n = in.size(); writes n/2 + 1 bins.
// Unnormalized: X[k] = sum_t x[t] exp(-2 pi i k t / n).
void rfft(std::span<const double> in, std::span<std::complex<double>> out);

// Inverse of rfft, including the 1/n factor. `in` holds n/2 + 1 bins and
// `out` holds n samples. `in` is not modified.
void irfft(std::span<const std::complex<double>> in, std::span<double> out);

}  // namespace spoofkit::fft
