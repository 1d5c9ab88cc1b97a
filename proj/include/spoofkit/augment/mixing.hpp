#pragma once

#include "spoofkit/audio/waveform.hpp"

namespace spoofkit {

// Adds `noise` (looped or truncated to len(x)) scaled to the requested SNR.
// If the mixture would clip, the whole mixture is scaled down to peak 1.
Waveform add_noise(const Waveform& x, const Waveform& noise, double snr_db);

// Linear convolution with `rir`, truncated to len(x) and rescaled to the
// input RMS.
Waveform convolve_rir(const Waveform& x, const Waveform& rir);

// Full linear convolution, length len(a) + len(b) - 1. Direct summation for
// short kernels, FFT otherwise.
std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace spoofkit
