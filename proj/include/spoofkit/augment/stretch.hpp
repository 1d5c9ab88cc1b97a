#pragma once

#include <cstddef>

#include "spoofkit/audio/stft.hpp"

namespace spoofkit {

// Phase-vocoder time scaling; rate > 1 shortens. Output length is
// round(len / rate). rate must lie in [0.5, 2].
Waveform time_stretch(const Waveform& x, double rate, const StftConfig& cfg = {});

// Time-stretch by 2^(semitones/12) then resample linearly back to the input
// length. semitones must lie in [-12, 12].
Waveform pitch_shift(const Waveform& x, double semitones, const StftConfig& cfg = {});

// Linear-interpolation resampling to exactly `out_len` samples.
Waveform resample_linear(const Waveform& x, std::size_t out_len);

}  // namespace spoofkit
