#pragma once

#include <vector>

#include "spoofkit/audio/stft.hpp"
#include "spoofkit/rng.hpp"

namespace spoofkit {

inline const std::vector<double>& default_freqmask_thresholds() {
  static const std::vector<double> kThresholds{4000.0, 5000.0, 6000.0, 7000.0};
  return kThresholds;
}

// Zeroes every STFT row whose bin-centre frequency is strictly above
// `threshold_hz`, then resynthesises. Output length equals input length.
Waveform freqmask_at(const Waveform& x, double threshold_hz, const StftConfig& cfg = {});

// Draws the threshold uniformly from `thresholds` and applies freqmask_at.
// `chosen_hz`, when non-null, receives the drawn threshold.
Waveform freqmask(const Waveform& x, const std::vector<double>& thresholds, Rng& rng,
                  const StftConfig& cfg = {}, double* chosen_hz = nullptr);

}  // namespace spoofkit
