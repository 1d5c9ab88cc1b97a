#pragma once

#include <cstddef>
#include <vector>

#include "spoofkit/audio/stft.hpp"

namespace spoofkit {

// Sub-band log-energy statistics used by the desk-scale countermeasure.
struct FeatureConfig {
  std::size_t n_bands = 16;
  double f_min_hz = 50.0;  // bands are log-spaced from here to Nyquist
  double floor_db = -80.0;
  StftConfig stft;

  void validate() const;
  std::size_t dim() const { return 2 * n_bands; }
  // n_bands + 1 strictly increasing edges.
  std::vector<double> band_edges(int sample_rate) const;
};

// Per-band mean of the per-frame log energies, followed by their
// (population) variances. Energies are powers in dBFS, so a full-scale sine
// reads about -3 dB; values are floored at floor_db.
std::vector<double> extract_features(const Waveform& x, const FeatureConfig& cfg = {});

// Per-frame band powers in dB (frames x bands, row-major).
std::vector<double> band_log_energies(const Waveform& x, const FeatureConfig& cfg = {});

}  // namespace spoofkit
