#include "spoofkit/augment/freqmask.hpp"

#include <algorithm>
#include <string>

#include "spoofkit/error.hpp"

namespace spoofkit {

Waveform freqmask_at(const Waveform& x, double threshold_hz, const StftConfig& cfg) {
  require_nonempty(x, "freqmask");
  if (!(threshold_hz > 0.0) || x.sample_rate < 2.0 * threshold_hz) {
    throw InvalidParameter("freqmask: threshold " + std::to_string(threshold_hz) +
                           " Hz needs a sample rate of at least twice that, got " +
                           std::to_string(x.sample_rate));
  }
  Spectrogram S = stft(x, cfg);
  const std::vector<double> freqs = fft_frequencies(x.sample_rate, cfg.n_fft);
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    if (freqs[k] > threshold_hz) S.zero_row(k);
  }
  return istft(S, x.size());
}

Waveform freqmask(const Waveform& x, const std::vector<double>& thresholds, Rng& rng,
                  const StftConfig& cfg, double* chosen_hz) {
  if (thresholds.empty()) throw InvalidParameter("freqmask: empty threshold set");
  const double top = *std::max_element(thresholds.begin(), thresholds.end());
  if (x.sample_rate < 2.0 * top) {
    throw InvalidParameter("freqmask: sample rate " + std::to_string(x.sample_rate) +
                           " Hz below twice the largest threshold " + std::to_string(top));
  }
  const double threshold = thresholds[rng.below(thresholds.size())];
  if (chosen_hz) *chosen_hz = threshold;
  return freqmask_at(x, threshold, cfg);
}

}  // namespace spoofkit
