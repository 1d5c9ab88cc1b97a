#include "spoofkit/desk/features.hpp"

#include <algorithm>
#include <cmath>

#include "spoofkit/error.hpp"

namespace spoofkit {

void FeatureConfig::validate() const {
  if (n_bands < 1) throw InvalidParameter("feature config: n_bands must be >= 1");
  if (!(f_min_hz > 0)) throw InvalidParameter("feature config: f_min_hz must be positive");
  if (!std::isfinite(floor_db)) throw InvalidParameter("feature config: floor_db must be finite");
  stft.validate();
}

std::vector<double> FeatureConfig::band_edges(int sample_rate) const {
  const double nyq = sample_rate / 2.0;
  if (!(f_min_hz < nyq)) throw InvalidParameter("feature config: f_min_hz must be below Nyquist");
  std::vector<double> edges(n_bands + 1);
  const double ratio = std::log(nyq / f_min_hz);
  for (std::size_t i = 0; i <= n_bands; ++i)
    edges[i] = f_min_hz * std::exp(ratio * static_cast<double>(i) / static_cast<double>(n_bands));
  edges.back() = nyq;
  return edges;
}

std::vector<double> band_log_energies(const Waveform& x, const FeatureConfig& cfg) {
  cfg.validate();
  require_nonempty(x, "extract_features");
  const Spectrogram S = stft(x, cfg.stft);

  // bin -> band, or -1 below f_min
  const auto edges = cfg.band_edges(x.sample_rate);
  const auto freqs = fft_frequencies(x.sample_rate, cfg.stft.n_fft);
  std::vector<int> band_of(freqs.size(), -1);
  std::vector<std::size_t> populated(cfg.n_bands, 0);
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    if (freqs[k] < edges[0]) continue;
    auto it = std::upper_bound(edges.begin(), edges.end(), freqs[k]);
    std::size_t b = static_cast<std::size_t>(it - edges.begin()) - 1;
    b = std::min(b, cfg.n_bands - 1);  // Nyquist bin sits on the last edge
    band_of[k] = static_cast<int>(b);
    ++populated[b];
  }
  for (std::size_t b = 0; b < cfg.n_bands; ++b)
    if (populated[b] == 0)
      throw InvalidParameter("extract_features: band " + std::to_string(b) +
                             " contains no STFT bin; use fewer bands or a larger n_fft");

  // Scaled so a sine of amplitude A reads A^2 / 2 summed over its band.
  const auto win = make_window(cfg.stft.window, cfg.stft.n_fft);
  double wsq = 0;
  for (double w : win) wsq += w * w;
  const double scale = 2.0 / (static_cast<double>(cfg.stft.n_fft) * wsq);
  const double floor_power = std::pow(10.0, cfg.floor_db / 10.0);

  const std::size_t T = S.n_frames();
  std::vector<double> out(T * cfg.n_bands);
  std::vector<double> acc(cfg.n_bands);
  for (std::size_t t = 0; t < T; ++t) {
    std::fill(acc.begin(), acc.end(), 0.0);
    const auto fr = S.frame(t);
    for (std::size_t k = 0; k < fr.size(); ++k)
      if (band_of[k] >= 0) acc[static_cast<std::size_t>(band_of[k])] += std::norm(fr[k]);
    for (std::size_t b = 0; b < cfg.n_bands; ++b)
      out[t * cfg.n_bands + b] = 10.0 * std::log10(std::max(acc[b] * scale, floor_power));
  }
  return out;
}

std::vector<double> extract_features(const Waveform& x, const FeatureConfig& cfg) {
  const auto e = band_log_energies(x, cfg);
  const std::size_t B = cfg.n_bands;
  const std::size_t T = e.size() / B;
  std::vector<double> feat(2 * B, 0.0);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t b = 0; b < B; ++b) feat[b] += e[t * B + b];
  for (std::size_t b = 0; b < B; ++b) feat[b] /= static_cast<double>(T);
  // two-pass variance
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t b = 0; b < B; ++b) {
      const double d = e[t * B + b] - feat[b];
      feat[B + b] += d * d;
    }
  for (std::size_t b = 0; b < B; ++b) feat[B + b] /= static_cast<double>(T);
  return feat;
}

}  // namespace spoofkit
