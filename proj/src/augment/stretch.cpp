#include "spoofkit/augment/stretch.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "spoofkit/error.hpp"

namespace spoofkit {

Waveform time_stretch(const Waveform& x, double rate, const StftConfig& cfg) {
  if (!(rate >= 0.5 && rate <= 2.0)) {
    throw InvalidParameter("time_stretch: rate " + std::to_string(rate) + " outside [0.5, 2]");
  }
  const Spectrogram S = stft(x, cfg);
  const std::size_t n_bins = S.n_bins();
  const std::size_t n_in = S.n_frames();
  const std::size_t n_out = static_cast<std::size_t>(std::ceil(static_cast<double>(n_in) / rate));
  const double two_pi = 2.0 * std::numbers::pi;

  // Expected phase advance per hop for each bin centre.
  std::vector<double> advance(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    advance[k] = two_pi * static_cast<double>(cfg.hop_length * k) / static_cast<double>(cfg.n_fft);
  }
  auto column = [&](std::size_t t, std::size_t k) -> std::complex<double> {
    return t < n_in ? S.at(k, t) : std::complex<double>{};
  };

  Spectrogram out(cfg, x.sample_rate, n_out);
  std::vector<double> phase(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) phase[k] = std::arg(S.at(k, 0));

  for (std::size_t t = 0; t < n_out; ++t) {
    const double step = static_cast<double>(t) * rate;
    const auto left = static_cast<std::size_t>(step);
    const double frac = step - static_cast<double>(left);
    for (std::size_t k = 0; k < n_bins; ++k) {
      const std::complex<double> c0 = column(left, k);
      const std::complex<double> c1 = column(left + 1, k);
      const double mag = (1.0 - frac) * std::abs(c0) + frac * std::abs(c1);
      out.at(k, t) = std::polar(mag, phase[k]);
      double dphi = std::arg(c1) - std::arg(c0) - advance[k];
      dphi -= two_pi * std::round(dphi / two_pi);
      phase[k] += advance[k] + dphi;
    }
  }
  const auto out_len = static_cast<std::size_t>(std::llround(static_cast<double>(x.size()) / rate));
  return istft(out, out_len);
}

Waveform resample_linear(const Waveform& x, std::size_t out_len) {
  require_nonempty(x, "resample_linear");
  Waveform y;
  y.sample_rate = x.sample_rate;
  y.samples.resize(out_len);
  if (out_len == 0) return y;
  if (out_len == 1 || x.size() == 1) {
    std::fill(y.samples.begin(), y.samples.end(), x.samples.front());
    if (out_len > 1) y.samples.back() = x.samples.back();
    return y;
  }
  const double scale = static_cast<double>(x.size() - 1) / static_cast<double>(out_len - 1);
  for (std::size_t i = 0; i < out_len; ++i) {
    const double pos = static_cast<double>(i) * scale;
    const auto j = std::min(static_cast<std::size_t>(pos), x.size() - 2);
    const double frac = pos - static_cast<double>(j);
    y.samples[i] = (1.0 - frac) * x.samples[j] + frac * x.samples[j + 1];
  }
  return y;
}

Waveform pitch_shift(const Waveform& x, double semitones, const StftConfig& cfg) {
  if (!(semitones >= -12.0 && semitones <= 12.0)) {
    throw InvalidParameter("pitch_shift: semitones " + std::to_string(semitones) +
                           " outside [-12, 12]");
  }
  const double rate = std::pow(2.0, -semitones / 12.0);
  return resample_linear(time_stretch(x, rate, cfg), x.size());
}

}  // namespace spoofkit
