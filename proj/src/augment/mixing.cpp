#include "spoofkit/augment/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "spoofkit/audio/fft.hpp"
#include "spoofkit/error.hpp"

namespace spoofkit {

Waveform add_noise(const Waveform& x, const Waveform& noise, double snr_db) {
  require_nonempty(x, "add_noise");
  require_nonempty(noise, "add_noise");
  require_same_rate(x, noise, "add_noise");
  if (!std::isfinite(snr_db)) throw InvalidParameter("add_noise: snr_db must be finite");

  const double p_signal = mean_power(x);
  if (p_signal <= 0.0) throw CannotSetSnr("add_noise: input has zero power");

  Waveform y = x;
  std::vector<double> n(x.size());
  for (std::size_t i = 0; i < n.size(); ++i) n[i] = noise.samples[i % noise.size()];
  double p_noise = 0.0;
  for (double v : n) p_noise += v * v;
  p_noise /= static_cast<double>(n.size());
  if (p_noise <= 0.0) throw CannotSetSnr("add_noise: noise has zero power over the mixed span");

  const double gain = std::sqrt(p_signal / (p_noise * std::pow(10.0, snr_db / 10.0)));
  double peak = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    y.samples[i] += gain * n[i];
    peak = std::max(peak, std::abs(y.samples[i]));
  }
  if (peak > 1.0) {
    for (double& v : y.samples) v /= peak;
  }
  return y;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  std::vector<double> out(out_len, 0.0);
  if (std::min(a.size(), b.size()) <= 64) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
  }
  std::size_t n = 1;
  while (n < out_len) n <<= 1;
  std::vector<double> pa(n, 0.0), pb(n, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  std::vector<std::complex<double>> fa(n / 2 + 1), fb(n / 2 + 1);
  fft::rfft(pa, fa);
  fft::rfft(pb, fb);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  fft::irfft(fa, pa);
  std::copy_n(pa.begin(), out_len, out.begin());
  return out;
}

Waveform convolve_rir(const Waveform& x, const Waveform& rir) {
  require_nonempty(x, "convolve_rir");
  require_nonempty(rir, "convolve_rir");
  require_same_rate(x, rir, "convolve_rir");
  if (std::all_of(rir.samples.begin(), rir.samples.end(), [](double v) { return v == 0.0; })) {
    throw InvalidParameter("convolve_rir: impulse response is all zeros");
  }
  std::vector<double> full = convolve(x.samples, rir.samples);
  full.resize(x.size());
  Waveform y{std::move(full), x.sample_rate};
  const double in_rms = rms(x);
  const double out_rms = rms(y);
  if (out_rms > 0.0 && in_rms > 0.0) {
    const double g = in_rms / out_rms;
    for (double& v : y.samples) v *= g;
  }
  return y;
}

}  // namespace spoofkit
