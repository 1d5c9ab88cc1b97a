#include "spoofkit/augment/filters.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "spoofkit/error.hpp"

namespace spoofkit {
namespace {

void check_cutoff(double cutoff_hz, int sample_rate, const char* what) {
  const double nyquist = sample_rate / 2.0;
  if (!(cutoff_hz > 0.0 && cutoff_hz < nyquist)) {
    throw InvalidParameter(std::string(what) + ": cutoff " + std::to_string(cutoff_hz) +
                           " Hz outside (0, " + std::to_string(nyquist) + ")");
  }
}

struct Prewarped {
  double cos_w0, alpha, a0;
};

Prewarped prewarp(double cutoff_hz, int sample_rate) {
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / sample_rate;
  const double q = 1.0 / std::numbers::sqrt2;
  const double alpha = std::sin(w0) / (2.0 * q);
  return {std::cos(w0), alpha, 1.0 + alpha};
}

}  // namespace

Biquad Biquad::butterworth_low_pass(double cutoff_hz, int sample_rate) {
  check_cutoff(cutoff_hz, sample_rate, "low_pass");
  const auto [c, alpha, a0] = prewarp(cutoff_hz, sample_rate);
  Biquad f;
  f.b0 = (1.0 - c) / 2.0 / a0;
  f.b1 = (1.0 - c) / a0;
  f.b2 = f.b0;
  f.a1 = -2.0 * c / a0;
  f.a2 = (1.0 - alpha) / a0;
  return f;
}

Biquad Biquad::butterworth_high_pass(double cutoff_hz, int sample_rate) {
  check_cutoff(cutoff_hz, sample_rate, "high_pass");
  const auto [c, alpha, a0] = prewarp(cutoff_hz, sample_rate);
  Biquad f;
  f.b0 = (1.0 + c) / 2.0 / a0;
  f.b1 = -(1.0 + c) / a0;
  f.b2 = f.b0;
  f.a1 = -2.0 * c / a0;
  f.a2 = (1.0 - alpha) / a0;
  return f;
}

double Biquad::magnitude(double f_hz, int sample_rate) const {
  const double w = 2.0 * std::numbers::pi * f_hz / sample_rate;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  return std::abs((b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2));
}

Waveform Biquad::apply(const Waveform& x) const {
  Waveform y;
  y.sample_rate = x.sample_rate;
  y.samples.resize(x.size());
  // transposed direct form II
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double in = x.samples[i];
    const double out = b0 * in + s1;
    s1 = b1 * in - a1 * out + s2;
    s2 = b2 * in - a2 * out;
    y.samples[i] = out;
  }
  return y;
}

Waveform low_pass(const Waveform& x, double cutoff_hz) {
  require_nonempty(x, "low_pass");
  return Biquad::butterworth_low_pass(cutoff_hz, x.sample_rate).apply(x);
}

Waveform high_pass(const Waveform& x, double cutoff_hz) {
  require_nonempty(x, "high_pass");
  return Biquad::butterworth_high_pass(cutoff_hz, x.sample_rate).apply(x);
}

}  // namespace spoofkit
