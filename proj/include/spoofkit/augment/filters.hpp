#pragma once

#include "spoofkit/audio/waveform.hpp"

namespace spoofkit {

// Normalised second-order section (a0 == 1).
struct Biquad {
  double b0 = 1, b1 = 0, b2 = 0;
  double a1 = 0, a2 = 0;

  // Butterworth (Q = 1/sqrt(2)) sections via the bilinear transform with
  // frequency prewarping.
  static Biquad butterworth_low_pass(double cutoff_hz, int sample_rate);
  static Biquad butterworth_high_pass(double cutoff_hz, int sample_rate);

  // |H(e^{jw})| at frequency f.
  double magnitude(double f_hz, int sample_rate) const;

  // Single causal pass from zero state.
  Waveform apply(const Waveform& x) const;
};

Waveform low_pass(const Waveform& x, double cutoff_hz);
Waveform high_pass(const Waveform& x, double cutoff_hz);

}  // namespace spoofkit
