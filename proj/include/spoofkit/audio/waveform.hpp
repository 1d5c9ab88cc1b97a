#pragma once

#include <cstddef>
#include <vector>

namespace spoofkit {

// Mono time-domain audio. Samples are nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Throws InvalidParameter when the rates differ. `what` names the operation.
void require_same_rate(const Waveform& a, const Waveform& b, const char* what);
// Throws InvalidParameter for an empty waveform or a non-positive rate.
void require_nonempty(const Waveform& x, const char* what);

double mean_power(const Waveform& x);
double rms(const Waveform& x);

}  // namespace spoofkit
