#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spoofkit/audio/waveform.hpp"

namespace spoofkit {

enum class WindowKind { kHann, kHamming, kRectangular };

WindowKind parse_window(const std::string& name);
std::string window_name(WindowKind kind);

// Periodic window of length n.
std::vector<double> make_window(WindowKind kind, std::size_t n);

// Analysis parameters. Defaults give 15.625 Hz bins at 16 kHz, so the
// 4/5/6/7 kHz masking thresholds fall exactly on bin centres.
struct StftConfig {
  std::size_t n_fft = 1024;
  std::size_t hop_length = 256;
  WindowKind window = WindowKind::kHann;

  void validate() const;
};

// One-sided complex STFT. Storage is frame-major: the n_fft/2 + 1 bins of a
// frame are contiguous.
class Spectrogram {
 public:
  Spectrogram() = default;
  Spectrogram(StftConfig cfg, int sample_rate, std::size_t n_frames,
              std::optional<std::size_t> signal_length = std::nullopt);

  std::size_t n_bins() const { return cfg_.n_fft / 2 + 1; }
  std::size_t n_frames() const { return n_frames_; }
  const StftConfig& config() const { return cfg_; }
  int sample_rate() const { return sample_rate_; }
  // Length of the waveform this came from, when known.
  std::optional<std::size_t> signal_length() const { return signal_length_; }

  std::complex<double>& at(std::size_t bin, std::size_t frame) {
    return data_[frame * n_bins() + bin];
  }
  const std::complex<double>& at(std::size_t bin, std::size_t frame) const {
    return data_[frame * n_bins() + bin];
  }
  std::span<std::complex<double>> frame(std::size_t t) {
    return {data_.data() + t * n_bins(), n_bins()};
  }
  std::span<const std::complex<double>> frame(std::size_t t) const {
    return {data_.data() + t * n_bins(), n_bins()};
  }

  // Sets every bin of row `bin` to zero across all frames.
  void zero_row(std::size_t bin);

 private:
  StftConfig cfg_;
  int sample_rate_ = 0;
  std::size_t n_frames_ = 0;
  std::optional<std::size_t> signal_length_;
  std::vector<std::complex<double>> data_;
};

bool is_power_of_two(std::size_t n);

// Centred STFT: the signal is reflection-padded by n_fft/2 on both sides,
// giving floor(len / hop) + 1 frames.
Spectrogram stft(const Waveform& x, const StftConfig& cfg = {});

// Weighted overlap-add inverse with window-square normalisation. The output
// length is `length` when given, otherwise the source signal length recorded
// in `S`, otherwise hop * (frames - 1). Samples past the last frame are zero.
Waveform istft(const Spectrogram& S, std::optional<std::size_t> length = std::nullopt);

// Centre frequency of every one-sided bin: k * sample_rate / n_fft.
std::vector<double> fft_frequencies(int sample_rate, std::size_t n_fft);

}  // namespace spoofkit
