#include "spoofkit/audio/stft.hpp"

#include <cmath>
#include <numbers>

#include "spoofkit/audio/fft.hpp"
#include "spoofkit/error.hpp"

namespace spoofkit {

void require_same_rate(const Waveform& a, const Waveform& b, const char* what) {
  if (a.sample_rate != b.sample_rate) {
    throw InvalidParameter(std::string(what) + ": sample rate mismatch (" +
                           std::to_string(a.sample_rate) + " vs " +
                           std::to_string(b.sample_rate) + " Hz)");
  }
}

void require_nonempty(const Waveform& x, const char* what) {
  if (x.sample_rate <= 0) throw InvalidParameter(std::string(what) + ": sample rate must be positive");
  if (x.empty()) throw InvalidParameter(std::string(what) + ": empty waveform");
}

double mean_power(const Waveform& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x.samples) acc += v * v;
  return acc / static_cast<double>(x.size());
}

double rms(const Waveform& x) { return std::sqrt(mean_power(x)); }

WindowKind parse_window(const std::string& name) {
  if (name == "hann") return WindowKind::kHann;
  if (name == "hamming") return WindowKind::kHamming;
  if (name == "rect" || name == "rectangular") return WindowKind::kRectangular;
  throw InvalidParameter("unknown window '" + name + "'");
}

std::string window_name(WindowKind kind) {
  switch (kind) {
    case WindowKind::kHann: return "hann";
    case WindowKind::kHamming: return "hamming";
    case WindowKind::kRectangular: return "rect";
  }
  return "?";
}

std::vector<double> make_window(WindowKind kind, std::size_t n) {
  std::vector<double> w(n, 1.0);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(step * static_cast<double>(i));
    switch (kind) {
      case WindowKind::kHann: w[i] = 0.5 - 0.5 * c; break;
      case WindowKind::kHamming: w[i] = 0.54 - 0.46 * c; break;
      case WindowKind::kRectangular: break;
    }
  }
  return w;
}

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

void StftConfig::validate() const {
  if (!is_power_of_two(n_fft)) {
    throw InvalidParameter("n_fft must be a power of two, got " + std::to_string(n_fft));
  }
  if (hop_length == 0 || hop_length > n_fft) {
    throw InvalidParameter("hop_length must be in [1, n_fft], got " + std::to_string(hop_length));
  }
}

Spectrogram::Spectrogram(StftConfig cfg, int sample_rate, std::size_t n_frames,
                         std::optional<std::size_t> signal_length)
    : cfg_(cfg),
      sample_rate_(sample_rate),
      n_frames_(n_frames),
      signal_length_(signal_length),
      data_(n_frames * (cfg.n_fft / 2 + 1)) {
  cfg_.validate();
}

void Spectrogram::zero_row(std::size_t bin) {
  for (std::size_t t = 0; t < n_frames_; ++t) at(bin, t) = 0.0;
}

Spectrogram stft(const Waveform& x, const StftConfig& cfg) {
  cfg.validate();
  require_nonempty(x, "stft");
  const std::size_t n = cfg.n_fft;
  const std::size_t len = x.size();
  if (len < n) {
    throw InputTooShort("stft: signal has " + std::to_string(len) +
                        " samples, needs at least n_fft = " + std::to_string(n));
  }
  const std::size_t pad = n / 2;
  const std::size_t n_frames = len / cfg.hop_length + 1;

  // Reflection padding without repeating the edge sample.
  std::vector<double> padded(len + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) {
    padded[pad - 1 - i] = x.samples[i + 1];
    padded[pad + len + i] = x.samples[len - 2 - i];
  }
  std::copy(x.samples.begin(), x.samples.end(), padded.begin() + static_cast<std::ptrdiff_t>(pad));

  const std::vector<double> window = make_window(cfg.window, n);
  Spectrogram S(cfg, x.sample_rate, n_frames, len);
  std::vector<double> frame(n);
  for (std::size_t t = 0; t < n_frames; ++t) {
    const double* src = padded.data() + t * cfg.hop_length;
    for (std::size_t i = 0; i < n; ++i) frame[i] = src[i] * window[i];
    fft::rfft(frame, S.frame(t));
  }
  return S;
}

Waveform istft(const Spectrogram& S, std::optional<std::size_t> length) {
  const StftConfig& cfg = S.config();
  const std::size_t n = cfg.n_fft;
  const std::size_t hop = cfg.hop_length;
  const std::size_t pad = n / 2;
  const std::size_t n_frames = S.n_frames();

  std::size_t out_len = 0;
  if (length) {
    out_len = *length;
  } else if (S.signal_length()) {
    out_len = *S.signal_length();
  } else if (n_frames > 0) {
    out_len = hop * (n_frames - 1);
  }

  Waveform y;
  y.sample_rate = S.sample_rate();
  y.samples.assign(out_len, 0.0);
  if (n_frames == 0 || out_len == 0) return y;

  const std::size_t span = n + hop * (n_frames - 1);
  std::vector<double> acc(span, 0.0);
  std::vector<double> norm(span, 0.0);
  const std::vector<double> window = make_window(cfg.window, n);
  std::vector<double> frame(n);
  for (std::size_t t = 0; t < n_frames; ++t) {
    fft::irfft(S.frame(t), frame);
    double* a = acc.data() + t * hop;
    double* w2 = norm.data() + t * hop;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] += frame[i] * window[i];
      w2[i] += window[i] * window[i];
    }
  }

  const std::size_t covered = span - pad;
  const std::size_t limit = std::min(out_len, covered);
  for (std::size_t i = 0; i < limit; ++i) {
    const double w = norm[pad + i];
    if (w < 1e-10) {
      throw ReconstructionError("istft: window-square sum " + std::to_string(w) +
                                " below 1e-10 at output sample " + std::to_string(i));
    }
    y.samples[i] = acc[pad + i] / w;
  }
  return y;
}

std::vector<double> fft_frequencies(int sample_rate, std::size_t n_fft) {
  if (!is_power_of_two(n_fft)) {
    throw InvalidParameter("n_fft must be a power of two, got " + std::to_string(n_fft));
  }
  if (sample_rate <= 0) throw InvalidParameter("sample rate must be positive");
  std::vector<double> f(n_fft / 2 + 1);
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] = static_cast<double>(k) * sample_rate / static_cast<double>(n_fft);
  }
  return f;
}

}  // namespace spoofkit
