#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "spoofkit/audio/waveform.hpp"

namespace testing_util {

inline spoofkit::Waveform sine(double f, double seconds, double amp = 0.5, int sr = 16000, double phase = 0) {
  spoofkit::Waveform w;
  w.sample_rate = sr;
  w.samples.resize(static_cast<std::size_t>(std::llround(seconds * sr)));
  for (std::size_t i = 0; i < w.size(); ++i)
    w.samples[i] = amp * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / sr + phase);
  return w;
}

inline spoofkit::Waveform noise(std::size_t n, std::uint64_t seed, double amp = 0.3, int sr = 16000) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  spoofkit::Waveform w;
  w.sample_rate = sr;
  w.samples.resize(n);
  for (double& v : w.samples) v = u(g);
  return w;
}

inline double rel_rms_error(const std::vector<double>& got, const std::vector<double>& ref, std::size_t from = 0,
                            std::size_t to = SIZE_MAX) {
  to = std::min({to, got.size(), ref.size()});
  double num = 0, den = 0;
  for (std::size_t i = from; i < to; ++i) {
    num += (got[i] - ref[i]) * (got[i] - ref[i]);
    den += ref[i] * ref[i];
  }
  return std::sqrt(num / den);
}

// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("spoofkit_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path operator/(const std::string& s) const { return path / s; }
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace testing_util
