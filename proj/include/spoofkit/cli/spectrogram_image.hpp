#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "spoofkit/audio/stft.hpp"

namespace spoofkit::cli {

// 8-bit grayscale image, row-major, row 0 at the top.
struct GrayImage {
  std::size_t width = 0, height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
  // Binary portable graymap (P5, maxval 255).
  void write_pgm(const std::filesystem::path& path) const;
};

// One column per frame, one row per bin, highest frequency on top.
// Magnitudes are in dB relative to a full-scale sine and mapped linearly
// from [-80, 0] dB onto [0, 255]; anything below -80 dB is black.
GrayImage spectrogram_image(const Spectrogram& S);

}  // namespace spoofkit::cli
