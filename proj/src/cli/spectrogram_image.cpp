#include "spoofkit/cli/spectrogram_image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "spoofkit/error.hpp"

namespace spoofkit::cli {

namespace {
constexpr double kFloorDb = -80.0;
}

GrayImage spectrogram_image(const Spectrogram& S) {
  GrayImage img;
  img.width = S.n_frames();
  img.height = S.n_bins();
  img.pixels.assign(img.width * img.height, 0);

  // A full-scale sine peaks at |X| = sum(w) / 2.
  double wsum = 0;
  for (double w : make_window(S.config().window, S.config().n_fft)) wsum += w;
  const double ref = wsum / 2.0;

  for (std::size_t t = 0; t < img.width; ++t)
    for (std::size_t k = 0; k < img.height; ++k) {
      const double mag = std::abs(S.at(k, t)) / ref;
      if (!(mag > 0)) continue;
      const double db = std::clamp(20.0 * std::log10(mag), kFloorDb, 0.0);
      const double v = std::nearbyint(255.0 * (db - kFloorDb) / -kFloorDb);
      img.pixels[(img.height - 1 - k) * img.width + t] = static_cast<std::uint8_t>(v);
    }
  return img;
}

void GrayImage::write_pgm(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FormatError(path.string() + ": cannot open for writing");
  const std::string header = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  f.write(header.data(), static_cast<std::streamsize>(header.size()));
  f.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (!f) throw FormatError(path.string() + ": write failed");
}

}  // namespace spoofkit::cli
