#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace spoofkit {

// Linear countermeasure: score = w . features + b, read as a bona fide
// logit (natural-log LLR under equal priors).
struct DeskModel {
  std::vector<double> weights;
  double bias = 0;

  std::size_t dim() const { return weights.size(); }
  double score(std::span<const double> features) const;

  // Binary, little-endian: "SKDM", version byte, u32 dim, dim f64 weights,
  // f64 bias.
  void save(const std::filesystem::path& path) const;
  static DeskModel load(const std::filesystem::path& path);
};

}  // namespace spoofkit
