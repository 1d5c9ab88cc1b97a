#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "spoofkit/audio/waveform.hpp"
#include "spoofkit/rng.hpp"

namespace spoofkit {

enum class BankCategory { kNoise, kMusic, kRir };

BankCategory parse_bank_category(const std::string& s);
std::string bank_category_name(BankCategory c);

// Additive noise, music and room impulse responses available to a policy.
class NoiseBank {
 public:
  NoiseBank() = default;

  // Manifest lines are `<path>\t<category>`; relative paths resolve against
  // the manifest's directory. Blank lines and `#` comments are skipped.
  static NoiseBank load(const std::filesystem::path& manifest);

  // All entries must share one sample rate.
  void add(Waveform w, BankCategory category);

  std::size_t count(BankCategory c) const { return entries_[index(c)].size(); }
  int sample_rate() const { return sample_rate_; }

  // Uniform over the union of entries in `categories`. Throws ConfigError if
  // any listed category is empty.
  const Waveform& sample(const std::vector<BankCategory>& categories, Rng& rng) const;

 private:
  static std::size_t index(BankCategory c) { return static_cast<std::size_t>(c); }
  std::array<std::vector<Waveform>, 3> entries_;
  int sample_rate_ = 0;
};

}  // namespace spoofkit
