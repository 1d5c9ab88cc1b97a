#include "spoofkit/augment/noise_bank.hpp"

#include <fstream>
#include <sstream>

#include "spoofkit/audio/wav.hpp"
#include "spoofkit/error.hpp"

namespace spoofkit {

BankCategory parse_bank_category(const std::string& s) {
  if (s == "noise") return BankCategory::kNoise;
  if (s == "music") return BankCategory::kMusic;
  if (s == "rir") return BankCategory::kRir;
  throw ConfigError("unknown noise-bank category '" + s + "' (expected noise, music or rir)");
}

std::string bank_category_name(BankCategory c) {
  switch (c) {
    case BankCategory::kNoise: return "noise";
    case BankCategory::kMusic: return "music";
    case BankCategory::kRir: return "rir";
  }
  return "?";
}

NoiseBank NoiseBank::load(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw ConfigError(manifest.string() + ": cannot open noise-bank manifest");
  NoiseBank bank;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ConfigError(manifest.string() + ":" + std::to_string(lineno) +
                        ": expected '<path>\\t<category>'");
    }
    std::filesystem::path p = line.substr(0, tab);
    if (p.is_relative()) p = manifest.parent_path() / p;
    bank.add(read_wav(p), parse_bank_category(line.substr(tab + 1)));
  }
  return bank;
}

void NoiseBank::add(Waveform w, BankCategory category) {
  require_nonempty(w, "noise bank");
  if (sample_rate_ != 0 && w.sample_rate != sample_rate_) {
    throw ConfigError("noise bank: entry at " + std::to_string(w.sample_rate) +
                      " Hz, bank is at " + std::to_string(sample_rate_) + " Hz");
  }
  sample_rate_ = w.sample_rate;
  entries_[index(category)].push_back(std::move(w));
}

const Waveform& NoiseBank::sample(const std::vector<BankCategory>& categories, Rng& rng) const {
  std::size_t total = 0;
  for (BankCategory c : categories) {
    if (entries_[index(c)].empty()) {
      throw ConfigError("policy references noise-bank category '" + bank_category_name(c) +
                        "', which is empty");
    }
    total += entries_[index(c)].size();
  }
  if (total == 0) throw ConfigError("policy step lists no noise-bank categories");
  std::size_t pick = rng.below(total);
  for (BankCategory c : categories) {
    const auto& list = entries_[index(c)];
    if (pick < list.size()) return list[pick];
    pick -= list.size();
  }
  throw Error("unreachable");
}

}  // namespace spoofkit
