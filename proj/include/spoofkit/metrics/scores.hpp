#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "spoofkit/duration/manifest.hpp"

namespace spoofkit {

struct ScoreEntry {
  std::string utt_id;
  double score = 0;  // higher = more bona fide
};

// Ordered trial scores; ids unique, scores finite.
struct ScoreSet {
  std::vector<ScoreEntry> entries;

  std::size_t size() const { return entries.size(); }
  void validate() const;

  // TSV `utt_id\tscore`.
  static ScoreSet load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

// utt_id -> bona fide / spoof.
struct TrialLabels {
  std::unordered_map<std::string, Label> labels;

  // TSV `utt_id\tlabel`, labels exactly `bonafide` / `spoof`.
  static TrialLabels load(const std::filesystem::path& path);
  static TrialLabels from_manifest(const Manifest& m);
};

// Scores split by class, in input order.
struct SplitScores {
  std::vector<double> bonafide;
  std::vector<double> spoof;
};

// Throws TrialMismatch listing every scored id without a label, and
// InvalidParameter when either class ends up empty.
SplitScores split_by_label(const ScoreSet& scores, const TrialLabels& labels);

}  // namespace spoofkit
