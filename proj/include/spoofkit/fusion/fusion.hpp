#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spoofkit/metrics/detection.hpp"
#include "spoofkit/metrics/scores.hpp"

namespace spoofkit {

struct FusionSystem {
  std::string id;
  double weight = 0;
};

// Ordered (system, weight) list; weights non-negative and summing to 1
// within 1e-9.
struct FusionSpec {
  std::vector<FusionSystem> systems;

  void validate() const;

  // TSV `system_id\tweight`.
  static FusionSpec load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  // Named presets: `paper-7way` (0.3, 0.2, then 0.1 x 5 over cm1..cm7) and
  // `equal-4way` (0.25 x 4 over cm1..cm4).
  static FusionSpec preset(const std::string& name);
};

struct FuseOptions {
  // Standardise each system to zero mean, unit variance before weighting.
  bool znorm = false;
};

// Per-trial weighted sum; output order follows the first spec system.
ScoreSet fuse(const std::map<std::string, ScoreSet>& score_sets, const FusionSpec& spec,
              const FuseOptions& opts = {});

enum class FusionObjective { kEer, kMinDcf };

struct GridSearchResult {
  FusionSpec spec;
  double objective = 0;
  std::size_t evaluated = 0;
};

// Exhaustive search over the simplex grid with spacing `step`. Among equal
// objectives the weight vector that is lexicographically largest (most
// weight on earlier systems) wins, so unit vectors favour system 1.
// At most 5 systems. `dcf` is required for kMinDcf.
GridSearchResult grid_search_weights(const std::vector<std::pair<std::string, ScoreSet>>& systems,
                                     const TrialLabels& labels, FusionObjective objective,
                                     double step, const std::optional<DcfConfig>& dcf = std::nullopt);

}  // namespace spoofkit
