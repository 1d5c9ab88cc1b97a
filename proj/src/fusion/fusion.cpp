#include "spoofkit/fusion/fusion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

#include "spoofkit/error.hpp"

namespace spoofkit {
namespace {

constexpr double kWeightTolerance = 1e-9;
constexpr std::size_t kMaxGridSystems = 5;

std::vector<double> standardized(const ScoreSet& s) {
  std::vector<double> v;
  v.reserve(s.size());
  double mean = 0.0;
  for (const auto& e : s.entries) mean += e.score;
  mean /= static_cast<double>(s.size());
  double var = 0.0;
  for (const auto& e : s.entries) var += (e.score - mean) * (e.score - mean);
  var /= static_cast<double>(s.size());
  const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
  for (const auto& e : s.entries) v.push_back((e.score - mean) / sd);
  return v;
}

// Checks that every set covers exactly the ids of `reference`.
void check_same_trials(const std::string& ref_id, const ScoreSet& reference, const std::string& id,
                       const ScoreSet& other) {
  std::set<std::string> a, b;
  for (const auto& e : reference.entries) a.insert(e.utt_id);
  for (const auto& e : other.entries) b.insert(e.utt_id);
  if (a == b) return;
  std::vector<std::string> diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
  std::string msg = "systems '" + ref_id + "' and '" + id + "' cover different trials; symmetric difference:";
  for (std::size_t i = 0; i < diff.size() && i < 20; ++i) msg += " " + diff[i];
  if (diff.size() > 20) msg += " ...";
  throw TrialMismatch(msg, std::move(diff));
}

}  // namespace

void FusionSpec::validate() const {
  if (systems.empty()) throw ConfigError("fusion spec: no systems");
  std::set<std::string> ids;
  double sum = 0.0;
  for (const auto& s : systems) {
    if (!ids.insert(s.id).second) throw ConfigError("fusion spec: duplicate system '" + s.id + "'");
    if (!(s.weight >= 0.0) || !std::isfinite(s.weight)) {
      throw ConfigError("fusion spec: weight of '" + s.id + "' must be a non-negative number");
    }
    sum += s.weight;
  }
  if (std::abs(sum - 1.0) > kWeightTolerance) {
    std::ostringstream msg;
    msg << std::setprecision(17) << "fusion spec: weights sum to " << sum << ", expected 1";
    throw ConfigError(msg.str());
  }
}

FusionSpec FusionSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open fusion spec");
  FusionSpec spec;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (tab == std::string::npos) throw ConfigError(where + ": expected 'system_id\\tweight'");
    const std::string val = line.substr(tab + 1);
    double w = 0;
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), w);
    if (ec != std::errc() || ptr != val.data() + val.size()) throw ConfigError(where + ": bad weight '" + val + "'");
    spec.systems.push_back({line.substr(0, tab), w});
  }
  spec.validate();
  return spec;
}

void FusionSpec::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string() + ": cannot open for writing");
  out << std::setprecision(17);
  for (const auto& s : systems) out << s.id << '\t' << s.weight << '\n';
}

FusionSpec FusionSpec::preset(const std::string& name) {
  FusionSpec spec;
  if (name == "paper-7way") {
    spec.systems = {{"cm1", 0.3}, {"cm2", 0.2}, {"cm3", 0.1}, {"cm4", 0.1},
                    {"cm5", 0.1}, {"cm6", 0.1}, {"cm7", 0.1}};
  } else if (name == "equal-4way") {
    spec.systems = {{"cm1", 0.25}, {"cm2", 0.25}, {"cm3", 0.25}, {"cm4", 0.25}};
  } else {
    throw ConfigError("unknown fusion preset '" + name + "' (known: paper-7way, equal-4way)");
  }
  spec.validate();
  return spec;
}

ScoreSet fuse(const std::map<std::string, ScoreSet>& score_sets, const FusionSpec& spec,
              const FuseOptions& opts) {
  spec.validate();
  std::vector<const ScoreSet*> sets;
  for (const auto& s : spec.systems) {
    const auto it = score_sets.find(s.id);
    if (it == score_sets.end()) throw ConfigError("fusion: no scores for system '" + s.id + "'");
    it->second.validate();
    sets.push_back(&it->second);
  }
  const ScoreSet& first = *sets.front();
  for (std::size_t i = 1; i < sets.size(); ++i) {
    check_same_trials(spec.systems.front().id, first, spec.systems[i].id, *sets[i]);
  }

  // Per-system score lookup aligned to the first system's order.
  const std::size_t n = first.size();
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t t = 0; t < n; ++t) pos.emplace(first.entries[t].utt_id, t);

  ScoreSet out;
  out.entries.resize(n);
  for (std::size_t t = 0; t < n; ++t) out.entries[t] = {first.entries[t].utt_id, 0.0};
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const ScoreSet& s = *sets[i];
    std::vector<double> values;
    if (opts.znorm) {
      values = standardized(s);
    } else {
      values.reserve(s.size());
      for (const auto& e : s.entries) values.push_back(e.score);
    }
    const double w = spec.systems[i].weight;
    for (std::size_t k = 0; k < s.size(); ++k) out.entries[pos.at(s.entries[k].utt_id)].score += w * values[k];
  }
  return out;
}

GridSearchResult grid_search_weights(const std::vector<std::pair<std::string, ScoreSet>>& systems,
                                     const TrialLabels& labels, FusionObjective objective,
                                     double step, const std::optional<DcfConfig>& dcf) {
  if (systems.empty()) throw ConfigError("grid search: no systems");
  if (systems.size() > kMaxGridSystems) {
    throw ConfigError("grid search: " + std::to_string(systems.size()) +
                      " systems requested; the simplex grid grows combinatorially, so at most " +
                      std::to_string(kMaxGridSystems) +
                      " are supported. Fuse related systems first or pass weights explicitly.");
  }
  if (!(step > 0.0 && step <= 1.0)) throw ConfigError("grid search: step must be in (0, 1]");
  const auto units = static_cast<int>(std::llround(1.0 / step));
  if (std::abs(units * step - 1.0) > kWeightTolerance) {
    throw ConfigError("grid search: step " + std::to_string(step) + " does not divide 1 evenly");
  }
  if (objective == FusionObjective::kMinDcf && !dcf) throw ConfigError("grid search: min_dcf objective needs a DCF config");

  std::map<std::string, ScoreSet> by_id;
  for (const auto& [id, s] : systems) {
    if (!by_id.emplace(id, s).second) throw ConfigError("grid search: duplicate system '" + id + "'");
  }

  auto score = [&](const FusionSpec& spec) {
    const ScoreSet fused = fuse(by_id, spec);
    const auto split = split_by_label(fused, labels);
    return objective == FusionObjective::kEer ? eer(split.bonafide, split.spoof).eer
                                              : min_dcf(split.bonafide, split.spoof, *dcf).dcf;
  };

  const std::size_t k = systems.size();
  std::vector<int> counts(k, 0);
  GridSearchResult best;
  best.objective = std::numeric_limits<double>::infinity();

  // Enumerate compositions of `units` into k parts in lexicographically
  // descending order; only strict improvements replace the incumbent.
  auto visit = [&](auto&& self, std::size_t i, int remaining) -> void {
    if (i + 1 == k) {
      counts[i] = remaining;
      FusionSpec spec;
      for (std::size_t s = 0; s < k; ++s) {
        spec.systems.push_back({systems[s].first, static_cast<double>(counts[s]) / units});
      }
      const double obj = score(spec);
      ++best.evaluated;
      if (obj < best.objective - 1e-12) {
        best.objective = obj;
        best.spec = std::move(spec);
      }
      return;
    }
    for (int c = remaining; c >= 0; --c) {
      counts[i] = c;
      self(self, i + 1, remaining - c);
    }
  };
  visit(visit, 0, units);
  return best;
}

}  // namespace spoofkit
