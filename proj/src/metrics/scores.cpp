#include "spoofkit/metrics/scores.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <unordered_set>

#include "spoofkit/error.hpp"

namespace spoofkit {
namespace {

template <class Fn>
void for_each_row(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string() + ": cannot open");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw FormatError(where + ": expected exactly two tab-separated fields");
    }
    fn(line.substr(0, tab), line.substr(tab + 1), where);
  }
}

}  // namespace

void ScoreSet::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& e : entries) {
    if (!seen.insert(e.utt_id).second) throw FormatError("score set: duplicate utt_id '" + e.utt_id + "'");
    if (!std::isfinite(e.score)) throw FormatError("score set: non-finite score for '" + e.utt_id + "'");
  }
}

ScoreSet ScoreSet::load(const std::filesystem::path& path) {
  ScoreSet s;
  for_each_row(path, [&](const std::string& id, const std::string& val, const std::string& where) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc() || ptr != val.data() + val.size()) {
      throw FormatError(where + ": bad score '" + val + "'");
    }
    s.entries.push_back({id, v});
  });
  s.validate();
  return s;
}

void ScoreSet::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw FormatError(path.string() + ": cannot open for writing");
  out << std::setprecision(17);
  for (const auto& e : entries) out << e.utt_id << '\t' << e.score << '\n';
}

TrialLabels TrialLabels::load(const std::filesystem::path& path) {
  TrialLabels t;
  for_each_row(path, [&](const std::string& id, const std::string& lab, const std::string& where) {
    Label l;
    if (lab == "bonafide") {
      l = Label::kBonafide;
    } else if (lab == "spoof") {
      l = Label::kSpoof;
    } else {
      throw FormatError(where + ": label must be 'bonafide' or 'spoof', got '" + lab + "'");
    }
    if (!t.labels.emplace(id, l).second) throw FormatError(where + ": duplicate utt_id '" + id + "'");
  });
  return t;
}

TrialLabels TrialLabels::from_manifest(const Manifest& m) {
  TrialLabels t;
  for (const auto& r : m.records) {
    if (r.label != Label::kUnknown) t.labels.emplace(r.utt_id, r.label);
  }
  return t;
}

SplitScores split_by_label(const ScoreSet& scores, const TrialLabels& labels) {
  SplitScores out;
  std::vector<std::string> missing;
  for (const auto& e : scores.entries) {
    if (!std::isfinite(e.score)) throw FormatError("non-finite score for '" + e.utt_id + "'");
    const auto it = labels.labels.find(e.utt_id);
    if (it == labels.labels.end() || it->second == Label::kUnknown) {
      missing.push_back(e.utt_id);
      continue;
    }
    (it->second == Label::kBonafide ? out.bonafide : out.spoof).push_back(e.score);
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    std::string msg = "no label for " + std::to_string(missing.size()) + " scored trial(s):";
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) msg += " " + missing[i];
    if (missing.size() > 20) msg += " ...";
    throw TrialMismatch(msg, std::move(missing));
  }
  if (out.bonafide.empty() || out.spoof.empty()) {
    throw InvalidParameter("metrics need at least one bonafide and one spoof trial");
  }
  return out;
}

}  // namespace spoofkit
