#include "spoofkit/metrics/detection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <vector>

#include "spoofkit/error.hpp"

namespace spoofkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_classes(std::span<const double> bonafide, std::span<const double> spoof) {
  if (bonafide.empty() || spoof.empty()) {
    throw InvalidParameter("metrics need at least one bonafide and one spoof trial");
  }
}

// Operating points at every distinct score, ascending, followed by +inf.
struct OperatingPoints {
  std::vector<double> threshold;
  std::vector<double> p_miss;
  std::vector<double> p_fa;
};

OperatingPoints operating_points(std::span<const double> bonafide, std::span<const double> spoof) {
  std::vector<double> b(bonafide.begin(), bonafide.end());
  std::vector<double> s(spoof.begin(), spoof.end());
  std::sort(b.begin(), b.end());
  std::sort(s.begin(), s.end());
  std::vector<double> all;
  all.reserve(b.size() + s.size());
  std::merge(b.begin(), b.end(), s.begin(), s.end(), std::back_inserter(all));
  all.erase(std::unique(all.begin(), all.end()), all.end());
  all.push_back(kInf);

  const double nb = static_cast<double>(b.size());
  const double ns = static_cast<double>(s.size());
  OperatingPoints op;
  op.threshold = all;
  op.p_miss.reserve(all.size());
  op.p_fa.reserve(all.size());
  for (double t : all) {
    const auto below_b = std::lower_bound(b.begin(), b.end(), t) - b.begin();
    const auto below_s = std::lower_bound(s.begin(), s.end(), t) - s.begin();
    op.p_miss.push_back(static_cast<double>(below_b) / nb);
    op.p_fa.push_back((ns - static_cast<double>(below_s)) / ns);
  }
  return op;
}

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

void DcfConfig::validate() const {
  if (!(p_target > 0.0 && p_target < 1.0)) throw ConfigError("dcf: p_target must be in (0, 1)");
  if (!(c_miss > 0.0)) throw ConfigError("dcf: c_miss must be positive");
  if (!(c_fa > 0.0)) throw ConfigError("dcf: c_fa must be positive");
}

double DcfConfig::normalizer() const { return std::min(c_miss * p_target, c_fa * (1.0 - p_target)); }

double DcfConfig::bayes_threshold() const {
  return std::log(c_fa * (1.0 - p_target) / (c_miss * p_target));
}

DcfConfig DcfConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open DCF config");
  DcfConfig cfg;
  bool have_p = false, have_m = false, have_f = false;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path.string() + ": expected key=value, got '" + line + "'");
    const std::string key = line.substr(0, eq);
    double v = 0;
    try {
      std::size_t used = 0;
      v = std::stod(line.substr(eq + 1), &used);
      if (used != line.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError(path.string() + ": bad value for '" + key + "'");
    }
    if (key == "p_target") {
      cfg.p_target = v, have_p = true;
    } else if (key == "c_miss") {
      cfg.c_miss = v, have_m = true;
    } else if (key == "c_fa") {
      cfg.c_fa = v, have_f = true;
    } else {
      throw ConfigError(path.string() + ": unknown key '" + key + "'");
    }
  }
  if (!have_p || !have_m || !have_f) throw ConfigError(path.string() + ": needs p_target, c_miss and c_fa");
  cfg.validate();
  return cfg;
}

EerResult eer(std::span<const double> bonafide, std::span<const double> spoof) {
  require_classes(bonafide, spoof);
  const OperatingPoints op = operating_points(bonafide, spoof);
  // Pmiss - Pfa rises monotonically from -1 (first point) to +1 (+inf).
  std::size_t j = 0;
  while (op.p_miss[j] - op.p_fa[j] < 0.0) ++j;
  EerResult r;
  const double dj = op.p_miss[j] - op.p_fa[j];
  if (dj == 0.0 || j == 0) {
    r.eer = op.p_miss[j];
    r.threshold = op.threshold[j];
  } else {
    const double di = op.p_miss[j - 1] - op.p_fa[j - 1];
    const double alpha = -di / (dj - di);
    r.eer = op.p_miss[j - 1] + alpha * (op.p_miss[j] - op.p_miss[j - 1]);
    r.threshold = std::isfinite(op.threshold[j])
                      ? op.threshold[j - 1] + alpha * (op.threshold[j] - op.threshold[j - 1])
                      : op.threshold[j - 1];
  }
  r.eer = std::min(r.eer, 0.5);
  return r;
}

double dcf_at(std::span<const double> bonafide, std::span<const double> spoof, const DcfConfig& cfg,
              double threshold) {
  require_classes(bonafide, spoof);
  cfg.validate();
  std::size_t miss = 0, fa = 0;
  for (double v : bonafide) miss += v < threshold;
  for (double v : spoof) fa += v >= threshold;
  const double p_miss = static_cast<double>(miss) / static_cast<double>(bonafide.size());
  const double p_fa = static_cast<double>(fa) / static_cast<double>(spoof.size());
  return (cfg.c_miss * cfg.p_target * p_miss + cfg.c_fa * (1.0 - cfg.p_target) * p_fa) / cfg.normalizer();
}

DcfResult min_dcf(std::span<const double> bonafide, std::span<const double> spoof, const DcfConfig& cfg) {
  require_classes(bonafide, spoof);
  cfg.validate();
  const OperatingPoints op = operating_points(bonafide, spoof);
  const double a = cfg.c_miss * cfg.p_target;
  const double b = cfg.c_fa * (1.0 - cfg.p_target);
  const double norm = cfg.normalizer();
  DcfResult best{kInf, 0.0};
  for (std::size_t j = 0; j < op.threshold.size(); ++j) {
    const double d = (a * op.p_miss[j] + b * op.p_fa[j]) / norm;
    if (d < best.dcf) best = {d, op.threshold[j]};
  }
  return best;
}

double act_dcf(std::span<const double> bonafide, std::span<const double> spoof, const DcfConfig& cfg) {
  cfg.validate();
  return dcf_at(bonafide, spoof, cfg, cfg.bayes_threshold());
}

double cllr(std::span<const double> bonafide, std::span<const double> spoof) {
  require_classes(bonafide, spoof);
  double cb = 0.0, cs = 0.0;
  for (double v : bonafide) cb += softplus(-v);
  for (double v : spoof) cs += softplus(v);
  cb /= static_cast<double>(bonafide.size());
  cs /= static_cast<double>(spoof.size());
  return 0.5 * (cb + cs) / std::numbers::ln2;
}

EerResult eer(const ScoreSet& s, const TrialLabels& l) {
  const auto split = split_by_label(s, l);
  return eer(split.bonafide, split.spoof);
}
DcfResult min_dcf(const ScoreSet& s, const TrialLabels& l, const DcfConfig& cfg) {
  const auto split = split_by_label(s, l);
  return min_dcf(split.bonafide, split.spoof, cfg);
}
double act_dcf(const ScoreSet& s, const TrialLabels& l, const DcfConfig& cfg) {
  const auto split = split_by_label(s, l);
  return act_dcf(split.bonafide, split.spoof, cfg);
}
double cllr(const ScoreSet& s, const TrialLabels& l) {
  const auto split = split_by_label(s, l);
  return cllr(split.bonafide, split.spoof);
}

MetricReport evaluate(const ScoreSet& s, const TrialLabels& l, const DcfConfig& cfg) {
  cfg.validate();
  const auto split = split_by_label(s, l);
  MetricReport r;
  const DcfResult m = min_dcf(split.bonafide, split.spoof, cfg);
  const EerResult e = eer(split.bonafide, split.spoof);
  r.min_dcf = m.dcf;
  r.min_dcf_threshold = m.threshold;
  r.act_dcf = act_dcf(split.bonafide, split.spoof, cfg);
  r.cllr = cllr(split.bonafide, split.spoof);
  r.eer = e.eer;
  r.eer_threshold = e.threshold;
  r.n_bonafide = split.bonafide.size();
  r.n_spoof = split.spoof.size();
  return r;
}

void MetricReport::write_text(std::ostream& out) const {
  out << std::fixed << std::setprecision(6);
  out << "minDCF  " << min_dcf << "  (threshold " << min_dcf_threshold << ")\n";
  out << "actDCF  " << act_dcf << '\n';
  out << "Cllr    " << cllr << '\n';
  out << "EER     " << eer * 100.0 << " %  (threshold " << eer_threshold << ")\n";
  out << "trials  " << n_bonafide << " bonafide, " << n_spoof << " spoof\n";
  out << std::defaultfloat;
}

void MetricReport::write_key_value(std::ostream& out) const {
  out << std::setprecision(17);
  out << "min_dcf=" << min_dcf << '\n'
      << "act_dcf=" << act_dcf << '\n'
      << "cllr=" << cllr << '\n'
      << "eer=" << eer << '\n'
      << "min_dcf_threshold=" << min_dcf_threshold << '\n'
      << "eer_threshold=" << eer_threshold << '\n'
      << "n_bonafide=" << n_bonafide << '\n'
      << "n_spoof=" << n_spoof << '\n';
  out << std::setprecision(6);
}

}  // namespace spoofkit
