#pragma once

#include <filesystem>
#include <ostream>
#include <span>

#include "spoofkit/metrics/scores.hpp"

namespace spoofkit {

// Detection cost parameters. There are deliberately no defaults.
struct DcfConfig {
  double p_target = 0;
  double c_miss = 0;
  double c_fa = 0;

  void validate() const;
  // min(c_miss * p_target, c_fa * (1 - p_target))
  double normalizer() const;
  // log(c_fa (1 - p_target) / (c_miss p_target))
  double bayes_threshold() const;

  // `key=value` lines with keys p_target, c_miss, c_fa.
  static DcfConfig load(const std::filesystem::path& path);
};

// Operating-point convention: a trial is accepted as bona fide iff
// score >= threshold. Pmiss(t) = #{bona < t} / N_bona,
// Pfa(t) = #{spoof >= t} / N_spoof.

struct EerResult {
  double eer = 0;        // in [0, 0.5]
  double threshold = 0;
};

struct DcfResult {
  double dcf = 0;
  double threshold = 0;  // +inf when rejecting everything is optimal
};

// Linear interpolation between the adjacent operating points where
// Pmiss - Pfa changes sign; capped at 0.5.
EerResult eer(std::span<const double> bonafide, std::span<const double> spoof);
// Normalised DCF minimised over every distinct operating point.
DcfResult min_dcf(std::span<const double> bonafide, std::span<const double> spoof, const DcfConfig& cfg);
// Normalised DCF at the Bayes threshold; scores are natural-log LLRs.
double act_dcf(std::span<const double> bonafide, std::span<const double> spoof, const DcfConfig& cfg);
// Mean log2 cost of LLR scores, halved over the two classes.
double cllr(std::span<const double> bonafide, std::span<const double> spoof);

// Normalised DCF at an arbitrary threshold.
double dcf_at(std::span<const double> bonafide, std::span<const double> spoof, const DcfConfig& cfg,
              double threshold);

EerResult eer(const ScoreSet& s, const TrialLabels& l);
DcfResult min_dcf(const ScoreSet& s, const TrialLabels& l, const DcfConfig& cfg);
double act_dcf(const ScoreSet& s, const TrialLabels& l, const DcfConfig& cfg);
double cllr(const ScoreSet& s, const TrialLabels& l);

struct MetricReport {
  double min_dcf = 0;
  double min_dcf_threshold = 0;
  double act_dcf = 0;
  double cllr = 0;
  double eer = 0;
  double eer_threshold = 0;
  std::size_t n_bonafide = 0, n_spoof = 0;

  // Fixed order: minDCF, actDCF, Cllr, EER.
  void write_text(std::ostream& out) const;
  void write_key_value(std::ostream& out) const;
};

MetricReport evaluate(const ScoreSet& s, const TrialLabels& l, const DcfConfig& cfg);

}  // namespace spoofkit
