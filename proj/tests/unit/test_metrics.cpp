#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "oracles.hpp"
#include "spoofkit/error.hpp"
#include "spoofkit/metrics/detection.hpp"
#include "spoofkit/rng.hpp"

using namespace spoofkit;

namespace {
using V = std::vector<double>;
const DcfConfig kCfg{0.05, 1.0, 10.0};
const oracle::Dcf kOracleCfg{0.05, 1.0, 10.0};
}  // namespace

TEST_CASE("EER examples") {
  CHECK(eer(V{0.9, 0.8}, V{0.2, 0.1}).eer == 0.0);
  CHECK(eer(V{0.2, 0.1}, V{0.9, 0.8}).eer == 0.5);
  // Linear interpolation passes through the operating point (0.5, 0.5) at t = 2.
  const auto r = eer(V{3, 1}, V{2, 0});
  CHECK(r.eer == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(oracle::sweep({3, 1}, {2, 0}, kOracleCfg).eer == doctest::Approx(0.5));
  CHECK(r.threshold == 2.0);
}

TEST_CASE("EER interpolates between operating points") {
  // 3 bona vs 2 spoof: Pmiss - Pfa changes sign between t=2 (1/3 - 1/2) and t=3 (1/3 - 0).
  const auto r = eer(V{1, 3, 5}, V{0, 2});
  CHECK(r.eer == doctest::Approx(1.0 / 3.0));
  CHECK(oracle::sweep({1, 3, 5}, {0, 2}, kOracleCfg).eer == doctest::Approx(r.eer).epsilon(1e-12));
}

TEST_CASE("minDCF and actDCF examples") {
  const auto m = min_dcf(V{3, 1}, V{2, 0}, kCfg);
  // Normalizer min(0.05, 9.5) = 0.05; at t=3: Pmiss 1/2, Pfa 0 -> 0.025/0.05.
  CHECK(m.dcf == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.threshold == 3.0);
  CHECK(oracle::sweep({3, 1}, {2, 0}, kOracleCfg).min_dcf == doctest::Approx(0.5).epsilon(1e-12));

  CHECK(kCfg.bayes_threshold() == doctest::Approx(std::log(190.0)));
  // log 190 ~ 5.25 rejects everything: Pmiss = 1, Pfa = 0.
  CHECK(act_dcf(V{3, 1}, V{2, 0}, kCfg) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK(min_dcf(V{0.9, 0.8}, V{0.2, 0.1}, kCfg).dcf == 0.0);
  CHECK(min_dcf(V{1, 1, 1}, V{1, 1}, kCfg).dcf == 1.0);
  CHECK(min_dcf(V{1, 1, 1}, V{1, 1}, DcfConfig{0.5, 1, 1}).dcf == 1.0);

  // Calibrated LLRs on either side of t* cost nothing.
  CHECK(act_dcf(V{8, 9}, V{-3, 1}, kCfg) == 0.0);
}

TEST_CASE("Cllr anchors") {
  CHECK(cllr(V{0, 0, 0}, V{0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cllr(V{50, 50}, V{-50}) < 1e-10);
  CHECK(cllr(V{1.0}, V{-1.0}) == doctest::Approx(std::log2(1.0 + std::exp(-1.0))).epsilon(1e-15));
  CHECK(cllr(V{1.0}, V{-1.0}) == doctest::Approx(0.451941).epsilon(1e-6));
  // Badly miscalibrated but well separated.
  CHECK(cllr(V{-1000}, V{1000}) == doctest::Approx(1000.0 / std::log(2.0)));
}

TEST_CASE("random score sets agree with the sweep oracle") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    V b, s;
    const auto nb = 1 + rng.below(10), ns = 1 + rng.below(10);
    // Scores on a 0.01 grid so ties occur and every gap is resolved by the sweep.
    for (std::size_t i = 0; i < nb; ++i) b.push_back(std::round(rng.uniform(-2, 3) * 100) / 100);
    for (std::size_t i = 0; i < ns; ++i) s.push_back(std::round(rng.uniform(-3, 2) * 100) / 100);
    const auto o = oracle::sweep(b, s, kOracleCfg);
    REQUIRE(o.resolved);
    CHECK(std::abs(eer(b, s).eer - o.eer) <= 1e-9);
    CHECK(std::abs(min_dcf(b, s, kCfg).dcf - o.min_dcf) <= 1e-9);
    CHECK(std::abs(cllr(b, s) - oracle::cllr(b, s)) <= 1e-12);
    CHECK(act_dcf(b, s, kCfg) >= min_dcf(b, s, kCfg).dcf);
  }
}

TEST_CASE("monotone transforms leave EER and minDCF alone, not actDCF or Cllr") {
  Rng rng(7);
  V b, s;
  for (int i = 0; i < 30; ++i) b.push_back(rng.gaussian() + 1.5);
  for (int i = 0; i < 40; ++i) s.push_back(rng.gaussian() - 1.0);
  auto f = [](double x) { return std::exp(0.7 * x) + 3.0 * x - 4.0; };
  V fb, fs;
  for (double x : b) fb.push_back(f(x));
  for (double x : s) fs.push_back(f(x));
  CHECK(eer(fb, fs).eer == doctest::Approx(eer(b, s).eer).epsilon(1e-12));
  CHECK(min_dcf(fb, fs, kCfg).dcf == doctest::Approx(min_dcf(b, s, kCfg).dcf).epsilon(1e-12));
  CHECK(cllr(fb, fs) != doctest::Approx(cllr(b, s)));
  CHECK(act_dcf(fb, fs, kCfg) != doctest::Approx(act_dcf(b, s, kCfg)));
}

TEST_CASE("tie convention: score equal to the threshold is accepted") {
  CHECK(dcf_at(V{1.0}, V{1.0}, DcfConfig{0.5, 1, 1}, 1.0) == 1.0);  // Pmiss 0, Pfa 1
  CHECK(dcf_at(V{1.0}, V{0.0}, DcfConfig{0.5, 1, 1}, 1.0) == 0.0);
}

TEST_CASE("errors: missing labels, one class, bad config") {
  ScoreSet scores;
  scores.entries = {{"a", 1.0}, {"b", 0.0}, {"c", 2.0}, {"d", -1.0}};
  TrialLabels labels;
  labels.labels = {{"a", Label::kBonafide}, {"b", Label::kSpoof}};
  try {
    (void)eer(scores, labels);
    FAIL("expected TrialMismatch");
  } catch (const TrialMismatch& e) {
    CHECK(e.ids() == std::vector<std::string>{"c", "d"});
    CHECK(std::string(e.what()).find("c d") != std::string::npos);
  }
  CHECK_THROWS_AS(eer(V{}, V{1.0}), InvalidParameter);
  CHECK_THROWS_AS(min_dcf(V{1}, V{0}, DcfConfig{0.0, 1, 1}), ConfigError);
  CHECK_THROWS_AS(min_dcf(V{1}, V{0}, DcfConfig{0.5, 0, 1}), ConfigError);
  CHECK_THROWS_AS(act_dcf(V{1}, V{0}, DcfConfig{0.5, 1, -1}), ConfigError);
}

TEST_CASE("score, key and DCF files") {
  const auto scores = ScoreSet::load(SPOOFKIT_TEST_DATA "/four_trial_scores.tsv");
  const auto key = TrialLabels::load(SPOOFKIT_TEST_DATA "/four_trial_key.tsv");
  const auto cfg = DcfConfig::load(SPOOFKIT_TEST_DATA "/dcf_example.cfg");
  CHECK(cfg.p_target == 0.05);
  CHECK(cfg.c_fa == 10.0);
  const auto r = evaluate(scores, key, cfg);
  CHECK(r.min_dcf == doctest::Approx(0.5));
  CHECK(r.act_dcf == doctest::Approx(1.0));
  CHECK(r.eer == doctest::Approx(0.5));
  CHECK(r.n_bonafide == 2);
  CHECK(r.n_spoof == 2);

  std::ostringstream text;
  r.write_text(text);
  const auto t = text.str();
  CHECK(t.find("minDCF") < t.find("actDCF"));
  CHECK(t.find("actDCF") < t.find("Cllr"));
  CHECK(t.find("Cllr") < t.find("EER"));

  testing_util::TempDir tmp("scores");
  testing_util::spit(tmp / "dup.tsv", "a\t1\na\t2\n");
  CHECK_THROWS_AS(ScoreSet::load(tmp / "dup.tsv"), FormatError);
  testing_util::spit(tmp / "nan.tsv", "a\tnan\n");
  CHECK_THROWS_AS(ScoreSet::load(tmp / "nan.tsv"), FormatError);
  testing_util::spit(tmp / "key.tsv", "a\tfake\n");
  CHECK_THROWS_AS(TrialLabels::load(tmp / "key.tsv"), FormatError);
  testing_util::spit(tmp / "cfg", "p_target=0.05\nc_miss=1\n");
  CHECK_THROWS_AS(DcfConfig::load(tmp / "cfg"), ConfigError);

  scores.save(tmp / "round.tsv");
  const auto back = ScoreSet::load(tmp / "round.tsv");
  REQUIRE(back.size() == 4);
  CHECK(back.entries[2].utt_id == "E_03");
  CHECK(back.entries[2].score == 1.0);
}
