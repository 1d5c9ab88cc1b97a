#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "spoofkit/audio/wav.hpp"
#include "spoofkit/augment/freqmask.hpp"
#include "spoofkit/cli/commands.hpp"
#include "spoofkit/cli/run_config.hpp"
#include "spoofkit/cli/spectrogram_image.hpp"
#include "spoofkit/desk/model.hpp"
#include "spoofkit/error.hpp"
#include "spoofkit/metrics/detection.hpp"

using namespace spoofkit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(SPOOFKIT_TEST_DATA) + "/" + name; }

// Runs the installed binary; returns its exit status.
int run_tool(const std::string& args, const fs::path& stderr_to) {
  const std::string cmd = std::string(SPOOFKIT_TOOL) + " " + args + " >/dev/null 2>" + stderr_to.string();
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[e.path().lexically_relative(root).generic_string()] = testing_util::slurp(e.path());
  return out;
}

void make_wavs(const fs::path& dir, int n) {
  fs::create_directories(dir / "sub");
  for (int i = 0; i < n; ++i) {
    auto w = testing_util::noise(8000 + 1000 * static_cast<std::size_t>(i), 100 + static_cast<std::uint64_t>(i), 0.4);
    write_wav(dir / (i % 2 ? "sub/f" : "f") += std::to_string(i) + ".wav", w);
  }
}

}  // namespace

TEST_CASE("run config: strict keys, shared stft, seeds and paths") {
  const json j = json::parse(R"({
    "seed": 9,
    "stft": {"n_fft": 512, "hop_length": 128},
    "features": {"n_bands": 12},
    "train": {"lr0": 0.01, "class_weights": {"bonafide": 5, "spoof": 1}},
    "policy": {"steps": [{"op": "freqmask", "p": 0.3}]},
    "dcf": {"p_target": 0.05, "c_miss": 1, "c_fa": 10},
    "paths": {"train_manifest": "train.tsv", "model": "/abs/model.bin"}
  })");
  const auto c = cli::RunConfig::from_json(j, "/base");
  CHECK(c.seed == 9);
  CHECK(c.features.stft.n_fft == 512);
  CHECK(c.policy.stft.hop_length == 128);
  CHECK(c.policy.seed == 9);
  CHECK(c.train.seed == 9);
  CHECK(c.train.lr0 == 0.01);
  CHECK(c.train.weight_bonafide == 5);
  CHECK(c.train.epochs == 20);
  CHECK(c.features.n_bands == 12);
  REQUIRE(c.dcf);
  CHECK(c.dcf->c_fa == 10);
  CHECK(*c.paths.train_manifest == fs::path("/base/train.tsv"));
  CHECK(*c.paths.model == fs::path("/abs/model.bin"));

  const auto back = cli::RunConfig::from_json(c.to_json(), "/base");
  CHECK(back.to_json() == c.to_json());

  auto bad = [&](const char* patch) {
    json k = j;
    k.merge_patch(json::parse(patch));
    return k;
  };
  CHECK_THROWS_AS(cli::RunConfig::from_json(bad(R"({"colour": 1})")), ConfigError);
  CHECK_THROWS_AS(cli::RunConfig::from_json(bad(R"({"train": {"momentum": 0.9}})")), ConfigError);
  CHECK_THROWS_AS(cli::RunConfig::from_json(bad(R"({"stft": {"n_fft": 500}})")), ConfigError);
  CHECK_THROWS_AS(cli::RunConfig::from_json(bad(R"({"policy": {"stft": {"n_fft": 256}}})")), ConfigError);
  CHECK_THROWS_AS(cli::RunConfig::from_json(bad(R"({"dcf": {"c_fa": null}})")), ConfigError);
  CHECK_THROWS_AS(cli::RunConfig::from_json(bad(R"({"train": {"lr0": "fast"}})")), ConfigError);
  CHECK_THROWS_AS(cli::RunConfig::from_json(bad(R"({"policy": {"steps": [{"op": "reverse"}]}})")), ConfigError);
}

TEST_CASE("config path comes from the environment when set") {
  ::unsetenv(cli::kConfigEnvVar);
  CHECK(cli::resolve_config_path("a.json") == fs::path("a.json"));
  ::setenv(cli::kConfigEnvVar, "/elsewhere/b.json", 1);
  CHECK(cli::resolve_config_path("a.json") == fs::path("/elsewhere/b.json"));
  ::unsetenv(cli::kConfigEnvVar);
}

TEST_CASE("eval on the shipped fixtures") {
  std::ostringstream out;
  cli::EvalArgs a;
  a.scores = data("perfect_scores.tsv");
  a.key = data("perfect_key.tsv");
  a.dcf.file = data("dcf_example.cfg");
  a.key_value = true;
  CHECK(cli::cmd_eval(a, out) == 0);
  CHECK(out.str().find("min_dcf=0\n") != std::string::npos);
  CHECK(out.str().find("eer=0\n") != std::string::npos);

  std::ostringstream o2;
  a.scores = data("four_trial_scores.tsv");
  a.key = data("four_trial_key.tsv");
  a.key_value = false;
  a.dcf = {};
  a.dcf.p_target = 0.05;
  a.dcf.c_miss = 1;
  a.dcf.c_fa = 10;
  CHECK(cli::cmd_eval(a, o2) == 0);
  const auto t = o2.str();
  CHECK(t.find("minDCF  0.500000") == 0);
  CHECK(t.find("actDCF  1.000000") != std::string::npos);
  CHECK(t.find("EER     50.000000 %") != std::string::npos);

  a.dcf.file = data("dcf_example.cfg");
  CHECK_THROWS_AS(cli::cmd_eval(a, o2), ConfigError);
}

TEST_CASE("eval exits nonzero and names the missing key row") {
  testing_util::TempDir tmp("evalkey");
  testing_util::spit(tmp / "key.tsv", "E_01\tbonafide\nE_02\tspoof\nE_04\tspoof\n");
  const int rc = run_tool("eval --scores " + data("four_trial_scores.tsv") + " --key " + (tmp / "key.tsv").string() +
                              " --dcf " + data("dcf_example.cfg"),
                          tmp / "err.txt");
  CHECK(rc != 0);
  CHECK(testing_util::slurp(tmp / "err.txt").find("E_03") != std::string::npos);
}

TEST_CASE("augment: empty policy copies bytes, reruns are identical, freqmask p=1 kills the band") {
  testing_util::TempDir tmp("augment");
  make_wavs(tmp / "in", 4);
  testing_util::spit(tmp / "empty.json", "{}");
  testing_util::spit(tmp / "fm.json", R"({"seed": 3, "steps": [{"op": "freqmask", "p": 1.0, "thresholds_hz": [4000]}]})");
  testing_util::spit(tmp / "mix.json",
                     R"({"seed": 3, "steps": [{"op": "freqmask", "p": 0.5}, {"op": "low_pass", "p": 0.5}]})");

  std::ostringstream out;
  CHECK(cli::cmd_augment({tmp / "in", tmp / "empty.json", tmp / "out0", std::nullopt, 1}, out) == 0);
  CHECK(tree(tmp / "in") == tree(tmp / "out0"));
  CHECK(json::parse(out.str())["processed"] == 4);

  CHECK(cli::cmd_augment({tmp / "in", tmp / "mix.json", tmp / "a", std::nullopt, 1}, out) == 0);
  CHECK(cli::cmd_augment({tmp / "in", tmp / "mix.json", tmp / "b", std::nullopt, 3}, out) == 0);
  CHECK(tree(tmp / "a") == tree(tmp / "b"));
  CHECK(tree(tmp / "a") != tree(tmp / "in"));

  CHECK(cli::cmd_augment({tmp / "in", tmp / "fm.json", tmp / "fm", std::nullopt, 2}, out) == 0);
  // Band-kill check: energy in the masked bins (strictly above 4 kHz) drops by 60 dB.
  auto above = [](const Waveform& w) {
    const auto S = stft(w);
    const auto f = fft_frequencies(16000, 1024);
    double e = 0;
    for (std::size_t t = 0; t < S.n_frames(); ++t)
      for (std::size_t k = 0; k < S.n_bins(); ++k)
        if (f[k] > 4000) e += std::norm(S.at(k, t));
    return e;
  };
  for (const auto& [rel, bytes] : tree(tmp / "fm")) {
    const double drop = 10 * std::log10(above(read_wav(tmp / "fm" / rel)) / above(read_wav(tmp / "in" / rel)));
    MESSAGE(rel << ": " << drop << " dB");
    CHECK(drop <= -60.0);
  }

  // One unreadable file: the rest are written, exit status reports the failure.
  testing_util::spit(tmp / "in/broken.wav", "RIFFnonsense");
  std::ostringstream o3;
  CHECK(cli::cmd_augment({tmp / "in", tmp / "empty.json", tmp / "out3", std::nullopt, 1}, o3) == 1);
  const auto s = json::parse(o3.str());
  CHECK(s["processed"] == 4);
  CHECK(s["failed"] == 1);
}

TEST_CASE("augment from a manifest writes a manifest") {
  testing_util::TempDir tmp("augman");
  make_wavs(tmp / "in", 2);
  testing_util::spit(tmp / "in/m.tsv", "A\tf0.wav\tbonafide\nB\tsub/f1.wav\tspoof\n");
  testing_util::spit(tmp / "p.json", R"({"steps": [{"op": "freqmask"}]})");
  std::ostringstream out;
  CHECK(cli::cmd_augment({tmp / "in/m.tsv", tmp / "p.json", tmp / "out", std::nullopt, 1}, out) == 0);
  const auto m = Manifest::load(tmp / "out/manifest.tsv");
  REQUIRE(m.records.size() == 2);
  CHECK(m.records[1].path == tmp / "out/sub/f1.wav");
  CHECK(m.records[1].label == Label::kSpoof);
  CHECK(fs::exists(tmp / "out/sub/f1.wav"));
}

TEST_CASE("spectrogram images") {
  testing_util::TempDir tmp("spec");
  Waveform z;
  z.samples.assign(16000, 0.0);
  write_wav(tmp / "z.wav", z);
  std::ostringstream out;
  CHECK(cli::cmd_spectrogram({tmp / "z.wav", tmp / "z.pgm", {}}, out) == 0);
  const auto bytes = testing_util::slurp(tmp / "z.pgm");
  const std::string header = "P5\n63 513\n255\n";
  REQUIRE(bytes.substr(0, header.size()) == header);
  CHECK(bytes.size() == header.size() + 63 * 513);
  CHECK(bytes.find_first_not_of('\0', header.size()) == std::string::npos);

  // Full-scale sine reads 0 dB -> white at its row.
  const auto img = cli::spectrogram_image(stft(testing_util::sine(1000, 1.0, 1.0)));
  CHECK(img.at(512 - 64, 30) == 255);
  CHECK(img.at(0, 30) == 0);

  const auto x = testing_util::noise(16000, 5, 0.5);
  const auto masked = cli::spectrogram_image(stft(freqmask_at(x, 5000)));
  const auto f = fft_frequencies(16000, 1024);
  std::size_t lit_above = 0, lit_below = 0;
  for (std::size_t k = 0; k < 513; ++k)
    for (std::size_t t = 2; t + 2 < masked.width; ++t) {
      const auto v = masked.at(512 - k, t);
      if (f[k] >= 5250) lit_above += v != 0;
      if (f[k] < 4750) lit_below += v != 0;
    }
  CHECK(lit_above == 0);
  CHECK(lit_below > 0);

  write_wav(tmp / "x.wav", x);
  CHECK(cli::cmd_spectrogram({tmp / "x.wav", tmp / "a.pgm", {}}, out) == 0);
  CHECK(cli::cmd_spectrogram({tmp / "x.wav", tmp / "b.pgm", {}}, out) == 0);
  CHECK(testing_util::slurp(tmp / "a.pgm") == testing_util::slurp(tmp / "b.pgm"));
}

TEST_CASE("stats and fuse commands") {
  testing_util::TempDir tmp("stats");
  std::ostringstream out;
  CHECK(cli::cmd_stats({data("duration_fixture.tsv"), 1.0, tmp / "h.csv"}, out) == 0);
  const auto s = json::parse(out.str());
  CHECK(s["min_s"] == 2.61);
  CHECK(s["max_s"] == 28.91);
  CHECK(s["mean_s"].get<double>() == doctest::Approx(14.48));
  CHECK(testing_util::slurp(tmp / "h.csv").rfind("bin_start_s,count\n2,1\n", 0) == 0);

  testing_util::spit(tmp / "a.tsv", "x\t1\ny\t2\n");
  testing_util::spit(tmp / "b.tsv", "y\t4\nx\t3\n");
  cli::FuseArgs f;
  f.preset = std::nullopt;
  testing_util::spit(tmp / "spec.tsv", "a\t0.5\nb\t0.5\n");
  f.spec = tmp / "spec.tsv";
  f.scores = {"a=" + (tmp / "a.tsv").string(), "b=" + (tmp / "b.tsv").string()};
  f.out = tmp / "fused.tsv";
  CHECK(cli::cmd_fuse(f, out) == 0);
  const auto fused = ScoreSet::load(tmp / "fused.tsv");
  CHECK(fused.entries[0].utt_id == "x");
  CHECK(fused.entries[0].score == 2.0);
  CHECK(fused.entries[1].score == 3.0);

  f.spec = std::nullopt;
  f.preset = "paper-7way";
  CHECK_THROWS(cli::cmd_fuse(f, out));
}

TEST_CASE("synth, train and score through the commands") {
  testing_util::TempDir tmp("pipeline");
  std::ostringstream out;
  CHECK(cli::cmd_synth({tmp / "train", 4, 1, false, 2}, out) == 0);
  CHECK(cli::cmd_synth({tmp / "eval", 3, 2, true, 2}, out) == 0);
  testing_util::spit(tmp / "run.json", R"({
    "seed": 4,
    "train": {"lr0": 0.05, "epochs": 3},
    "policy": {"steps": [{"op": "freqmask", "p": 0.3}]},
    "paths": {"train_manifest": "train/manifest.tsv", "eval_manifest": "eval/manifest.tsv",
              "model": "model.bin", "scores": "scores.tsv"}
  })");
  CHECK(cli::cmd_train({tmp / "run.json", 1}, out) == 0);
  CHECK(cli::cmd_score({tmp / "run.json", 2}, out) == 0);
  const auto first = testing_util::slurp(tmp / "scores.tsv");
  const auto model = testing_util::slurp(tmp / "model.bin");
  CHECK(ScoreSet::load(tmp / "scores.tsv").size() == 6);

  ::setenv(cli::kConfigEnvVar, (tmp / "run.json").c_str(), 1);
  CHECK(cli::cmd_train({"does-not-exist.json", 2}, out) == 0);
  CHECK(cli::cmd_score({"does-not-exist.json", 1}, out) == 0);
  ::unsetenv(cli::kConfigEnvVar);
  CHECK(testing_util::slurp(tmp / "model.bin") == model);
  CHECK(testing_util::slurp(tmp / "scores.tsv") == first);

  CHECK(run_tool("train", tmp / "err.txt") == 2);
}
