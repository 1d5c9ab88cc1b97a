#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "spoofkit/audio/stft.hpp"

// Subcommand bodies. Each returns the process exit status and writes a
// one-line JSON summary (or the requested report) to `out`; logs go through
// spdlog. Errors that stop the whole command propagate as exceptions.
namespace spoofkit::cli {

struct AugmentArgs {
  std::filesystem::path input;  // directory of WAVs or a manifest
  std::filesystem::path policy;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> bank;
  unsigned jobs = 1;
};
int cmd_augment(const AugmentArgs& a, std::ostream& out);

struct DcfArgs {
  std::optional<std::filesystem::path> file;
  std::optional<double> p_target, c_miss, c_fa;
};

struct EvalArgs {
  std::filesystem::path scores;
  std::optional<std::filesystem::path> key;       // utt_id<TAB>label
  std::optional<std::filesystem::path> manifest;  // or labels from a manifest
  DcfArgs dcf;
  bool key_value = false;
};
int cmd_eval(const EvalArgs& a, std::ostream& out);

struct FuseArgs {
  std::optional<std::filesystem::path> spec;
  std::optional<std::string> preset;
  std::vector<std::string> scores;  // id=path
  std::filesystem::path out;
  bool znorm = false;
  // Weight search instead of a given spec.
  std::optional<std::string> search;  // "eer" or "min_dcf"
  double step = 0.1;
  std::optional<std::filesystem::path> key;
  std::optional<std::filesystem::path> spec_out;
  DcfArgs dcf;
};
int cmd_fuse(const FuseArgs& a, std::ostream& out);

struct StatsArgs {
  std::filesystem::path manifest;
  double bin_width_s = 1.0;
  std::optional<std::filesystem::path> histogram_csv;
};
int cmd_stats(const StatsArgs& a, std::ostream& out);

struct SpectrogramArgs {
  std::filesystem::path input;
  std::filesystem::path out;
  StftConfig stft;
};
int cmd_spectrogram(const SpectrogramArgs& a, std::ostream& out);

struct SynthArgs {
  std::filesystem::path out_dir;
  std::size_t n_per_class = 100;
  std::uint64_t seed = 0;
  bool gapped = false;
  unsigned jobs = 1;
};
int cmd_synth(const SynthArgs& a, std::ostream& out);

struct RunArgs {
  std::filesystem::path config;
  unsigned jobs = 1;
};
int cmd_train(const RunArgs& a, std::ostream& out);
int cmd_score(const RunArgs& a, std::ostream& out);

}  // namespace spoofkit::cli
