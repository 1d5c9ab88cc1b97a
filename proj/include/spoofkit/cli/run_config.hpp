#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "spoofkit/augment/policy.hpp"
#include "spoofkit/desk/features.hpp"
#include "spoofkit/desk/train.hpp"
#include "spoofkit/metrics/detection.hpp"

namespace spoofkit::cli {

// Everything a train/score run needs, from one JSON document:
//
//   {
//     "seed": 0,
//     "stft": {"n_fft": 1024, "hop_length": 256, "window": "hann"},
//     "features": {"n_bands": 16, "f_min_hz": 50, "floor_db": -80},
//     "train": {"lr0": 5e-4, "epochs": 20, "lr_halving_period": 2,
//               "class_weights": {"bonafide": 10, "spoof": 1}, "batch_size": 8},
//     "policy": {"steps": [{"op": "freqmask", "p": 0.3}]},
//     "dcf": {"p_target": 0.05, "c_miss": 1, "c_fa": 10},
//     "paths": {"train_manifest": "...", "eval_manifest": "...", "noise_bank": "...",
//               "model": "...", "scores": "..."}
//   }
//
// Unknown keys anywhere are errors. The top-level stft block is shared by
// the features and the policy. The policy seed and the training seed default
// to the top-level seed. Relative paths resolve against the config's directory.
struct RunPaths {
  std::optional<std::filesystem::path> train_manifest;
  std::optional<std::filesystem::path> eval_manifest;
  std::optional<std::filesystem::path> noise_bank;
  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> scores;
};

struct RunConfig {
  std::uint64_t seed = 0;
  StftConfig stft;
  FeatureConfig features;
  TrainConfig train;
  AugmentPolicy policy;
  std::optional<DcfConfig> dcf;
  RunPaths paths;

  void validate() const;

  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

// Name of the environment variable that, when set, replaces the config path
// given on the command line.
inline constexpr const char* kConfigEnvVar = "SPOOFKIT_CONFIG";

std::filesystem::path resolve_config_path(const std::filesystem::path& from_cli);

}  // namespace spoofkit::cli
