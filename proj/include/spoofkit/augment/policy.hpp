#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "spoofkit/audio/stft.hpp"
#include "spoofkit/augment/noise_bank.hpp"
#include "spoofkit/rng.hpp"

namespace spoofkit {

// Closed interval a parameter is drawn from; lo == hi pins it.
struct Range {
  double lo = 0, hi = 0;
  double draw(Rng& rng) const { return lo == hi ? lo : rng.uniform(lo, hi); }
};

struct FreqmaskOp {
  std::vector<double> thresholds_hz{4000.0, 5000.0, 6000.0, 7000.0};
};
struct LowPassOp {
  Range cutoff_hz{150.0, 7500.0};
};
struct HighPassOp {
  Range cutoff_hz{20.0, 2400.0};
};
struct NoiseOp {
  std::vector<BankCategory> categories{BankCategory::kNoise, BankCategory::kMusic};
  Range snr_db{5.0, 20.0};
};
struct RirOp {};
struct TimeStretchOp {
  Range rate{0.8, 1.25};
};
struct PitchShiftOp {
  Range semitones{-4.0, 4.0};
};

using AugmentOp =
    std::variant<FreqmaskOp, LowPassOp, HighPassOp, NoiseOp, RirOp, TimeStretchOp, PitchShiftOp>;

std::string op_name(const AugmentOp& op);

struct PolicyStep {
  AugmentOp op;
  double probability = 1.0;
};

struct AugmentPolicy {
  std::vector<PolicyStep> steps;
  std::uint64_t seed = 0;
  StftConfig stft;

  // Probabilities in [0, 1] and op parameters in range.
  void validate() const;
  bool references(BankCategory c) const;
};

// JSON form: {"seed": n, "steps": [{"op": "freqmask", "p": 0.3, ...}, ...]}.
// Unknown keys are rejected.
AugmentPolicy policy_from_json(const nlohmann::json& j);
nlohmann::json policy_to_json(const AugmentPolicy& p);
AugmentPolicy load_policy(const std::filesystem::path& path);

// Indices of the steps that fired, in order.
struct AugmentTrace {
  std::vector<std::size_t> applied;
};

// Runs the steps in listed order. Each step fires independently with its
// probability; steps with probability 0 or 1 consume no random draws, so a
// single always-on step sees the same generator state as a direct call.
Waveform apply_policy(const Waveform& x, const AugmentPolicy& policy, const NoiseBank& bank,
                      Rng& rng, AugmentTrace* trace = nullptr);

// True when no step would fire for a generator in this state, i.e. when
// apply_policy would return its input unchanged. Exact, because the only
// draws made before the first firing step are the coin flips themselves.
bool policy_is_noop(const AugmentPolicy& policy, Rng rng);

// Convenience overload seeding the generator from (policy.seed, stream).
Waveform apply_policy(const Waveform& x, const AugmentPolicy& policy, const NoiseBank& bank,
                      std::uint64_t stream = 0, AugmentTrace* trace = nullptr);

}  // namespace spoofkit
