#include "spoofkit/augment/policy.hpp"

#include <fstream>
#include <set>

#include "spoofkit/augment/filters.hpp"
#include "spoofkit/augment/freqmask.hpp"
#include "spoofkit/augment/mixing.hpp"
#include "spoofkit/augment/stretch.hpp"
#include "spoofkit/error.hpp"

namespace spoofkit {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using json = nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

Range range_from(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), j.get<double>()};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    Range r{j[0].get<double>(), j[1].get<double>()};
    if (r.lo > r.hi) throw ConfigError(where + ": range lower bound exceeds upper bound");
    return r;
  }
  throw ConfigError(where + ": expected a number or a [lo, hi] pair");
}

json range_to(const Range& r) {
  if (r.lo == r.hi) return r.lo;
  return json::array({r.lo, r.hi});
}

void check_range(const Range& r, double lo, double hi, const std::string& what) {
  if (r.lo < lo || r.hi > hi) {
    throw ConfigError(what + " range [" + std::to_string(r.lo) + ", " + std::to_string(r.hi) +
                      "] outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

AugmentPolicy parse_policy(const json& j);

}  // namespace

std::string op_name(const AugmentOp& op) {
  return std::visit(Overloaded{
                        [](const FreqmaskOp&) { return "freqmask"; },
                        [](const LowPassOp&) { return "low_pass"; },
                        [](const HighPassOp&) { return "high_pass"; },
                        [](const NoiseOp&) { return "noise"; },
                        [](const RirOp&) { return "rir"; },
                        [](const TimeStretchOp&) { return "time_stretch"; },
                        [](const PitchShiftOp&) { return "pitch_shift"; },
                    },
                    op);
}

void AugmentPolicy::validate() const {
  stft.validate();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    const std::string where = "policy step " + std::to_string(i) + " (" + op_name(s.op) + ")";
    if (!(s.probability >= 0.0 && s.probability <= 1.0)) {
      throw ConfigError(where + ": probability must be in [0, 1]");
    }
    std::visit(Overloaded{
                   [&](const FreqmaskOp& o) {
                     if (o.thresholds_hz.empty()) throw ConfigError(where + ": empty threshold set");
                     for (double t : o.thresholds_hz) {
                       if (!(t > 0)) throw ConfigError(where + ": thresholds must be positive");
                     }
                   },
                   [&](const LowPassOp& o) {
                     if (!(o.cutoff_hz.lo > 0)) throw ConfigError(where + ": cutoff must be positive");
                   },
                   [&](const HighPassOp& o) {
                     if (!(o.cutoff_hz.lo > 0)) throw ConfigError(where + ": cutoff must be positive");
                   },
                   [&](const NoiseOp& o) {
                     if (o.categories.empty()) throw ConfigError(where + ": no categories");
                     for (auto c : o.categories) {
                       if (c == BankCategory::kRir) throw ConfigError(where + ": rir is not an additive category");
                     }
                   },
                   [&](const RirOp&) {},
                   [&](const TimeStretchOp& o) { check_range(o.rate, 0.5, 2.0, where + " rate"); },
                   [&](const PitchShiftOp& o) { check_range(o.semitones, -12.0, 12.0, where + " semitones"); },
               },
               s.op);
  }
}

bool AugmentPolicy::references(BankCategory c) const {
  for (const auto& s : steps) {
    if (const auto* n = std::get_if<NoiseOp>(&s.op)) {
      for (auto k : n->categories) {
        if (k == c) return true;
      }
    }
    if (c == BankCategory::kRir && std::holds_alternative<RirOp>(s.op)) return true;
  }
  return false;
}

namespace {
AugmentPolicy parse_policy(const json& j) {
  check_keys(j, {"seed", "steps", "stft"}, "policy");
  AugmentPolicy p;
  if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("stft")) {
    const json& s = j.at("stft");
    check_keys(s, {"n_fft", "hop_length", "window"}, "policy.stft");
    if (s.contains("n_fft")) p.stft.n_fft = s.at("n_fft").get<std::size_t>();
    if (s.contains("hop_length")) p.stft.hop_length = s.at("hop_length").get<std::size_t>();
    if (s.contains("window")) p.stft.window = parse_window(s.at("window").get<std::string>());
  }
  if (j.contains("steps")) {
    const json& steps = j.at("steps");
    if (!steps.is_array()) throw ConfigError("policy.steps: expected an array");
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const json& s = steps[i];
      const std::string where = "policy.steps[" + std::to_string(i) + "]";
      if (!s.is_object() || !s.contains("op")) throw ConfigError(where + ": missing 'op'");
      const std::string op = s.at("op").get<std::string>();
      PolicyStep step;
      step.probability = s.value("p", 1.0);
      if (op == "freqmask") {
        check_keys(s, {"op", "p", "thresholds_hz"}, where);
        FreqmaskOp o;
        if (s.contains("thresholds_hz")) o.thresholds_hz = s.at("thresholds_hz").get<std::vector<double>>();
        step.op = o;
      } else if (op == "low_pass") {
        check_keys(s, {"op", "p", "cutoff_hz"}, where);
        LowPassOp o;
        if (s.contains("cutoff_hz")) o.cutoff_hz = range_from(s.at("cutoff_hz"), where + ".cutoff_hz");
        step.op = o;
      } else if (op == "high_pass") {
        check_keys(s, {"op", "p", "cutoff_hz"}, where);
        HighPassOp o;
        if (s.contains("cutoff_hz")) o.cutoff_hz = range_from(s.at("cutoff_hz"), where + ".cutoff_hz");
        step.op = o;
      } else if (op == "noise") {
        check_keys(s, {"op", "p", "categories", "snr_db"}, where);
        NoiseOp o;
        if (s.contains("categories")) {
          o.categories.clear();
          for (const auto& c : s.at("categories")) o.categories.push_back(parse_bank_category(c.get<std::string>()));
        }
        if (s.contains("snr_db")) o.snr_db = range_from(s.at("snr_db"), where + ".snr_db");
        step.op = o;
      } else if (op == "rir") {
        check_keys(s, {"op", "p"}, where);
        step.op = RirOp{};
      } else if (op == "time_stretch") {
        check_keys(s, {"op", "p", "rate"}, where);
        TimeStretchOp o;
        if (s.contains("rate")) o.rate = range_from(s.at("rate"), where + ".rate");
        step.op = o;
      } else if (op == "pitch_shift") {
        check_keys(s, {"op", "p", "semitones"}, where);
        PitchShiftOp o;
        if (s.contains("semitones")) o.semitones = range_from(s.at("semitones"), where + ".semitones");
        step.op = o;
      } else {
        throw ConfigError(where + ": unknown op '" + op + "'");
      }
      p.steps.push_back(std::move(step));
    }
  }
  p.validate();
  return p;
}
}  // namespace

AugmentPolicy policy_from_json(const json& j) {
  try {
    return parse_policy(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("policy: ") + e.what());
  }
}

json policy_to_json(const AugmentPolicy& p) {
  json steps = json::array();
  for (const auto& s : p.steps) {
    json j{{"op", op_name(s.op)}, {"p", s.probability}};
    std::visit(Overloaded{
                   [&](const FreqmaskOp& o) { j["thresholds_hz"] = o.thresholds_hz; },
                   [&](const LowPassOp& o) { j["cutoff_hz"] = range_to(o.cutoff_hz); },
                   [&](const HighPassOp& o) { j["cutoff_hz"] = range_to(o.cutoff_hz); },
                   [&](const NoiseOp& o) {
                     json cats = json::array();
                     for (auto c : o.categories) cats.push_back(bank_category_name(c));
                     j["categories"] = cats;
                     j["snr_db"] = range_to(o.snr_db);
                   },
                   [&](const RirOp&) {},
                   [&](const TimeStretchOp& o) { j["rate"] = range_to(o.rate); },
                   [&](const PitchShiftOp& o) { j["semitones"] = range_to(o.semitones); },
               },
               s.op);
    steps.push_back(std::move(j));
  }
  return json{{"seed", p.seed},
              {"stft",
               {{"n_fft", p.stft.n_fft},
                {"hop_length", p.stft.hop_length},
                {"window", window_name(p.stft.window)}}},
              {"steps", steps}};
}

AugmentPolicy load_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open policy file");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  try {
    return policy_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Waveform apply_policy(const Waveform& x, const AugmentPolicy& policy, const NoiseBank& bank,
                      Rng& rng, AugmentTrace* trace) {
  for (BankCategory c : {BankCategory::kNoise, BankCategory::kMusic, BankCategory::kRir}) {
    if (policy.references(c) && bank.count(c) == 0) {
      throw ConfigError("policy references noise-bank category '" + bank_category_name(c) +
                        "', which is empty");
    }
  }
  Waveform y = x;
  for (std::size_t i = 0; i < policy.steps.size(); ++i) {
    const PolicyStep& step = policy.steps[i];
    bool fire = step.probability >= 1.0;
    if (step.probability > 0.0 && step.probability < 1.0) fire = rng.bernoulli(step.probability);
    if (!fire) continue;
    y = std::visit(Overloaded{
                       [&](const FreqmaskOp& o) { return freqmask(y, o.thresholds_hz, rng, policy.stft); },
                       [&](const LowPassOp& o) { return low_pass(y, o.cutoff_hz.draw(rng)); },
                       [&](const HighPassOp& o) { return high_pass(y, o.cutoff_hz.draw(rng)); },
                       [&](const NoiseOp& o) {
                         const Waveform& n = bank.sample(o.categories, rng);
                         return add_noise(y, n, o.snr_db.draw(rng));
                       },
                       [&](const RirOp&) { return convolve_rir(y, bank.sample({BankCategory::kRir}, rng)); },
                       [&](const TimeStretchOp& o) { return time_stretch(y, o.rate.draw(rng), policy.stft); },
                       [&](const PitchShiftOp& o) { return pitch_shift(y, o.semitones.draw(rng), policy.stft); },
                   },
                   step.op);
    if (trace) trace->applied.push_back(i);
  }
  return y;
}

bool policy_is_noop(const AugmentPolicy& policy, Rng rng) {
  for (const auto& step : policy.steps) {
    if (step.probability >= 1.0) return false;
    if (step.probability > 0.0 && rng.bernoulli(step.probability)) return false;
  }
  return true;
}

Waveform apply_policy(const Waveform& x, const AugmentPolicy& policy, const NoiseBank& bank,
                      std::uint64_t stream, AugmentTrace* trace) {
  Rng rng(policy.seed, stream);
  return apply_policy(x, policy, bank, rng, trace);
}

}  // namespace spoofkit
