#include "spoofkit/cli/run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "spoofkit/error.hpp"

namespace spoofkit::cli {
namespace {

using json = nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items())
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::optional<std::filesystem::path> read_path(const json& j, const char* key, const std::filesystem::path& base) {
  if (!j.contains(key)) return std::nullopt;
  std::filesystem::path p = j.at(key).get<std::string>();
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

RunConfig parse(const json& j, const std::filesystem::path& base) {
  check_keys(j, {"seed", "stft", "features", "train", "policy", "dcf", "paths"}, "config");
  RunConfig c;
  read(j, "seed", c.seed);

  if (j.contains("stft")) {
    const json& s = j.at("stft");
    check_keys(s, {"n_fft", "hop_length", "window"}, "config.stft");
    read(s, "n_fft", c.stft.n_fft);
    read(s, "hop_length", c.stft.hop_length);
    if (s.contains("window")) c.stft.window = parse_window(s.at("window").get<std::string>());
  }

  if (j.contains("features")) {
    const json& f = j.at("features");
    check_keys(f, {"n_bands", "f_min_hz", "floor_db"}, "config.features");
    read(f, "n_bands", c.features.n_bands);
    read(f, "f_min_hz", c.features.f_min_hz);
    read(f, "floor_db", c.features.floor_db);
  }
  c.features.stft = c.stft;

  c.train.seed = c.seed;
  if (j.contains("train")) {
    const json& t = j.at("train");
    check_keys(t, {"lr0", "epochs", "lr_halving_period", "class_weights", "batch_size", "seed"}, "config.train");
    read(t, "lr0", c.train.lr0);
    read(t, "epochs", c.train.epochs);
    read(t, "lr_halving_period", c.train.lr_halving_period);
    read(t, "batch_size", c.train.batch_size);
    read(t, "seed", c.train.seed);
    if (t.contains("class_weights")) {
      const json& w = t.at("class_weights");
      check_keys(w, {"bonafide", "spoof"}, "config.train.class_weights");
      read(w, "bonafide", c.train.weight_bonafide);
      read(w, "spoof", c.train.weight_spoof);
    }
  }

  if (j.contains("policy")) {
    json pj = j.at("policy");
    if (pj.is_object() && pj.contains("stft"))
      throw ConfigError("config.policy: set stft at the top level, not inside the policy");
    if (pj.is_object() && !pj.contains("seed")) pj["seed"] = c.seed;
    c.policy = policy_from_json(pj);
  } else {
    c.policy.seed = c.seed;
  }
  c.policy.stft = c.stft;

  if (j.contains("dcf")) {
    const json& d = j.at("dcf");
    check_keys(d, {"p_target", "c_miss", "c_fa"}, "config.dcf");
    if (!d.contains("p_target") || !d.contains("c_miss") || !d.contains("c_fa"))
      throw ConfigError("config.dcf: p_target, c_miss and c_fa are all required");
    DcfConfig dc;
    dc.p_target = d.at("p_target").get<double>();
    dc.c_miss = d.at("c_miss").get<double>();
    dc.c_fa = d.at("c_fa").get<double>();
    c.dcf = dc;
  }

  if (j.contains("paths")) {
    const json& p = j.at("paths");
    check_keys(p, {"train_manifest", "eval_manifest", "noise_bank", "model", "scores"}, "config.paths");
    c.paths.train_manifest = read_path(p, "train_manifest", base);
    c.paths.eval_manifest = read_path(p, "eval_manifest", base);
    c.paths.noise_bank = read_path(p, "noise_bank", base);
    c.paths.model = read_path(p, "model", base);
    c.paths.scores = read_path(p, "scores", base);
  }
  return c;
}

}  // namespace

void RunConfig::validate() const {
  stft.validate();
  features.validate();
  train.validate();
  policy.validate();
  if (dcf) dcf->validate();
}

RunConfig RunConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  RunConfig c;
  try {
    c = parse(j, base_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path.string() + ": cannot open config");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

json RunConfig::to_json() const {
  json j;
  j["seed"] = seed;
  j["stft"] = {{"n_fft", stft.n_fft}, {"hop_length", stft.hop_length}, {"window", window_name(stft.window)}};
  j["features"] = {{"n_bands", features.n_bands}, {"f_min_hz", features.f_min_hz}, {"floor_db", features.floor_db}};
  j["train"] = {{"lr0", train.lr0},
                {"epochs", train.epochs},
                {"lr_halving_period", train.lr_halving_period},
                {"class_weights", {{"bonafide", train.weight_bonafide}, {"spoof", train.weight_spoof}}},
                {"batch_size", train.batch_size},
                {"seed", train.seed}};
  json pj = policy_to_json(policy);
  pj.erase("stft");
  j["policy"] = pj;
  if (dcf) j["dcf"] = {{"p_target", dcf->p_target}, {"c_miss", dcf->c_miss}, {"c_fa", dcf->c_fa}};
  json p = json::object();
  auto put = [&](const char* k, const std::optional<std::filesystem::path>& v) {
    if (v) p[k] = v->string();
  };
  put("train_manifest", paths.train_manifest);
  put("eval_manifest", paths.eval_manifest);
  put("noise_bank", paths.noise_bank);
  put("model", paths.model);
  put("scores", paths.scores);
  j["paths"] = p;
  return j;
}

std::filesystem::path resolve_config_path(const std::filesystem::path& from_cli) {
  if (const char* env = std::getenv(kConfigEnvVar); env && *env) return env;
  return from_cli;
}

}  // namespace spoofkit::cli
