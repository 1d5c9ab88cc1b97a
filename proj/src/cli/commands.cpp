#include "spoofkit/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "spoofkit/audio/wav.hpp"
#include "spoofkit/augment/noise_bank.hpp"
#include "spoofkit/augment/policy.hpp"
#include "spoofkit/cli/run_config.hpp"
#include "spoofkit/cli/spectrogram_image.hpp"
#include "spoofkit/desk/synth.hpp"
#include "spoofkit/desk/train.hpp"
#include "spoofkit/duration/stats.hpp"
#include "spoofkit/error.hpp"
#include "spoofkit/fusion/fusion.hpp"
#include "spoofkit/metrics/detection.hpp"
#include "spoofkit/parallel.hpp"

namespace spoofkit::cli {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

void emit(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

struct AugmentItem {
  fs::path src;
  fs::path rel;  // output name under out_dir
  const ManifestRecord* record = nullptr;
};

// Inside `base` keep the relative layout, otherwise fall back to the bare
// file name.
fs::path relative_name(const fs::path& p, const fs::path& base) {
  const fs::path rel = p.lexically_normal().lexically_relative(base.lexically_normal());
  if (!rel.empty() && *rel.begin() != "..") return rel;
  return p.filename();
}

DcfConfig resolve_dcf(const DcfArgs& a) {
  const bool any_flag = a.p_target || a.c_miss || a.c_fa;
  if (a.file && any_flag) throw ConfigError("give either a DCF file or the three DCF flags, not both");
  DcfConfig c;
  if (a.file) {
    c = DcfConfig::load(*a.file);
  } else {
    if (!(a.p_target && a.c_miss && a.c_fa))
      throw ConfigError("DCF parameters required: --dcf <file> or all of --p-target, --c-miss, --c-fa");
    c = {*a.p_target, *a.c_miss, *a.c_fa};
  }
  c.validate();
  return c;
}

TrialLabels load_labels(const std::optional<fs::path>& key, const std::optional<fs::path>& manifest) {
  if (key && manifest) throw ConfigError("give either --key or --manifest, not both");
  if (key) return TrialLabels::load(*key);
  if (manifest) return TrialLabels::from_manifest(Manifest::load(*manifest));
  throw ConfigError("trial labels required: --key or --manifest");
}

std::vector<std::pair<std::string, ScoreSet>> load_score_args(const std::vector<std::string>& args) {
  std::vector<std::pair<std::string, ScoreSet>> out;
  std::set<std::string> seen;
  for (const auto& a : args) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == a.size())
      throw ConfigError("--scores expects <system_id>=<path>, got '" + a + "'");
    std::string id = a.substr(0, eq);
    if (!seen.insert(id).second) throw ConfigError("system '" + id + "' given twice");
    out.emplace_back(id, ScoreSet::load(a.substr(eq + 1)));
  }
  return out;
}

}  // namespace

int cmd_augment(const AugmentArgs& a, std::ostream& out) {
  const AugmentPolicy policy = load_policy(a.policy);
  const NoiseBank bank = a.bank ? NoiseBank::load(*a.bank) : NoiseBank{};

  std::optional<Manifest> manifest;
  std::vector<AugmentItem> items;
  if (fs::is_directory(a.input)) {
    std::vector<fs::path> wavs;
    for (const auto& e : fs::recursive_directory_iterator(a.input))
      if (e.is_regular_file() && e.path().extension() == ".wav") wavs.push_back(e.path());
    std::sort(wavs.begin(), wavs.end());
    for (const auto& p : wavs) items.push_back({p, p.lexically_relative(a.input), nullptr});
  } else {
    manifest = Manifest::load(a.input);
    manifest->validate();
    for (const auto& r : manifest->records)
      items.push_back({r.path, relative_name(r.path, a.input.parent_path()), &r});
  }

  std::set<fs::path> names;
  for (const auto& it : items)
    if (!names.insert(it.rel).second) throw ConfigError("two inputs map to output name " + it.rel.string());

  fs::create_directories(a.out_dir);
  std::vector<char> ok(items.size(), 0);
  std::vector<double> dur(items.size(), 0.0);
  // Per-file failures are logged and counted rather than thrown.
  parallel_for(items.size(), a.jobs, [&](std::size_t i) {
    try {
      const Waveform x = read_wav(items[i].src);
      const Waveform y = apply_policy(x, policy, bank, static_cast<std::uint64_t>(i));
      const fs::path dst = a.out_dir / items[i].rel;
      fs::create_directories(dst.parent_path());
      write_wav(dst, y);
      dur[i] = y.duration_s();
      ok[i] = 1;
    } catch (const std::exception& e) {
      spdlog::error("{}: {}", items[i].src.string(), e.what());
    }
  });

  const auto done = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
  if (manifest) {
    Manifest m;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!ok[i]) continue;
      ManifestRecord r = *items[i].record;
      r.path = a.out_dir / items[i].rel;
      r.duration_s = dur[i];
      m.records.push_back(std::move(r));
    }
    m.save(a.out_dir / "manifest.tsv");
  }
  emit(out, {{"command", "augment"}, {"processed", done}, {"failed", items.size() - done}});
  return done == items.size() ? 0 : 1;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const DcfConfig dcf = resolve_dcf(a.dcf);
  const ScoreSet scores = ScoreSet::load(a.scores);
  const TrialLabels labels = load_labels(a.key, a.manifest);
  const MetricReport r = evaluate(scores, labels, dcf);
  if (a.key_value)
    r.write_key_value(out);
  else
    r.write_text(out);
  return 0;
}

int cmd_fuse(const FuseArgs& a, std::ostream& out) {
  const auto systems = load_score_args(a.scores);
  if (systems.empty()) throw ConfigError("fuse: at least one --scores id=path is required");

  FusionSpec spec;
  json summary = {{"command", "fuse"}};
  if (a.search) {
    if (a.spec || a.preset) throw ConfigError("fuse: --search replaces --spec/--preset");
    if (!a.key) throw ConfigError("fuse: --search needs --key");
    const TrialLabels labels = TrialLabels::load(*a.key);
    FusionObjective obj;
    std::optional<DcfConfig> dcf;
    if (*a.search == "eer") {
      obj = FusionObjective::kEer;
    } else if (*a.search == "min_dcf") {
      obj = FusionObjective::kMinDcf;
      dcf = resolve_dcf(a.dcf);
    } else {
      throw ConfigError("fuse: --search must be eer or min_dcf, got '" + *a.search + "'");
    }
    const GridSearchResult g = grid_search_weights(systems, labels, obj, a.step, dcf);
    spec = g.spec;
    summary["objective"] = g.objective;
    summary["grid_points"] = g.evaluated;
  } else if (a.spec && a.preset) {
    throw ConfigError("fuse: give either --spec or --preset");
  } else if (a.spec) {
    spec = FusionSpec::load(*a.spec);
  } else if (a.preset) {
    spec = FusionSpec::preset(*a.preset);
  } else {
    throw ConfigError("fuse: one of --spec, --preset or --search is required");
  }

  std::map<std::string, ScoreSet> by_id(systems.begin(), systems.end());
  const ScoreSet fused = fuse(by_id, spec, FuseOptions{a.znorm});
  fused.save(a.out);
  if (a.spec_out) spec.save(*a.spec_out);

  json w = json::array();
  for (const auto& s : spec.systems) w.push_back({{"system", s.id}, {"weight", s.weight}});
  summary["weights"] = w;
  summary["trials"] = fused.size();
  emit(out, summary);
  return 0;
}

int cmd_stats(const StatsArgs& a, std::ostream& out) {
  Manifest m = Manifest::load(a.manifest);
  const DurationStats s = duration_stats(m, a.bin_width_s);
  if (a.histogram_csv) {
    std::ofstream f(*a.histogram_csv);
    if (!f) throw FormatError(a.histogram_csv->string() + ": cannot open for writing");
    s.histogram.write_csv(f);
  }
  emit(out, {{"command", "stats"},
             {"count", s.count},
             {"min_s", s.min_s},
             {"mean_s", s.mean_s},
             {"max_s", s.max_s},
             {"bin_width_s", s.histogram.bin_width_s},
             {"bins", s.histogram.counts.size()}});
  return 0;
}

int cmd_spectrogram(const SpectrogramArgs& a, std::ostream& out) {
  const Waveform x = read_wav(a.input);
  const GrayImage img = spectrogram_image(stft(x, a.stft));
  img.write_pgm(a.out);
  emit(out, {{"command", "spectrogram"}, {"width", img.width}, {"height", img.height}});
  return 0;
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  SynthConfig cfg;
  cfg.n_per_class = a.n_per_class;
  cfg.seed = a.seed;
  cfg.gapped = a.gapped;
  const Manifest m = synth_corpus(cfg, a.out_dir, a.jobs);
  emit(out, {{"command", "synth"},
             {"utterances", m.records.size()},
             {"gapped", a.gapped},
             {"manifest", (a.out_dir / "manifest.tsv").string()}});
  return 0;
}

int cmd_train(const RunArgs& a, std::ostream& out) {
  const fs::path cfg_path = resolve_config_path(a.config);
  RunConfig cfg = RunConfig::load(cfg_path);
  if (!cfg.paths.train_manifest) throw ConfigError("config.paths.train_manifest is required for train");
  if (!cfg.paths.model) throw ConfigError("config.paths.model is required for train");
  cfg.train.jobs = a.jobs;

  const NoiseBank bank = cfg.paths.noise_bank ? NoiseBank::load(*cfg.paths.noise_bank) : NoiseBank{};
  const Manifest m = Manifest::load(*cfg.paths.train_manifest);
  m.validate();
  spdlog::info("training on {} utterances, {} epochs", m.records.size(), cfg.train.epochs);
  const TrainResult r = train(m, cfg.policy, bank, cfg.features, cfg.train);
  r.model.save(*cfg.paths.model);
  emit(out, {{"command", "train"},
             {"model", cfg.paths.model->string()},
             {"best_epoch", r.best_epoch},
             {"best_loss", r.epoch_loss[static_cast<std::size_t>(r.best_epoch)]},
             {"epoch_loss", r.epoch_loss}});
  return 0;
}

int cmd_score(const RunArgs& a, std::ostream& out) {
  const fs::path cfg_path = resolve_config_path(a.config);
  const RunConfig cfg = RunConfig::load(cfg_path);
  if (!cfg.paths.eval_manifest) throw ConfigError("config.paths.eval_manifest is required for score");
  if (!cfg.paths.model) throw ConfigError("config.paths.model is required for score");
  if (!cfg.paths.scores) throw ConfigError("config.paths.scores is required for score");

  const DeskModel model = DeskModel::load(*cfg.paths.model);
  const Manifest m = Manifest::load(*cfg.paths.eval_manifest);
  m.validate();
  const ScoreSet s = score_trials(model, m, cfg.features, a.jobs);
  s.save(*cfg.paths.scores);
  emit(out, {{"command", "score"}, {"trials", s.size()}, {"scores", cfg.paths.scores->string()}});
  return 0;
}

}  // namespace spoofkit::cli
