// spoofkit command-line front end.
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "spoofkit/cli/commands.hpp"
#include "spoofkit/cli/run_config.hpp"
#include "spoofkit/audio/stft.hpp"

namespace cli = spoofkit::cli;

namespace {

void add_dcf_flags(CLI::App* sub, cli::DcfArgs& d) {
  sub->add_option("--dcf", d.file, "key=value file with p_target, c_miss, c_fa")->check(CLI::ExistingFile);
  sub->add_option("--p-target", d.p_target, "target prior");
  sub->add_option("--c-miss", d.c_miss, "cost of a miss");
  sub->add_option("--c-fa", d.c_fa, "cost of a false alarm");
}

}  // namespace

int main(int argc, char** argv) {
  // stdout carries the machine-readable summary; all logging goes to stderr.
  spdlog::set_default_logger(spdlog::stderr_color_mt("spoofkit"));

  CLI::App app{"Anti-spoofing augmentation, scoring and evaluation toolkit"};
  app.require_subcommand(1);
  bool verbose = false, quiet = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");
  app.add_flag("-q,--quiet", quiet, "errors only");

  cli::AugmentArgs aug;
  auto* c_aug = app.add_subcommand("augment", "apply an augmentation policy to a directory or manifest");
  c_aug->add_option("--input", aug.input, "directory of WAVs or manifest TSV")->required()->check(CLI::ExistingPath);
  c_aug->add_option("--policy", aug.policy, "policy JSON")->required()->check(CLI::ExistingFile);
  c_aug->add_option("--out", aug.out_dir, "output directory")->required();
  c_aug->add_option("--bank", aug.bank, "noise bank manifest")->check(CLI::ExistingFile);
  c_aug->add_option("-j,--jobs", aug.jobs, "worker threads (0 = all cores)");

  cli::EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "minDCF, actDCF, Cllr and EER for a score file");
  c_eval->add_option("--scores", ev.scores, "score TSV")->required()->check(CLI::ExistingFile);
  c_eval->add_option("--key", ev.key, "key TSV: utt_id, label")->check(CLI::ExistingFile);
  c_eval->add_option("--manifest", ev.manifest, "take labels from a manifest")->check(CLI::ExistingFile);
  c_eval->add_flag("--kv", ev.key_value, "key=value output");
  add_dcf_flags(c_eval, ev.dcf);

  cli::FuseArgs fu;
  auto* c_fuse = app.add_subcommand("fuse", "weighted score fusion");
  c_fuse->add_option("--spec", fu.spec, "fusion spec TSV: system_id, weight")->check(CLI::ExistingFile);
  c_fuse->add_option("--preset", fu.preset, "named spec: paper-7way, equal-4way");
  c_fuse->add_option("--scores", fu.scores, "<system_id>=<score TSV>, repeatable")->required();
  c_fuse->add_option("--out", fu.out, "fused score TSV")->required();
  c_fuse->add_flag("--znorm", fu.znorm, "standardise each system before weighting");
  c_fuse->add_option("--search", fu.search, "grid-search weights for eer or min_dcf");
  c_fuse->add_option("--step", fu.step, "grid spacing for --search");
  c_fuse->add_option("--key", fu.key, "key TSV for --search")->check(CLI::ExistingFile);
  c_fuse->add_option("--spec-out", fu.spec_out, "write the weights used");
  add_dcf_flags(c_fuse, fu.dcf);

  cli::StatsArgs st;
  auto* c_stats = app.add_subcommand("stats", "duration statistics and histogram");
  c_stats->add_option("--manifest", st.manifest, "manifest TSV")->required()->check(CLI::ExistingFile);
  c_stats->add_option("--bin-width", st.bin_width_s, "histogram bin width in seconds");
  c_stats->add_option("--histogram", st.histogram_csv, "write histogram CSV here");

  cli::SpectrogramArgs sp;
  std::string window = "hann";
  auto* c_spec = app.add_subcommand("spectrogram", "log-magnitude STFT as a PGM image");
  c_spec->add_option("--input", sp.input, "WAV file")->required()->check(CLI::ExistingFile);
  c_spec->add_option("--out", sp.out, "PGM output")->required();
  c_spec->add_option("--n-fft", sp.stft.n_fft, "FFT size");
  c_spec->add_option("--hop", sp.stft.hop_length, "hop length");
  c_spec->add_option("--window", window, "hann, hamming or rectangular");

  cli::SynthArgs sy;
  auto* c_synth = app.add_subcommand("synth", "generate the synthetic bona fide / spoof corpus");
  c_synth->add_option("--out", sy.out_dir, "output directory")->required();
  c_synth->add_option("--n-per-class", sy.n_per_class, "utterances per class");
  c_synth->add_option("--seed", sy.seed, "corpus seed");
  c_synth->add_flag("--gapped", sy.gapped, "apply a random band gap to every file");
  c_synth->add_option("-j,--jobs", sy.jobs, "worker threads (0 = all cores)");

  cli::RunArgs tr, sc;
  auto* c_train = app.add_subcommand("train", "train the linear countermeasure from a run config");
  c_train->add_option("--config", tr.config, "run config JSON (overridden by $SPOOFKIT_CONFIG)");
  c_train->add_option("-j,--jobs", tr.jobs, "worker threads (0 = all cores)");
  auto* c_score = app.add_subcommand("score", "score an evaluation manifest from a run config");
  c_score->add_option("--config", sc.config, "run config JSON (overridden by $SPOOFKIT_CONFIG)");
  c_score->add_option("-j,--jobs", sc.jobs, "worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(quiet ? spdlog::level::err : verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    std::ostream& out = std::cout;
    if (c_aug->parsed()) return cli::cmd_augment(aug, out);
    if (c_eval->parsed()) return cli::cmd_eval(ev, out);
    if (c_fuse->parsed()) return cli::cmd_fuse(fu, out);
    if (c_stats->parsed()) return cli::cmd_stats(st, out);
    if (c_spec->parsed()) {
      sp.stft.window = spoofkit::parse_window(window);
      return cli::cmd_spectrogram(sp, out);
    }
    if (c_synth->parsed()) return cli::cmd_synth(sy, out);
    if (c_train->parsed() || c_score->parsed()) {
      cli::RunArgs& r = c_train->parsed() ? tr : sc;
      if (r.config.empty() && !std::getenv(cli::kConfigEnvVar)) {
        spdlog::error("--config or ${} is required", cli::kConfigEnvVar);
        return 2;
      }
      return c_train->parsed() ? cli::cmd_train(r, out) : cli::cmd_score(r, out);
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 2;
}
