#include "spoofkit/desk/synth.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

#include "spoofkit/audio/wav.hpp"
#include "spoofkit/augment/freqmask.hpp"
#include "spoofkit/error.hpp"
#include "spoofkit/parallel.hpp"
#include "spoofkit/rng.hpp"

namespace spoofkit {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHarmonicRms = 0.1;
constexpr double kArtifactAmplitude = 0.1;  // -20 dBFS peak
constexpr std::uint64_t kGapSalt = 0x6761707065642d31ULL;

void scale_to_rms(std::vector<double>& v, double target) {
  double p = 0;
  for (double s : v) p += s * s;
  p /= static_cast<double>(v.size());
  if (p <= 0) return;
  const double g = target / std::sqrt(p);
  for (double& s : v) s *= g;
}

// Paul Kellet's refined pink filter over unit-variance white noise.
std::vector<double> pink_noise(std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = rng.gaussian();
    b0 = 0.99886 * b0 + w * 0.0555179;
    b1 = 0.99332 * b1 + w * 0.0750759;
    b2 = 0.96900 * b2 + w * 0.1538520;
    b3 = 0.86650 * b3 + w * 0.3104856;
    b4 = 0.55000 * b4 + w * 0.5329522;
    b5 = -0.7616 * b5 - w * 0.0168980;
    out[i] = b0 + b1 + b2 + b3 + b4 + b5 + b6 + w * 0.5362;
    b6 = w * 0.115926;
  }
  return out;
}

void check(const SynthConfig& cfg) {
  if (cfg.n_per_class < 1) throw InvalidParameter("synth: n_per_class must be >= 1");
  if (cfg.sample_rate < 16000) throw InvalidParameter("synth: sample rate must be >= 16000");
  if (!(cfg.min_duration_s > 0) || cfg.max_duration_s < cfg.min_duration_s)
    throw InvalidParameter("synth: need 0 < min_duration_s <= max_duration_s");
  if (cfg.gapped && cfg.gap_thresholds_hz.empty()) throw InvalidParameter("synth: no gap thresholds");
}

}  // namespace

SynthUtterance synth_utterance(const SynthConfig& cfg, std::size_t index) {
  check(cfg);
  if (index >= cfg.size()) throw InvalidParameter("synth: index out of range");

  Rng rng(cfg.seed, index);
  const double sr = cfg.sample_rate;
  const double dur = rng.uniform(cfg.min_duration_s, cfg.max_duration_s);
  const auto n = static_cast<std::size_t>(std::llround(dur * sr));

  const double f0 = rng.uniform(80.0, 300.0);
  const int n_harm = 3 + static_cast<int>(rng.below(3));
  const double vib_rate = rng.uniform(4.0, 7.0);
  const double vib_depth = rng.uniform(0.0, 0.02);
  const double env_rate = rng.uniform(2.0, 5.0);
  const double env_phase = rng.uniform(0.0, kTwoPi);
  std::vector<double> h_phase(static_cast<std::size_t>(n_harm));
  for (double& p : h_phase) p = rng.uniform(0.0, kTwoPi);

  // Harmonic h is Im(e^{i h phase} * e^{i h_phase}) / h; powers of e^{i phase}
  // replace per-harmonic sin calls.
  std::vector<std::complex<double>> rot(h_phase.size());
  for (std::size_t h = 0; h < rot.size(); ++h) rot[h] = std::polar(1.0 / static_cast<double>(h + 1), h_phase[h]);
  std::vector<double> voiced(n);
  double phase = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sr;
    const double f = f0 * (1.0 + vib_depth * std::sin(kTwoPi * vib_rate * t));
    const std::complex<double> z(std::cos(phase), std::sin(phase));
    std::complex<double> zh = z;
    double s = 0;
    for (const auto& r : rot) {
      s += (zh * r).imag();
      zh *= z;
    }
    voiced[i] = s * (0.6 + 0.4 * std::sin(kTwoPi * env_rate * t + env_phase));
    phase += kTwoPi * f / sr;
    if (phase >= kTwoPi) phase -= kTwoPi;
  }
  scale_to_rms(voiced, kHarmonicRms);

  const double noise_db = rng.uniform(-45.0, -35.0);  // RMS re 1.0
  auto noise = pink_noise(n, rng);
  scale_to_rms(noise, std::pow(10.0, noise_db / 20.0));

  SynthUtterance u;
  u.utt_id = [&] {
    char buf[32];
    std::snprintf(buf, sizeof buf, "utt%06zu", index);
    return std::string(buf);
  }();
  u.label = index < cfg.n_per_class ? Label::kBonafide : Label::kSpoof;
  u.wave.sample_rate = cfg.sample_rate;
  u.wave.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) u.wave.samples[i] = voiced[i] + noise[i];

  if (u.label == Label::kSpoof) {
    const double fa = rng.uniform(5000.0, 7500.0);
    const double pa = rng.uniform(0.0, kTwoPi);
    for (std::size_t i = 0; i < n; ++i)
      u.wave.samples[i] += kArtifactAmplitude * std::sin(kTwoPi * fa * static_cast<double>(i) / sr + pa);
    u.artifact_hz = fa;
  }

  if (cfg.gapped) {
    Rng gap_rng(cfg.seed ^ kGapSalt, index);
    const double thr = cfg.gap_thresholds_hz[gap_rng.below(cfg.gap_thresholds_hz.size())];
    u.wave = freqmask_at(u.wave, thr);
    u.gap_threshold_hz = thr;
  }

  // What the corpus stores on disk, so in-memory and file-backed runs agree.
  u.wave = from_pcm16(to_pcm16(u.wave), u.wave.sample_rate);
  return u;
}

Manifest synth_corpus(const SynthConfig& cfg, const std::filesystem::path& out_dir, unsigned jobs) {
  check(cfg);
  const auto wav_dir = out_dir / "wav";
  std::filesystem::create_directories(wav_dir);

  Manifest m;
  m.records.resize(cfg.size());
  parallel_for(cfg.size(), jobs, [&](std::size_t i) {
    const SynthUtterance u = synth_utterance(cfg, i);
    auto& r = m.records[i];
    r.utt_id = u.utt_id;
    r.path = wav_dir / (u.utt_id + ".wav");
    r.label = u.label;
    r.duration_s = u.wave.duration_s();
    write_wav(r.path, u.wave);
  });
  m.save(out_dir / "manifest.tsv");
  return m;
}

}  // namespace spoofkit
