#include "spoofkit/desk/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <spdlog/spdlog.h>

#include "spoofkit/audio/wav.hpp"
#include "spoofkit/error.hpp"
#include "spoofkit/parallel.hpp"
#include "spoofkit/rng.hpp"

namespace spoofkit {
namespace {

// log(1 + e^z) without overflow
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double dot(std::span<const double> w, std::span<const double> x) {
  double s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
  return s;
}

double weight_of(int y, ClassWeights cw) { return y == 1 ? cw.bonafide : cw.spoof; }

void check_rows(const FeatureSet& data, std::span<const double> w, std::span<const std::size_t> rows) {
  if (w.size() != data.dim) throw ShapeError("weight vector does not match feature dim");
  if (rows.empty()) throw InvalidParameter("empty batch");
  for (std::size_t r : rows)
    if (r >= data.size()) throw InvalidParameter("batch row out of range");
}

}  // namespace

void TrainConfig::validate() const {
  if (!(lr0 > 0) || !std::isfinite(lr0)) throw InvalidParameter("train: lr0 must be positive");
  if (epochs < 1) throw InvalidParameter("train: epochs must be >= 1");
  if (lr_halving_period < 1) throw InvalidParameter("train: lr_halving_period must be >= 1");
  if (!(weight_bonafide > 0) || !(weight_spoof > 0))
    throw InvalidParameter("train: class weights must be positive");
  if (batch_size < 1) throw InvalidParameter("train: batch_size must be >= 1");
}

double TrainConfig::learning_rate(int epoch) const {
  return lr0 * std::ldexp(1.0, -(epoch / lr_halving_period));
}

double weighted_ce_loss(std::span<const double> w, double b, const FeatureSet& data,
                        std::span<const std::size_t> rows, ClassWeights cw) {
  check_rows(data, w, rows);
  double num = 0, den = 0;
  for (std::size_t r : rows) {
    const double s = dot(w, data.row(r)) + b;
    const double c = weight_of(data.y[r], cw);
    num += c * (data.y[r] == 1 ? softplus(-s) : softplus(s));
    den += c;
  }
  return num / den;
}

void weighted_ce_gradient(std::span<const double> w, double b, const FeatureSet& data,
                          std::span<const std::size_t> rows, ClassWeights cw,
                          std::span<double> grad_w, double& grad_b) {
  check_rows(data, w, rows);
  if (grad_w.size() != data.dim) throw ShapeError("gradient buffer does not match feature dim");
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_b = 0;
  double den = 0;
  for (std::size_t r : rows) {
    const auto x = data.row(r);
    const double c = weight_of(data.y[r], cw);
    const double g = c * (sigmoid(dot(w, x) + b) - data.y[r]);
    for (std::size_t i = 0; i < x.size(); ++i) grad_w[i] += g * x[i];
    grad_b += g;
    den += c;
  }
  for (double& g : grad_w) g /= den;
  grad_b /= den;
}

TrainResult train_on_features(const std::function<FeatureSet(int)>& epoch_features, const TrainConfig& cfg) {
  cfg.validate();
  const ClassWeights cw{cfg.weight_bonafide, cfg.weight_spoof};

  FeatureSet data = epoch_features(0);
  const std::size_t n = data.size();
  const std::size_t D = data.dim;
  if (n == 0 || D == 0) throw InvalidParameter("train: empty training set");
  const auto n_bona = static_cast<std::size_t>(std::count(data.y.begin(), data.y.end(), 1));
  if (n_bona == 0 || n_bona == n) throw InvalidParameter("train: training set must contain both classes");

  // Standardisation from epoch 0 only, so the scale is fixed across epochs.
  std::vector<double> mu(D, 0.0), sd(D, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < D; ++j) mu[j] += data.x[r * D + j];
  for (double& m : mu) m /= static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < D; ++j) {
      const double d = data.x[r * D + j] - mu[j];
      sd[j] += d * d;
    }
  for (double& s : sd) {
    s = std::sqrt(s / static_cast<double>(n));
    if (s < 1e-12) s = 1.0;  // constant feature
  }
  auto standardise = [&](FeatureSet& f) {
    if (f.dim != D || f.size() != n) throw ShapeError("train: epoch features changed shape");
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t j = 0; j < D; ++j) f.x[r * D + j] = (f.x[r * D + j] - mu[j]) / sd[j];
  };

  std::vector<double> w(D, 0.0), gw(D);
  double b = 0, gb = 0;
  std::vector<std::size_t> order(n), all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;

  TrainResult res;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_w = w;
  double best_b = b;
  Rng rng(cfg.seed, 0x7368756666ULL);

  for (int e = 0; e < cfg.epochs; ++e) {
    if (e > 0) data = epoch_features(e);
    standardise(data);

    order = all;
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    const double lr = cfg.learning_rate(e);
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::span<const std::size_t> batch(order.data() + start, std::min(cfg.batch_size, n - start));
      weighted_ce_gradient(w, b, data, batch, cw, gw, gb);
      for (std::size_t j = 0; j < D; ++j) w[j] -= lr * gw[j];
      b -= lr * gb;
    }

    const double loss = weighted_ce_loss(w, b, data, all, cw);
    res.epoch_loss.push_back(loss);
    spdlog::debug("epoch {} lr {:.3g} loss {:.6f}", e, lr, loss);
    if (loss < best) {
      best = loss;
      best_w = w;
      best_b = b;
      res.best_epoch = e;
    }
  }

  // Fold the standardisation into the raw-feature model.
  res.model.weights.resize(D);
  res.model.bias = best_b;
  for (std::size_t j = 0; j < D; ++j) {
    res.model.weights[j] = best_w[j] / sd[j];
    res.model.bias -= best_w[j] * mu[j] / sd[j];
  }
  return res;
}

Waveform ManifestSource::load(std::size_t i) const { return read_wav(m_.records.at(i).path); }

std::string SyntheticSource::utt_id(std::size_t i) const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "utt%06zu", i);
  return buf;
}

Label SyntheticSource::label(std::size_t i) const {
  return i < cfg_.n_per_class ? Label::kBonafide : Label::kSpoof;
}

Waveform SyntheticSource::load(std::size_t i) const { return synth_utterance(cfg_, i).wave; }

PcmCache::PcmCache(const UtteranceSource& inner)
    : inner_(inner), pcm_(inner.size()), rate_(inner.size(), 0), once_(new std::once_flag[inner.size()]) {}

Waveform PcmCache::load(std::size_t i) const {
  if (i >= size()) throw InvalidParameter("utterance index out of range");
  std::call_once(once_[i], [&] {
    const Waveform w = inner_.load(i);
    pcm_[i] = to_pcm16(w);
    rate_[i] = w.sample_rate;
  });
  return from_pcm16(pcm_[i], rate_[i]);
}

namespace {

FeatureSet empty_features(const UtteranceSource& source, const FeatureConfig& fcfg) {
  FeatureSet f;
  f.dim = fcfg.dim();
  f.x.assign(source.size() * f.dim, 0.0);
  f.y.resize(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    switch (source.label(i)) {
      case Label::kBonafide: f.y[i] = 1; break;
      case Label::kSpoof: f.y[i] = 0; break;
      default: throw InvalidParameter("train: utterance " + source.utt_id(i) + " has no bonafide/spoof label");
    }
  }
  return f;
}

}  // namespace

TrainResult train(const UtteranceSource& source, const AugmentPolicy& policy, const NoiseBank& bank,
                  const FeatureConfig& fcfg, const TrainConfig& tcfg) {
  fcfg.validate();
  tcfg.validate();
  policy.validate();
  const std::size_t n = source.size();
  const std::size_t D = fcfg.dim();

  FeatureSet clean = empty_features(source, fcfg);
  parallel_for(n, tcfg.jobs, [&](std::size_t i) {
    const auto f = extract_features(source.load(i), fcfg);
    std::copy(f.begin(), f.end(), clean.x.begin() + static_cast<std::ptrdiff_t>(i * D));
  });

  auto epoch_features = [&](int e) {
    FeatureSet f = clean;
    std::vector<std::size_t> fire;
    for (std::size_t i = 0; i < n; ++i)
      if (!policy_is_noop(policy, Rng(policy.seed, stream_id(static_cast<std::uint64_t>(e), i))))
        fire.push_back(i);
    parallel_for(fire.size(), tcfg.jobs, [&](std::size_t k) {
      const std::size_t i = fire[k];
      Rng rng(policy.seed, stream_id(static_cast<std::uint64_t>(e), i));
      const auto v = extract_features(apply_policy(source.load(i), policy, bank, rng), fcfg);
      std::copy(v.begin(), v.end(), f.x.begin() + static_cast<std::ptrdiff_t>(i * D));
    });
    spdlog::debug("epoch {}: augmented {}/{} utterances", e, fire.size(), n);
    return f;
  };
  return train_on_features(epoch_features, tcfg);
}

TrainResult train(const Manifest& manifest, const AugmentPolicy& policy, const NoiseBank& bank,
                  const FeatureConfig& fcfg, const TrainConfig& tcfg) {
  const ManifestSource src(manifest);
  const PcmCache cached(src);
  return train(cached, policy, bank, fcfg, tcfg);
}

ScoreSet score_trials(const DeskModel& model, const UtteranceSource& source, const FeatureConfig& fcfg,
                      unsigned jobs) {
  fcfg.validate();
  if (model.dim() != fcfg.dim())
    throw ShapeError("model has " + std::to_string(model.dim()) + " weights but the feature config yields " +
                     std::to_string(fcfg.dim()) + " features");
  ScoreSet out;
  out.entries.resize(source.size());
  parallel_for(source.size(), jobs, [&](std::size_t i) {
    out.entries[i].utt_id = source.utt_id(i);
    out.entries[i].score = model.score(extract_features(source.load(i), fcfg));
  });
  return out;
}

ScoreSet score_trials(const DeskModel& model, const Manifest& manifest, const FeatureConfig& fcfg,
                      unsigned jobs) {
  return score_trials(model, ManifestSource(manifest), fcfg, jobs);
}

}  // namespace spoofkit
