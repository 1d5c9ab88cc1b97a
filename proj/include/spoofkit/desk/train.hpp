#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "spoofkit/augment/policy.hpp"
#include "spoofkit/desk/features.hpp"
#include "spoofkit/desk/model.hpp"
#include "spoofkit/desk/synth.hpp"
#include "spoofkit/duration/manifest.hpp"
#include "spoofkit/metrics/scores.hpp"

namespace spoofkit {

struct TrainConfig {
  double lr0 = 5e-4;
  int epochs = 20;
  int lr_halving_period = 2;
  double weight_bonafide = 10.0;
  double weight_spoof = 1.0;
  std::size_t batch_size = 8;
  std::uint64_t seed = 0;
  unsigned jobs = 1;

  void validate() const;
  // lr0 * 0.5^floor(epoch / lr_halving_period), epochs counted from 0.
  double learning_rate(int epoch) const;
};

// Dense labelled feature matrix; label 1 = bona fide, 0 = spoof.
struct FeatureSet {
  std::size_t dim = 0;
  std::vector<double> x;  // n x dim, row-major
  std::vector<int> y;

  std::size_t size() const { return y.size(); }
  std::span<const double> row(std::size_t i) const { return {x.data() + i * dim, dim}; }
};

struct ClassWeights {
  double bonafide = 10.0;
  double spoof = 1.0;
};

// Weighted logistic cross-entropy over the rows in `rows`, normalised by
// the summed class weights of those rows.
double weighted_ce_loss(std::span<const double> w, double b, const FeatureSet& data,
                        std::span<const std::size_t> rows, ClassWeights cw);
// Gradient of weighted_ce_loss; grad_w must have data.dim entries.
void weighted_ce_gradient(std::span<const double> w, double b, const FeatureSet& data,
                          std::span<const std::size_t> rows, ClassWeights cw,
                          std::span<double> grad_w, double& grad_b);

struct TrainResult {
  DeskModel model;
  std::vector<double> epoch_loss;
  int best_epoch = 0;
};

// Mini-batch gradient descent on the features `epoch_features(e)` returns
// for each epoch. Features are standardised with the statistics of epoch 0;
// the returned model folds the standardisation back in, so it scores raw
// features. The snapshot with the lowest end-of-epoch loss over that epoch's
// features is kept.
TrainResult train_on_features(const std::function<FeatureSet(int)>& epoch_features,
                              const TrainConfig& cfg);

// Anything that can hand out labelled utterances by index.
class UtteranceSource {
 public:
  virtual ~UtteranceSource() = default;
  virtual std::size_t size() const = 0;
  virtual std::string utt_id(std::size_t i) const = 0;
  virtual Label label(std::size_t i) const = 0;
  virtual Waveform load(std::size_t i) const = 0;
};

class ManifestSource : public UtteranceSource {
 public:
  explicit ManifestSource(Manifest m) : m_(std::move(m)) {}
  std::size_t size() const override { return m_.records.size(); }
  std::string utt_id(std::size_t i) const override { return m_.records[i].utt_id; }
  Label label(std::size_t i) const override { return m_.records[i].label; }
  Waveform load(std::size_t i) const override;

 private:
  Manifest m_;
};

// Regenerates synthetic utterances on demand instead of holding them.
class SyntheticSource : public UtteranceSource {
 public:
  explicit SyntheticSource(SynthConfig cfg) : cfg_(std::move(cfg)) {}
  std::size_t size() const override { return cfg_.size(); }
  std::string utt_id(std::size_t i) const override;
  Label label(std::size_t i) const override;
  Waveform load(std::size_t i) const override;

 private:
  SynthConfig cfg_;
};

// Keeps the PCM16 codes of every utterance `inner` hands out, so repeated
// loads across epochs skip decoding or regeneration. Loads are exact for
// sources whose samples are already PCM16 codes / 32768 (WAV files, synth).
class PcmCache : public UtteranceSource {
 public:
  explicit PcmCache(const UtteranceSource& inner);
  std::size_t size() const override { return inner_.size(); }
  std::string utt_id(std::size_t i) const override { return inner_.utt_id(i); }
  Label label(std::size_t i) const override { return inner_.label(i); }
  Waveform load(std::size_t i) const override;

 private:
  const UtteranceSource& inner_;
  mutable std::vector<std::vector<std::int16_t>> pcm_;
  mutable std::vector<int> rate_;
  std::unique_ptr<std::once_flag[]> once_;
};

// Full recipe: per-epoch augmentation of every training utterance (stream
// = (epoch, index) under policy.seed), feature extraction, then
// train_on_features.
TrainResult train(const UtteranceSource& source, const AugmentPolicy& policy, const NoiseBank& bank,
                  const FeatureConfig& fcfg, const TrainConfig& tcfg);
TrainResult train(const Manifest& manifest, const AugmentPolicy& policy, const NoiseBank& bank,
                  const FeatureConfig& fcfg, const TrainConfig& tcfg);

// One logit per utterance, in source order.
ScoreSet score_trials(const DeskModel& model, const UtteranceSource& source, const FeatureConfig& fcfg,
                      unsigned jobs = 1);
ScoreSet score_trials(const DeskModel& model, const Manifest& manifest, const FeatureConfig& fcfg,
                      unsigned jobs = 1);

}  // namespace spoofkit
