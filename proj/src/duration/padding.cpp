#include "spoofkit/duration/padding.hpp"

#include <cmath>
#include <string>

#include "spoofkit/error.hpp"

namespace spoofkit {

Waveform pad_or_truncate(const Waveform& x, double target_s) {
  if (!(target_s > 0.0) || !std::isfinite(target_s)) {
    throw InvalidParameter("pad_or_truncate: target must be positive, got " + std::to_string(target_s));
  }
  require_nonempty(x, "pad_or_truncate");
  const auto target = static_cast<std::size_t>(std::llround(target_s * x.sample_rate));
  Waveform y;
  y.sample_rate = x.sample_rate;
  y.samples.resize(target);
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < target; ++i) y.samples[i] = x.samples[i % n];
  return y;
}

PaddedBatch batch_pad(const std::vector<FeatureSequence>& seqs) {
  if (seqs.empty()) throw ShapeError("batch_pad: empty batch");
  PaddedBatch b;
  b.batch = seqs.size();
  b.dim = seqs.front().dim;
  for (const auto& s : seqs) {
    if (s.dim != b.dim) {
      throw ShapeError("batch_pad: feature dim " + std::to_string(s.dim) + " of '" + s.utt_id +
                       "' differs from " + std::to_string(b.dim));
    }
    if (s.dim == 0 || s.frames.size() % s.dim != 0 || s.length() == 0) {
      throw ShapeError("batch_pad: sequence '" + s.utt_id + "' is not a non-empty L x D matrix");
    }
    b.max_length = std::max(b.max_length, s.length());
    b.lengths.push_back(s.length());
  }
  b.data.assign(b.batch * b.max_length * b.dim, 0.0);
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    std::copy(seqs[i].frames.begin(), seqs[i].frames.end(),
              b.data.begin() + static_cast<std::ptrdiff_t>(i * b.max_length * b.dim));
  }
  return b;
}

std::vector<FeatureSequence> batch_unpad(const PaddedBatch& batch) {
  std::vector<FeatureSequence> out(batch.batch);
  for (std::size_t i = 0; i < batch.batch; ++i) {
    out[i].dim = batch.dim;
    const auto begin = batch.data.begin() + static_cast<std::ptrdiff_t>(i * batch.max_length * batch.dim);
    out[i].frames.assign(begin, begin + static_cast<std::ptrdiff_t>(batch.lengths[i] * batch.dim));
  }
  return out;
}

}  // namespace spoofkit
