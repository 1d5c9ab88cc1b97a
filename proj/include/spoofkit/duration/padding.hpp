#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spoofkit/audio/waveform.hpp"

namespace spoofkit {

// Keeps the first round(target_s * sr) samples, or tiles the waveform
// end-to-end until that many samples exist.
Waveform pad_or_truncate(const Waveform& x, double target_s);

// L x D feature matrix, row-major.
struct FeatureSequence {
  std::string utt_id;
  std::size_t dim = 0;
  std::vector<double> frames;

  std::size_t length() const { return dim == 0 ? 0 : frames.size() / dim; }
};

// B x L_max x D, zero beyond each sequence's length.
struct PaddedBatch {
  std::size_t batch = 0, max_length = 0, dim = 0;
  std::vector<double> data;
  std::vector<std::size_t> lengths;

  double at(std::size_t b, std::size_t l, std::size_t d) const {
    return data[(b * max_length + l) * dim + d];
  }
};

PaddedBatch batch_pad(const std::vector<FeatureSequence>& seqs);

// Inverse of batch_pad using the stored lengths. Ids are not carried.
std::vector<FeatureSequence> batch_unpad(const PaddedBatch& batch);

}  // namespace spoofkit
