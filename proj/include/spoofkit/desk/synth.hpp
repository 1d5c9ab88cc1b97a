#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spoofkit/audio/waveform.hpp"
#include "spoofkit/duration/manifest.hpp"

namespace spoofkit {

// Synthetic bona fide / spoof corpus.
//
// Bona fide: 3-5 harmonics of an F0 in [80, 300] Hz with slow vibrato and a
// syllable-rate envelope, plus 1/f noise across the whole band. Spoof: the
// same construction plus a steady tone in [5, 7.5] kHz at -20 dBFS peak.
// The gapped variant runs every file through freqmask with a threshold drawn
// from `gap_thresholds_hz`.
struct SynthConfig {
  std::size_t n_per_class = 100;
  std::uint64_t seed = 0;
  int sample_rate = 16000;
  double min_duration_s = 2.0;
  double max_duration_s = 12.0;
  bool gapped = false;
  std::vector<double> gap_thresholds_hz{4000.0, 5000.0, 6000.0, 7000.0};

  std::size_t size() const { return 2 * n_per_class; }
};

struct SynthUtterance {
  std::string utt_id;
  Label label = Label::kUnknown;
  Waveform wave;
  std::optional<double> artifact_hz;       // spoof tone frequency
  std::optional<double> gap_threshold_hz;  // gapped variant only
};

// Utterance `index` of the corpus: indices below n_per_class are bona fide,
// the rest spoof. The base signal depends only on (seed, index), so the
// clean and gapped variants of an index differ only by the mask.
SynthUtterance synth_utterance(const SynthConfig& cfg, std::size_t index);

// Writes `<out_dir>/wav/<utt_id>.wav` and `<out_dir>/manifest.tsv`.
Manifest synth_corpus(const SynthConfig& cfg, const std::filesystem::path& out_dir, unsigned jobs = 1);

}  // namespace spoofkit
