#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "spoofkit/audio/waveform.hpp"

namespace spoofkit {

// Reads RIFF/WAVE PCM16. Multichannel input is downmixed by averaging the
// channels. Samples are scaled by 1/32768.
Waveform read_wav(const std::filesystem::path& path);

// Writes a canonical 44-byte-header mono PCM16 file. Samples are rounded to
// the nearest code and clamped to [-32768, 32767].
void write_wav(const std::filesystem::path& path, const Waveform& x);

// The sample codes write_wav would store, and their exact read-back.
std::vector<std::int16_t> to_pcm16(const Waveform& x);
Waveform from_pcm16(std::span<const std::int16_t> codes, int sample_rate);

struct WavInfo {
  int sample_rate = 0;
  int channels = 0;
  std::size_t frames = 0;
  double duration_s() const { return static_cast<double>(frames) / sample_rate; }
};

// Header-only read; validates the format like read_wav.
WavInfo read_wav_info(const std::filesystem::path& path);

}  // namespace spoofkit
