#include "spoofkit/audio/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "spoofkit/error.hpp"

namespace spoofkit {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}
void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

struct Parsed {
  WavInfo info;
  std::size_t data_offset = 0;
  std::size_t data_bytes = 0;
};

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& msg) {
  throw FormatError(path.string() + ": " + msg);
}

// Walks the RIFF chunk list. `bytes` may be a header prefix only when
// `header_only` is set, in which case the data chunk may be truncated.
Parsed parse(const std::filesystem::path& path, const std::vector<unsigned char>& bytes,
             std::uintmax_t file_size) {
  if (bytes.size() < 12) fail(path, "file too short for a RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0) fail(path, "chunk id is not 'RIFF'");
  if (std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) fail(path, "RIFF form type is not 'WAVE'");

  Parsed p;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || pos + 8 + 16 > bytes.size()) fail(path, "fmt chunk too short");
      const unsigned char* f = chunk + 8;
      std::uint16_t format = le16(f);
      const std::uint16_t channels = le16(f + 2);
      const std::uint32_t rate = le32(f + 4);
      const std::uint16_t block_align = le16(f + 12);
      const std::uint16_t bits = le16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 40 || pos + 8 + 40 > bytes.size()) fail(path, "extensible fmt chunk too short");
        format = le16(f + 24);  // first two bytes of the sub-format GUID
      }
      if (format != kFormatPcm) fail(path, "audio_format " + std::to_string(format) + " is not PCM");
      if (bits != 16) fail(path, "bits_per_sample " + std::to_string(bits) + " is not 16");
      if (channels == 0) fail(path, "num_channels is 0");
      if (rate == 0) fail(path, "sample_rate is 0");
      if (block_align != channels * 2) fail(path, "block_align " + std::to_string(block_align) + " inconsistent with PCM16");
      p.info.channels = channels;
      p.info.sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) fail(path, "data chunk precedes fmt chunk");
      if (size == 0) fail(path, "data chunk is empty");
      p.data_offset = pos + 8;
      p.data_bytes = size;
      if (p.data_offset + size > file_size) fail(path, "data chunk size exceeds file size");
      if (size % (2u * p.info.channels) != 0) fail(path, "data chunk size not a multiple of block_align");
      p.info.frames = size / (2u * p.info.channels);
      return p;
    }
    pos += 8 + size + (size & 1u);
  }
  if (!have_fmt) fail(path, "missing fmt chunk");
  fail(path, "missing data chunk");
}

std::vector<unsigned char> slurp(const std::filesystem::path& path, std::size_t max_bytes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": cannot open");
  std::vector<unsigned char> buf(max_bytes);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(max_bytes));
  buf.resize(static_cast<std::size_t>(in.gcount()));
  return buf;
}

}  // namespace

WavInfo read_wav_info(const std::filesystem::path& path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw FormatError(path.string() + ": cannot open");
  // Headers with extra chunks (LIST, fact) still fit comfortably.
  const auto bytes = slurp(path, static_cast<std::size_t>(std::min<std::uintmax_t>(size, 1 << 16)));
  return parse(path, bytes, size).info;
}

Waveform read_wav(const std::filesystem::path& path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw FormatError(path.string() + ": cannot open");
  const auto bytes = slurp(path, static_cast<std::size_t>(size));
  const Parsed p = parse(path, bytes, size);

  Waveform x;
  x.sample_rate = p.info.sample_rate;
  x.samples.resize(p.info.frames);
  const int ch = p.info.channels;
  const unsigned char* d = bytes.data() + p.data_offset;
  for (std::size_t i = 0; i < p.info.frames; ++i) {
    double acc = 0.0;
    for (int c = 0; c < ch; ++c) {
      acc += static_cast<std::int16_t>(le16(d + 2 * (i * ch + c)));
    }
    x.samples[i] = acc / (32768.0 * ch);
  }
  return x;
}

std::vector<std::int16_t> to_pcm16(const Waveform& x) {
  std::vector<std::int16_t> codes(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x.samples[i];
    if (!std::isfinite(v)) throw InvalidParameter("write_wav: non-finite sample");
    codes[i] = static_cast<std::int16_t>(std::clamp(std::nearbyint(v * 32768.0), -32768.0, 32767.0));
  }
  return codes;
}

Waveform from_pcm16(std::span<const std::int16_t> codes, int sample_rate) {
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) w.samples[i] = codes[i] / 32768.0;
  return w;
}

void write_wav(const std::filesystem::path& path, const Waveform& x) {
  if (x.sample_rate <= 0) throw InvalidParameter("write_wav: sample rate must be positive");
  const std::size_t data_bytes = x.size() * 2;
  if (data_bytes > 0xFFFFFFFFu - 36) throw InvalidParameter("write_wav: waveform too long for RIFF");

  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put32(out, static_cast<std::uint32_t>(36 + data_bytes));
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(x.sample_rate));
  put32(out, static_cast<std::uint32_t>(x.sample_rate) * 2);
  put16(out, 2);
  put16(out, 16);
  out += "data";
  put32(out, static_cast<std::uint32_t>(data_bytes));
  for (std::int16_t code : to_pcm16(x)) put16(out, static_cast<std::uint16_t>(code));

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FormatError(path.string() + ": cannot open for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw FormatError(path.string() + ": write failed");
}

}  // namespace spoofkit
