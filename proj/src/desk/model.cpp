#include "spoofkit/desk/model.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "spoofkit/error.hpp"

namespace spoofkit {
namespace {

constexpr char kMagic[4] = {'S', 'K', 'D', 'M'};
constexpr std::uint8_t kVersion = 1;

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

double DeskModel::score(std::span<const double> features) const {
  if (features.size() != weights.size())
    throw ShapeError("model expects " + std::to_string(weights.size()) + " features, got " +
                     std::to_string(features.size()));
  double s = bias;
  for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * features[i];
  return s;
}

void DeskModel::save(const std::filesystem::path& path) const {
  if (weights.size() > 0xFFFFFFFFu) throw InvalidParameter("model too large");
  std::string out(kMagic, 4);
  out.push_back(static_cast<char>(kVersion));
  const auto dim = static_cast<std::uint32_t>(weights.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((dim >> (8 * i)) & 0xFF));
  for (double w : weights) {
    if (!std::isfinite(w)) throw InvalidParameter("model has a non-finite weight");
    put_u64(out, std::bit_cast<std::uint64_t>(w));
  }
  if (!std::isfinite(bias)) throw InvalidParameter("model has a non-finite bias");
  put_u64(out, std::bit_cast<std::uint64_t>(bias));

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FormatError(path.string() + ": cannot open for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw FormatError(path.string() + ": write failed");
}

DeskModel DeskModel::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError(path.string() + ": cannot open");
  const std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());

  if (buf.size() < 9 || std::memcmp(p, kMagic, 4) != 0)
    throw FormatError(path.string() + ": bad magic, not a model file");
  if (p[4] != kVersion)
    throw FormatError(path.string() + ": unsupported version " + std::to_string(p[4]));
  const std::uint32_t dim = static_cast<std::uint32_t>(p[5]) | (static_cast<std::uint32_t>(p[6]) << 8) |
                            (static_cast<std::uint32_t>(p[7]) << 16) | (static_cast<std::uint32_t>(p[8]) << 24);
  const std::size_t expected = 9 + 8 * (static_cast<std::size_t>(dim) + 1);
  if (buf.size() != expected)
    throw FormatError(path.string() + ": dim " + std::to_string(dim) + " implies " + std::to_string(expected) +
                      " bytes, file has " + std::to_string(buf.size()));

  DeskModel m;
  m.weights.resize(dim);
  for (std::uint32_t i = 0; i < dim; ++i) m.weights[i] = std::bit_cast<double>(get_u64(p + 9 + 8 * i));
  m.bias = std::bit_cast<double>(get_u64(p + 9 + 8 * std::size_t{dim}));
  for (double w : m.weights)
    if (!std::isfinite(w)) throw FormatError(path.string() + ": non-finite weight");
  if (!std::isfinite(m.bias)) throw FormatError(path.string() + ": non-finite bias");
  return m;
}

}  // namespace spoofkit
