#include "spoofkit/duration/manifest.hpp"

#include <spdlog/spdlog.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "spoofkit/audio/wav.hpp"
#include "spoofkit/error.hpp"

namespace spoofkit {
namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

Label parse_label(const std::string& s) {
  if (s == "bonafide") return Label::kBonafide;
  if (s == "spoof") return Label::kSpoof;
  if (s == "unknown") return Label::kUnknown;
  throw FormatError("unknown label '" + s + "' (expected bonafide, spoof or unknown)");
}

std::string label_name(Label l) {
  switch (l) {
    case Label::kBonafide: return "bonafide";
    case Label::kSpoof: return "spoof";
    case Label::kUnknown: return "unknown";
  }
  return "?";
}

Manifest Manifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string() + ": cannot open manifest");
  Manifest m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_tabs(line);
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (f.size() != 3 && f.size() != 4) {
      throw FormatError(where + ": expected 3 or 4 tab-separated columns, got " + std::to_string(f.size()));
    }
    ManifestRecord r;
    r.utt_id = f[0];
    r.path = f[1];
    if (r.path.is_relative()) r.path = path.parent_path() / r.path;
    try {
      r.label = parse_label(f[2]);
    } catch (const FormatError& e) {
      throw FormatError(where + ": " + e.what());
    }
    if (f.size() == 4 && !f[3].empty()) {
      double d = 0;
      const auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), d);
      if (ec != std::errc() || ptr != f[3].data() + f[3].size()) {
        throw FormatError(where + ": bad duration '" + f[3] + "'");
      }
      r.duration_s = d;
    }
    m.records.push_back(std::move(r));
  }
  m.validate();
  return m;
}

void Manifest::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw FormatError(path.string() + ": cannot open for writing");
  const auto base = path.parent_path();
  out << "# utt_id\tpath\tlabel\tduration_s\n";
  for (const auto& r : records) {
    auto p = r.path;
    if (!base.empty()) {
      const auto rel = p.lexically_relative(base);
      if (!rel.empty() && *rel.begin() != "..") p = rel;
    }
    out << r.utt_id << '\t' << p.generic_string() << '\t' << label_name(r.label);
    if (r.duration_s) {
      std::ostringstream d;
      d.precision(17);
      d << *r.duration_s;
      out << '\t' << d.str();
    }
    out << '\n';
  }
}

void Manifest::validate() const {
  std::set<std::string> seen;
  for (const auto& r : records) {
    if (!seen.insert(r.utt_id).second) throw FormatError("manifest: duplicate utt_id '" + r.utt_id + "'");
    if (r.duration_s && !(*r.duration_s >= 0.0)) {
      throw FormatError("manifest: negative duration for '" + r.utt_id + "'");
    }
  }
}

void resolve_durations(Manifest& m) {
  for (auto& r : m.records) {
    std::optional<double> header;
    if (!r.duration_s || std::filesystem::exists(r.path)) {
      if (!r.duration_s) {
        r.duration_s = read_wav_info(r.path).duration_s();
        continue;
      }
      header = read_wav_info(r.path).duration_s();
    }
    if (header && std::abs(*header - *r.duration_s) > 0.010) {
      spdlog::warn("{}: manifest duration {:.3f} s differs from WAV header {:.3f} s", r.utt_id,
                   *r.duration_s, *header);
      r.duration_s = header;
    }
  }
}

}  // namespace spoofkit
