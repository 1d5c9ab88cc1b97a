#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace spoofkit {

enum class Label { kBonafide, kSpoof, kUnknown };

Label parse_label(const std::string& s);
std::string label_name(Label l);

struct ManifestRecord {
  std::string utt_id;
  std::filesystem::path path;
  Label label = Label::kUnknown;
  std::optional<double> duration_s;
};

// Trial list. Rows are TSV `utt_id  path  label  [duration_s]`; `#` lines
// are comments. Relative paths are resolved against the manifest directory.
struct Manifest {
  std::vector<ManifestRecord> records;

  static Manifest load(const std::filesystem::path& path);
  // Paths are written relative to `path`'s directory when they live below it.
  void save(const std::filesystem::path& path) const;
  // Unique ids, non-negative durations.
  void validate() const;
};

// Fills missing durations from WAV headers. Where both exist and disagree by
// more than 10 ms, a warning is logged and the header value wins.
void resolve_durations(Manifest& m);

}  // namespace spoofkit
