#pragma once

#include <ostream>
#include <vector>

#include "spoofkit/duration/manifest.hpp"

namespace spoofkit {

struct DurationHistogram {
  double bin_width_s = 1.0;
  std::vector<double> bin_start_s;
  std::vector<std::size_t> counts;

  // `bin_start_s,count` rows under a header line.
  void write_csv(std::ostream& out) const;
};

struct DurationStats {
  double min_s = 0, mean_s = 0, max_s = 0;
  std::size_t count = 0;
  DurationHistogram histogram;
};

// Bins are [k w, (k + 1) w) from the bin holding the minimum to the bin
// holding the maximum.
DurationStats duration_stats(const std::vector<double>& durations_s, double bin_width_s = 1.0);

// Uses manifest durations, reading WAV headers for rows that lack one.
DurationStats duration_stats(const Manifest& m, double bin_width_s = 1.0);

}  // namespace spoofkit
