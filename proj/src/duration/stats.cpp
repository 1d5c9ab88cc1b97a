#include "spoofkit/duration/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spoofkit/error.hpp"

namespace spoofkit {

void DurationHistogram::write_csv(std::ostream& out) const {
  out << "bin_start_s,count\n";
  for (std::size_t i = 0; i < counts.size(); ++i) out << bin_start_s[i] << ',' << counts[i] << '\n';
}

DurationStats duration_stats(const std::vector<double>& durations_s, double bin_width_s) {
  if (durations_s.empty()) throw InvalidParameter("duration_stats: empty manifest");
  if (!(bin_width_s > 0.0)) throw InvalidParameter("duration_stats: bin width must be positive");
  DurationStats s;
  s.count = durations_s.size();
  const auto [lo, hi] = std::minmax_element(durations_s.begin(), durations_s.end());
  s.min_s = *lo;
  s.max_s = *hi;
  double sum = 0.0;
  for (double d : durations_s) sum += d;
  s.mean_s = sum / static_cast<double>(durations_s.size());

  const auto first = static_cast<long long>(std::floor(s.min_s / bin_width_s));
  const auto last = static_cast<long long>(std::floor(s.max_s / bin_width_s));
  auto& h = s.histogram;
  h.bin_width_s = bin_width_s;
  h.counts.assign(static_cast<std::size_t>(last - first + 1), 0);
  for (long long k = first; k <= last; ++k) h.bin_start_s.push_back(static_cast<double>(k) * bin_width_s);
  for (double d : durations_s) {
    const auto k = static_cast<long long>(std::floor(d / bin_width_s));
    ++h.counts[static_cast<std::size_t>(k - first)];
  }
  return s;
}

DurationStats duration_stats(const Manifest& m, double bin_width_s) {
  if (m.records.empty()) throw InvalidParameter("duration_stats: empty manifest");
  Manifest resolved = m;
  resolve_durations(resolved);
  std::vector<double> d;
  d.reserve(resolved.records.size());
  for (const auto& r : resolved.records) d.push_back(*r.duration_s);
  return duration_stats(d, bin_width_s);
}

}  // namespace spoofkit
