#pragma once

// Slow, obviously-correct reference implementations. Nothing here calls into
// the library, so agreement with it means something.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

inline std::vector<std::complex<double>> dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> X(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k * t % n) / static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    X[k] = acc;
  }
  return X;
}

inline std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  return w;
}

inline std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> y(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) y[i + j] += a[i] * b[j];
  return y;
}

struct Dcf {
  double p_target, c_miss, c_fa;
};

inline double dcf(double p_miss, double p_fa, Dcf c) {
  const double norm = std::min(c.c_miss * c.p_target, c.c_fa * (1 - c.p_target));
  return (c.c_miss * c.p_target * p_miss + c.c_fa * (1 - c.p_target) * p_fa) / norm;
}

struct SweepResult {
  double eer;
  double min_dcf;
  bool resolved;  // every gap between distinct scores held a grid point
};

// Evaluates (Pmiss, Pfa) on n_points thresholds evenly spaced from below the
// lowest score to above the highest, accepting score >= t. EER interpolates
// linearly between the consecutive distinct points where Pmiss - Pfa changes
// sign, capped at 0.5.
inline SweepResult sweep(std::vector<double> bona, std::vector<double> spoof, Dcf c,
                         std::size_t n_points = 1000000) {
  std::sort(bona.begin(), bona.end());
  std::sort(spoof.begin(), spoof.end());
  const double lo = std::min(bona.front(), spoof.front()) - 1.0;
  const double hi = std::max(bona.back(), spoof.back()) + 1.0;
  const double nb = static_cast<double>(bona.size()), ns = static_cast<double>(spoof.size());

  std::vector<std::pair<double, double>> pts;  // distinct (Pmiss, Pfa) in sweep order
  std::size_t ib = 0, is = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < n_points; ++g) {
    const double t = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(n_points - 1);
    while (ib < bona.size() && bona[ib] < t) ++ib;
    while (is < spoof.size() && spoof[is] < t) ++is;
    const double pm = static_cast<double>(ib) / nb;
    const double pf = (ns - static_cast<double>(is)) / ns;
    best = std::min(best, dcf(pm, pf, c));
    if (pts.empty() || pts.back() != std::make_pair(pm, pf)) pts.emplace_back(pm, pf);
  }

  std::vector<double> all(bona);
  all.insert(all.end(), spoof.begin(), spoof.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  const bool resolved = pts.size() == all.size() + 1;

  double e = 0.5;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = pts[i].first - pts[i].second;
    if (d < 0) continue;
    if (d == 0 || i == 0) {
      e = pts[i].first;
    } else {
      const double dp = pts[i - 1].first - pts[i - 1].second;
      const double a = dp / (dp - d);
      e = pts[i - 1].first + a * (pts[i].first - pts[i - 1].first);
    }
    break;
  }
  return {std::min(e, 0.5), best, resolved};
}

inline double cllr(const std::vector<double>& bona, const std::vector<double>& spoof) {
  double a = 0, b = 0;
  for (double s : bona) a += std::log2(1.0 + std::exp(-s));
  for (double s : spoof) b += std::log2(1.0 + std::exp(s));
  return 0.5 * (a / static_cast<double>(bona.size()) + b / static_cast<double>(spoof.size()));
}

// Central differences of f around x.
inline std::vector<double> gradient_fd(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h = 1e-6) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double x0 = x[i];
    x[i] = x0 + h;
    const double up = f(x);
    x[i] = x0 - h;
    const double dn = f(x);
    x[i] = x0;
    g[i] = (up - dn) / (2 * h);
  }
  return g;
}

// Every weight vector with entries k * step summing to 1, recursively.
inline std::vector<std::vector<double>> simplex(std::size_t dims, double step) {
  const int units = static_cast<int>(std::lround(1.0 / step));
  std::vector<std::vector<double>> out;
  std::vector<int> cur(dims, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t d, int left) {
    if (d + 1 == dims) {
      cur[d] = left;
      std::vector<double> w(dims);
      for (std::size_t i = 0; i < dims; ++i) w[i] = cur[i] * step;
      out.push_back(w);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[d] = k;
      rec(d + 1, left - k);
    }
  };
  rec(0, units);
  return out;
}

inline double energy(const std::vector<double>& x) {
  double e = 0;
  for (double v : x) e += v * v;
  return e;
}

}  // namespace oracle
