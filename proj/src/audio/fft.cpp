#include "spoofkit/audio/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <new>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "spoofkit/error.hpp"

namespace spoofkit::fft {
namespace {

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  ~Plans() {
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

// SIMD-aligned staging buffers; plans are made for this alignment and every
// transform goes through them.
struct Scratch {
  std::size_t n = 0;
  std::unique_ptr<double, FftwFree> re;
  std::unique_ptr<fftw_complex, FftwFree> co;

  void ensure(std::size_t size) {
    if (n == size) return;
    re.reset(fftw_alloc_real(size));
    co.reset(fftw_alloc_complex(size / 2 + 1));
    if (!re || !co) throw std::bad_alloc();
    n = size;
  }
};

Scratch& scratch_for(std::size_t n) {
  thread_local Scratch s;
  s.ensure(n);
  return s;
}

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per size under a lock and then looked up
// through a per-thread cache. FFTW_ESTIMATE keeps the plan, and so every
// output bit, independent of timing.
const Plans& plans_for(std::size_t n) {
  thread_local std::unordered_map<std::size_t, const Plans*> local;
  if (auto it = local.find(n); it != local.end()) return *it->second;

  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<Plans>> global;
  std::lock_guard lock(mu);
  auto& slot = global[n];
  if (!slot) {
    auto p = std::make_unique<Plans>();
    Scratch tmp;
    tmp.ensure(n);
    const int len = static_cast<int>(n);
    p->forward = fftw_plan_dft_r2c_1d(len, tmp.re.get(), tmp.co.get(), FFTW_ESTIMATE);
    p->inverse = fftw_plan_dft_c2r_1d(len, tmp.co.get(), tmp.re.get(), FFTW_ESTIMATE);
    if (!p->forward || !p->inverse) throw Error("FFTW planning failed");
    slot = std::move(p);
  }
  local.emplace(n, slot.get());
  return *slot;
}

}  // namespace

void rfft(std::span<const double> in, std::span<std::complex<double>> out) {
  const std::size_t n = in.size();
  if (n == 0 || out.size() != n / 2 + 1) throw InvalidParameter("rfft: bad buffer sizes");
  const Plans& p = plans_for(n);
  Scratch& s = scratch_for(n);
  std::copy(in.begin(), in.end(), s.re.get());
  fftw_execute_dft_r2c(p.forward, s.re.get(), s.co.get());
  const auto* c = reinterpret_cast<const std::complex<double>*>(s.co.get());
  std::copy(c, c + out.size(), out.begin());
}

void irfft(std::span<const std::complex<double>> in, std::span<double> out) {
  const std::size_t n = out.size();
  if (n == 0 || in.size() != n / 2 + 1) throw InvalidParameter("irfft: bad buffer sizes");
  const Plans& p = plans_for(n);
  Scratch& s = scratch_for(n);
  std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(s.co.get()));
  fftw_execute_dft_c2r(p.inverse, s.co.get(), s.re.get());
  const double scale = 1.0 / static_cast<double>(n);
  const double* r = s.re.get();
  for (std::size_t i = 0; i < n; ++i) out[i] = r[i] * scale;
}

}  // namespace spoofkit::fft
