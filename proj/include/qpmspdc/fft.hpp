// Thin FFTW wrapper. Plans are created per call with FFTW_ESTIMATE, which
// keeps results deterministic; plan creation is serialized because the
// FFTW planner is not thread-safe.
#pragma once

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstring>
#include <memory>
#include <mutex>
#include <vector>

namespace qpmspdc::fft {

namespace detail {
inline std::mutex& plannerMutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
}  // namespace detail

enum class Direction { Forward = FFTW_FORWARD, Backward = FFTW_BACKWARD };

/// Unnormalized DFT: out_k = sum_n in_n exp(-+ 2 pi i k n / N).
inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in, Direction dir) {
  const int n = static_cast<int>(in.size());
  std::unique_ptr<fftw_complex, detail::FftwFree> buf(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * std::max(n, 1))));
  fftw_plan plan;
  {
    std::lock_guard lock(detail::plannerMutex());
    plan = fftw_plan_dft_1d(n, buf.get(), buf.get(), static_cast<int>(dir), FFTW_ESTIMATE);
  }
  std::memcpy(static_cast<void*>(buf.get()), static_cast<const void*>(in.data()), sizeof(fftw_complex) * n);
  fftw_execute(plan);
  std::vector<std::complex<double>> out(in.size());
  std::memcpy(static_cast<void*>(out.data()), static_cast<const void*>(buf.get()), sizeof(fftw_complex) * n);
  {
    std::lock_guard lock(detail::plannerMutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace qpmspdc::fft
