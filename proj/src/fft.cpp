#include "eeg/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace eeg::fft {

namespace {

// The FFTW planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanEntry {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  std::size_t n = 0;

  PlanEntry() = default;
  PlanEntry(const PlanEntry&) = delete;
  PlanEntry& operator=(const PlanEntry&) = delete;

  void create(std::size_t size) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    n = size;
    in = fftw_alloc_complex(size);
    out = fftw_alloc_complex(size);
    fwd = fftw_plan_dft_1d(static_cast<int>(size), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    inv = fftw_plan_dft_1d(static_cast<int>(size), in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (fwd == nullptr || inv == nullptr) throw std::runtime_error("fftw plan creation failed");
  }

  ~PlanEntry() {
    if (n == 0) return;
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(in);
    fftw_free(out);
  }
};

// Per-thread cache keyed by transform length; a run touches only a handful
// of distinct lengths (trial, window, envelope sizes).
PlanEntry& plan_for(std::size_t n) {
  thread_local std::unordered_map<std::size_t, PlanEntry> cache;
  PlanEntry& e = cache[n];
  if (e.n == 0) e.create(n);
  return e;
}

std::vector<std::complex<double>> execute(std::span<const std::complex<double>> in, bool forward_dir) {
  const std::size_t n = in.size();
  if (n == 0) throw std::invalid_argument("fft: empty input");
  PlanEntry& e = plan_for(n);
  std::memcpy(e.in, static_cast<const void*>(in.data()), n * sizeof(fftw_complex));
  fftw_execute(forward_dir ? e.fwd : e.inv);
  std::vector<std::complex<double>> result(n);
  std::memcpy(static_cast<void*>(result.data()), e.out, n * sizeof(fftw_complex));
  if (!forward_dir) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& c : result) c *= scale;
  }
  return result;
}

}  // namespace

std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in) {
  return execute(in, true);
}

std::vector<std::complex<double>> forward_real(std::span<const double> in) {
  std::vector<std::complex<double>> tmp(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) tmp[i] = {in[i], 0.0};
  return execute(tmp, true);
}

std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> in) {
  return execute(in, false);
}

std::vector<double> magnitude_real(std::span<const double> in) {
  auto spec = forward_real(in);
  std::vector<double> mag(in.size() / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(spec[k]);
  return mag;
}

}  // namespace eeg::fft
