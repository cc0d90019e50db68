#pragma once

#include <cstddef>
#include <span>

// Data-parallel double-precision primitives used by the analysis inner loops
// (sifting, feature energies, KNN distances). Each primitive has a scalar
// reference implementation plus SIMD variants (AVX2 on x86-64, NEON on
// aarch64) selected once at startup. The environment variable EEG_KERNELS
// ("scalar", "avx2", "neon") overrides the automatic choice.
//
// Reductions in the SIMD variants accumulate in lanes and fold at the end,
// so they may differ from the scalar reference by O(1 ulp) rounding; the
// equivalence tests bound this at 1e-13 relative. Element-wise kernels are
// bit-identical across backends.

namespace eeg::kernels {

struct Dispatch {
  const char* name;
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_sq)(const double*, std::size_t);
  double (*sq_diff_sum)(const double*, const double*, std::size_t);
  void (*sub)(const double*, const double*, double*, std::size_t);
};

// Active backend, resolved on first use.
const Dispatch& active();
const char* backend_name();

inline double sum(std::span<const double> a) {
  return active().sum(a.data(), a.size());
}
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double sum_sq(std::span<const double> a) {
  return active().sum_sq(a.data(), a.size());
}
inline double sq_diff_sum(std::span<const double> a, std::span<const double> b) {
  return active().sq_diff_sum(a.data(), b.data(), a.size());
}
inline void sub(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  active().sub(a.data(), b.data(), out.data(), a.size());
}

// Scalar reference kernels; also the oracle side of the equivalence tests.
namespace scalar {
double sum(const double* a, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sum_sq(const double* a, std::size_t n);
double sq_diff_sum(const double* a, const double* b, std::size_t n);
void sub(const double* a, const double* b, double* out, std::size_t n);
}  // namespace scalar

#if defined(EEG_HAVE_AVX2_BUILD)
namespace avx2 {
double sum(const double* a, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sum_sq(const double* a, std::size_t n);
double sq_diff_sum(const double* a, const double* b, std::size_t n);
void sub(const double* a, const double* b, double* out, std::size_t n);
bool supported();
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double sum(const double* a, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sum_sq(const double* a, std::size_t n);
double sq_diff_sum(const double* a, const double* b, std::size_t n);
void sub(const double* a, const double* b, double* out, std::size_t n);
}  // namespace neon
#endif

}  // namespace eeg::kernels
