#include "eeg/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <mutex>

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace eeg::kernels {

namespace scalar {

double sum(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

double sq_diff_sum(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

}  // namespace scalar

#if defined(__aarch64__)
namespace neon {

double sum(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(a + i));
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) s += a[i];
  return s;
}

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq(const double* a, std::size_t n) { return dot(a, a, n); }

double sq_diff_sum(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

}  // namespace neon
#endif

namespace {

Dispatch resolve() {
  const char* force = std::getenv("EEG_KERNELS");
#if defined(EEG_HAVE_AVX2_BUILD)
  const bool have_avx2 = avx2::supported();
  if (force == nullptr ? have_avx2
                       : (std::strcmp(force, "avx2") == 0 && have_avx2)) {
    return Dispatch{"avx2", avx2::sum, avx2::dot, avx2::sum_sq,
                    avx2::sq_diff_sum, avx2::sub};
  }
#endif
#if defined(__aarch64__)
  if (force == nullptr || std::strcmp(force, "neon") == 0) {
    return Dispatch{"neon", neon::sum, neon::dot, neon::sum_sq,
                    neon::sq_diff_sum, neon::sub};
  }
#endif
  (void)force;
  return Dispatch{"scalar", scalar::sum, scalar::dot, scalar::sum_sq,
                  scalar::sq_diff_sum, scalar::sub};
}

}  // namespace

const Dispatch& active() {
  static const Dispatch d = resolve();
  return d;
}

const char* backend_name() { return active().name; }

}  // namespace eeg::kernels
