#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

#include <cstdint>
#include <limits>

#include "kernels_impl.hpp"

namespace wsketch::kernels::neon {

double sum(const double* data, std::size_t n) {
  // Two 2-wide accumulators hold lanes {0,1} and {2,3}.
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vaddq_f64(lo, vld1q_f64(data + i));
    hi = vaddq_f64(hi, vld1q_f64(data + i + 2));
  }
  double s = (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
             (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  for (; i < n; ++i) s += data[i];
  return s;
}

double min(const double* data, std::size_t n) {
  float64x2_t m = vdupq_n_f64(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vminq_f64(m, vld1q_f64(data + i));
  double r = vgetq_lane_f64(m, 0) < vgetq_lane_f64(m, 1) ? vgetq_lane_f64(m, 0) : vgetq_lane_f64(m, 1);
  for (; i < n; ++i) r = data[i] < r ? data[i] : r;
  return r;
}

std::size_t argmax(const double* data, std::size_t n) {
  if (n < 4) return scalar::argmax(data, n);
  float64x2_t best = vld1q_f64(data);
  uint64x2_t best_idx = {0, 1};
  uint64x2_t idx = best_idx;
  const uint64x2_t step = vdupq_n_u64(2);
  std::size_t i = 2;
  for (; i + 2 <= n; i += 2) {
    idx = vaddq_u64(idx, step);
    const float64x2_t v = vld1q_f64(data + i);
    const uint64x2_t gt = vcgtq_f64(v, best);
    best = vbslq_f64(gt, v, best);
    best_idx = vbslq_u64(gt, idx, best_idx);
  }
  double v0 = vgetq_lane_f64(best, 0), v1 = vgetq_lane_f64(best, 1);
  std::size_t i0 = vgetq_lane_u64(best_idx, 0), i1 = vgetq_lane_u64(best_idx, 1);
  std::size_t r = i0;
  double rv = v0;
  if (v1 > rv || (v1 == rv && i1 < r)) {
    rv = v1;
    r = i1;
  }
  for (; i < n; ++i) {
    if (data[i] > rv) {
      rv = data[i];
      r = i;
    }
  }
  return r;
}

}  // namespace wsketch::kernels::neon
#endif
