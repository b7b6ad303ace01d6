// Compiled with -mavx2; only called after a runtime CPU check.
#include <immintrin.h>

#include <cstdint>
#include <limits>

#include "kernels_impl.hpp"

namespace wsketch::kernels::avx2 {

double sum(const double* data, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(data + i));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) s += data[i];
  return s;
}

double min(const double* data, std::size_t n) {
  __m256d m = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_min_pd(m, _mm256_loadu_pd(data + i));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, m);
  double r = lane[0];
  for (int j = 1; j < 4; ++j) r = lane[j] < r ? lane[j] : r;
  for (; i < n; ++i) r = data[i] < r ? data[i] : r;
  return r;
}

std::size_t argmax(const double* data, std::size_t n) {
  if (n < 8) return scalar::argmax(data, n);
  // Per-lane running max with the index where it first occurred.
  __m256d best = _mm256_loadu_pd(data);
  __m256i best_idx = _mm256_setr_epi64x(0, 1, 2, 3);
  __m256i idx = best_idx;
  const __m256i step = _mm256_set1_epi64x(4);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) {
    idx = _mm256_add_epi64(idx, step);
    const __m256d v = _mm256_loadu_pd(data + i);
    const __m256d gt = _mm256_cmp_pd(v, best, _CMP_GT_OQ);
    best = _mm256_blendv_pd(best, v, gt);
    best_idx = _mm256_castpd_si256(
        _mm256_blendv_pd(_mm256_castsi256_pd(best_idx), _mm256_castsi256_pd(idx), gt));
  }
  alignas(32) double lane[4];
  alignas(32) std::int64_t lane_idx[4];
  _mm256_store_pd(lane, best);
  _mm256_store_si256(reinterpret_cast<__m256i*>(lane_idx), best_idx);
  std::size_t r = static_cast<std::size_t>(lane_idx[0]);
  double rv = lane[0];
  for (int j = 1; j < 4; ++j) {
    const auto li = static_cast<std::size_t>(lane_idx[j]);
    if (lane[j] > rv || (lane[j] == rv && li < r)) {
      rv = lane[j];
      r = li;
    }
  }
  for (; i < n; ++i) {
    if (data[i] > rv) {
      rv = data[i];
      r = i;
    }
  }
  return r;
}

}  // namespace wsketch::kernels::avx2
