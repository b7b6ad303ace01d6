#include <limits>

#include "wsketch/kernels.hpp"

namespace wsketch::kernels::scalar {

double sum(const double* data, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lane[0] += data[i];
    lane[1] += data[i + 1];
    lane[2] += data[i + 2];
    lane[3] += data[i + 3];
  }
  double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) s += data[i];
  return s;
}

double min(const double* data, std::size_t n) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (data[i] < m) m = data[i];
  }
  return m;
}

std::size_t argmax(const double* data, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (data[i] > data[best]) best = i;
  }
  return best;
}

}  // namespace wsketch::kernels::scalar
