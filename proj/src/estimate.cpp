#include "wsketch/estimate.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <functional>
#include <vector>

#include "wsketch/errors.hpp"

namespace wsketch {

Confidence Confidence::normal(double level) {
  if (!(level > 0.0 && level < 1.0)) throw InvalidParameter("confidence level must be in (0,1)");
  const boost::math::normal_distribution<double> n;
  return {level, boost::math::quantile(n, 1.0 - (1.0 - level) / 2.0)};
}

double prefix_variance(double tau_entry) {
  if (!(tau_entry > 0.0 && tau_entry <= 1.0)) throw InvalidParameter("entry threshold must be in (0,1]");
  return (1.0 - tau_entry) / (tau_entry * tau_entry);
}

WeightEstimate estimate_distinct(double cardest, double counter_std_error, double tau_entry,
                                 Confidence conf) {
  const double s1sq = prefix_variance(tau_entry);
  const double s2 = counter_std_error;
  const double a = conf.coefficient;
  WeightEstimate e;
  e.confidence = conf.level;
  e.point = cardest - 1.0 + 1.0 / tau_entry;
  e.lo = std::max(0.0, cardest - a * s2);
  e.hi = e.point + a * std::sqrt(s1sq + s2 * s2);
  // A fresh key (cardest 0) has point -1 + 1/tau; keep lo <= point.
  e.lo = std::min(e.lo, e.point);
  return e;
}

WeightEstimate estimate_combined(double cardest, double counter_std_error, double tau_entry, double rho,
                                 double f, Confidence conf) {
  if (!(rho > 0.0)) throw InvalidParameter("rho must be positive");
  const double s2sq = prefix_variance(tau_entry);
  const double s1 = counter_std_error;
  const double a = conf.coefficient;
  WeightEstimate e;
  e.confidence = conf.level;
  e.point = cardest + rho * f;
  const double lower = e.point - a * s1;
  e.lo = std::max(0.0, lower);
  e.hi = lower - 1.0 + 1.0 / tau_entry + a * std::sqrt(s1 * s1 + s2sq);
  return e;
}

double detection_threshold(double total, std::size_t k, std::span<const double> weights) {
  if (k < 1) throw InvalidParameter("detection_threshold: k must be at least 1");
  std::vector<double> sorted(weights.begin(), weights.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double best = total / static_cast<double>(k);
  double prefix = 0.0;
  for (std::size_t i = 1; i < k; ++i) {
    if (i - 1 < sorted.size()) prefix += sorted[i - 1];
    best = std::max(best, (total - prefix) / static_cast<double>(k - i));
  }
  return best;
}

}  // namespace wsketch
