#pragma once

#include <cstddef>
#include <span>

namespace wsketch {

// Confidence level 1 - delta and the normal-approximation coefficient a_delta.
struct Confidence {
  double level = 0.95;
  double coefficient = 2.0;

  // 95% with the conventional a_delta = 2.
  static constexpr Confidence standard() noexcept { return {0.95, 2.0}; }
  // Two-sided normal quantile for `level` in (0,1).
  static Confidence normal(double level);
};

struct WeightEstimate {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double confidence = 0.95;
};

// Variance of the number of distinct subkeys seen before a key entered a
// cache with entry threshold tau (geometric prefix): (1 - tau) / tau^2.
[[nodiscard]] double prefix_variance(double tau_entry);

// Interval on the distinct weight w_x of a cached key:
//   lo = max(0, cardest - a * s2)
//   hi = cardest - 1 + 1/tau + a * sqrt(s1^2 + s2^2)
//   point = cardest - 1 + 1/tau
// with s2 the counter's standard error and s1^2 = prefix_variance(tau).
// Throws InvalidParameter when tau_entry is not in (0,1].
[[nodiscard]] WeightEstimate estimate_distinct(double cardest, double counter_std_error, double tau_entry,
                                               Confidence conf = Confidence::standard());

// Interval on the combined weight rho*h_x + w_x of a cached cWS key. Here the
// counter error is named s1 and the prefix error s2:
//   lo = max(0, cardest + rho*f - a * s1)
//   hi = cardest + rho*f - a * s1 - 1 + 1/tau + a * sqrt(s1^2 + s2^2)
//   point = cardest + rho*f
[[nodiscard]] WeightEstimate estimate_combined(double cardest, double counter_std_error, double tau_entry,
                                               double rho, double f,
                                               Confidence conf = Confidence::standard());

// max over i in [0, k-1] of (m - sum of the i heaviest weights) / (k - i).
// `weights` need not be sorted. Throws InvalidParameter when k < 1.
[[nodiscard]] double detection_threshold(double total, std::size_t k, std::span<const double> weights);

}  // namespace wsketch
