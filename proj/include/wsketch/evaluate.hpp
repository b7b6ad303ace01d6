#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wsketch/estimate.hpp"
#include "wsketch/oracle.hpp"
#include "wsketch/sampling_cache.hpp"

namespace wsketch {

enum class WeightKind { kDistinct, kCombined };

struct EvalParams {
  std::size_t capacity = 2000;  // k; the detection threshold is t = (sum of true weights) / k
  std::uint32_t buckets = 64;
  Confidence conf = Confidence::standard();
  WeightKind kind = WeightKind::kDistinct;
  double rho = 0.1;  // combined kind only
};

struct EvalRow {
  std::string key;
  std::uint64_t true_h = 0;
  std::uint64_t true_w = 0;
  double truth = 0.0;  // w_x, or rho*h_x + w_x for the combined kind
  bool cached = false;
  double card_est = 0.0;
  double estimate = 0.0;  // selection statistic: card_est, or card_est + rho*f
  double lo = 0.0;
  double hi = 0.0;
  bool detected = false;  // cached and estimate >= t
  bool false_negative = false;
  bool false_positive = false;
};

struct EvalSummary {
  double threshold = 0.0;
  std::size_t keys = 0;
  std::size_t cached = 0;
  std::size_t detected = 0;
  std::size_t heavy = 0;         // keys with truth > t
  std::size_t heavy_cached = 0;
  std::size_t heavy_covered = 0; // heavy cached keys with truth in [lo, hi]
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::size_t overestimates = 0;                  // cached keys with estimate > truth
  std::size_t overestimates_beyond_interval = 0;  // cached keys with truth < lo
  double mean_error = 0.0;    // |estimate - truth| over cached keys
  double median_error = 0.0;
  [[nodiscard]] double coverage() const noexcept {
    return heavy_cached == 0 ? 1.0 : static_cast<double>(heavy_covered) / static_cast<double>(heavy_cached);
  }
};

struct EvalReport {
  std::vector<EvalRow> rows;  // every oracle key, by descending truth then key
  EvalSummary summary;
};

// Compares a sketch report with exact counts. A missed heavy key is a false
// negative when truth - t > a * truth / sqrt(2l); a detected light key is a
// false positive when t - truth > a * (counter standard error). Throws
// InvalidParameter when a reported key is absent from the oracle.
[[nodiscard]] EvalReport evaluate(std::span<const ReportRecord> report, const ExactOracle& oracle,
                                  const EvalParams& params);

// Fixed-width human-readable summary plus the heaviest `rows` keys.
void write_eval_table(std::ostream& out, const EvalReport& report, std::size_t rows = 20);
// CSV columns: key,true_w,estimate,lo,hi,cached
void write_eval_csv(std::ostream& out, const EvalReport& report);

}  // namespace wsketch
