#include "wsketch/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_map>

#include "wsketch/errors.hpp"

namespace wsketch {

EvalReport evaluate(std::span<const ReportRecord> report, const ExactOracle& oracle, const EvalParams& params) {
  if (params.capacity == 0) throw InvalidParameter("evaluate: capacity must be positive");
  const bool combined = params.kind == WeightKind::kCombined;
  const double a = params.conf.coefficient;
  const double inv_sqrt = 1.0 / std::sqrt(2.0 * static_cast<double>(params.buckets));

  std::unordered_map<std::string_view, const ReportRecord*> by_key;
  by_key.reserve(report.size());
  for (const auto& r : report) {
    if (oracle.find(r.key) == nullptr) throw InvalidParameter("evaluate: reported key '" + r.key + "' not in the trace");
    by_key.emplace(r.key, &r);
  }

  EvalReport out;
  double total = 0.0;
  out.rows.reserve(oracle.table().size());
  for (const auto& [key, kw] : oracle.table()) {
    EvalRow row;
    row.key = key;
    row.true_h = kw.h;
    row.true_w = kw.w;
    row.truth = combined ? kw.combined(params.rho) : static_cast<double>(kw.w);
    total += row.truth;
    if (const auto it = by_key.find(key); it != by_key.end()) {
      const ReportRecord& r = *it->second;
      row.cached = true;
      row.card_est = r.card_est;
      const WeightEstimate est =
          combined ? estimate_combined(r.card_est, r.std_error, r.tau_entry, params.rho, static_cast<double>(r.f),
                                       params.conf)
                   : estimate_distinct(r.card_est, r.std_error, r.tau_entry, params.conf);
      row.estimate = combined ? est.point : r.card_est;
      row.lo = est.lo;
      row.hi = est.hi;
    }
    out.rows.push_back(std::move(row));
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const EvalRow& x, const EvalRow& y) {
    if (x.truth != y.truth) return x.truth > y.truth;
    return x.key < y.key;
  });

  EvalSummary& s = out.summary;
  s.threshold = total / static_cast<double>(params.capacity);
  s.keys = out.rows.size();
  std::vector<double> errors;
  errors.reserve(report.size());
  for (auto& row : out.rows) {
    const double t = s.threshold;
    if (row.truth > t) ++s.heavy;
    if (!row.cached) {
      row.false_negative = row.truth > t && (row.truth - t) > a * row.truth * inv_sqrt;
      s.false_negatives += row.false_negative ? 1 : 0;
      continue;
    }
    ++s.cached;
    row.detected = row.estimate >= t;
    s.detected += row.detected ? 1 : 0;
    const double sigma = row.card_est * inv_sqrt;
    row.false_positive = row.detected && row.truth < t && (t - row.truth) > a * sigma;
    s.false_positives += row.false_positive ? 1 : 0;
    if (row.estimate > row.truth) ++s.overestimates;
    if (row.truth < row.lo) ++s.overestimates_beyond_interval;
    if (row.truth > t) {
      ++s.heavy_cached;
      if (row.truth >= row.lo && row.truth <= row.hi) ++s.heavy_covered;
    }
    errors.push_back(std::abs(row.estimate - row.truth));
  }
  if (!errors.empty()) {
    double sum = 0.0;
    for (double e : errors) sum += e;
    s.mean_error = sum / static_cast<double>(errors.size());
    std::sort(errors.begin(), errors.end());
    const std::size_t n = errors.size();
    s.median_error = n % 2 == 1 ? errors[n / 2] : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
  }
  return out;
}

void write_eval_table(std::ostream& out, const EvalReport& report, std::size_t rows) {
  const EvalSummary& s = report.summary;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "threshold t=%.3f keys=%zu cached=%zu detected=%zu heavy=%zu heavy_cached=%zu\n"
                "FP=%zu FN=%zu overestimates=%zu beyond_interval=%zu coverage=%.4f\n"
                "error mean=%.3f median=%.3f\n",
                s.threshold, s.keys, s.cached, s.detected, s.heavy, s.heavy_cached, s.false_positives,
                s.false_negatives, s.overestimates, s.overestimates_beyond_interval, s.coverage(), s.mean_error,
                s.median_error);
  out << buf;
  std::snprintf(buf, sizeof(buf), "%-24s %10s %10s %12s %12s %12s %6s\n", "key", "true_h", "truth", "estimate", "lo",
                "hi", "cached");
  out << buf;
  for (std::size_t i = 0; i < std::min(rows, report.rows.size()); ++i) {
    const EvalRow& r = report.rows[i];
    std::snprintf(buf, sizeof(buf), "%-24s %10llu %10.1f %12.2f %12.2f %12.2f %6s\n", r.key.c_str(),
                  static_cast<unsigned long long>(r.true_h), r.truth, r.estimate, r.lo, r.hi, r.cached ? "yes" : "no");
    out << buf;
  }
}

void write_eval_csv(std::ostream& out, const EvalReport& report) {
  out << "key,true_w,estimate,lo,hi,cached\n";
  char buf[128];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g,%.17g,%d\n", r.truth, r.estimate, r.lo, r.hi, r.cached ? 1 : 0);
    out << r.key << buf;
  }
}

}  // namespace wsketch
