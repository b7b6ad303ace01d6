#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wsketch/estimate.hpp"
#include "wsketch/hashing.hpp"
#include "wsketch/sampling_cache.hpp"

namespace wsketch {

// One draw of 1 - (1 - u)^(1/rho) for u in [0,1). Minimum of n such draws is
// below t with probability 1 - (1 - t)^(rho * n).
[[nodiscard]] double combined_draw(double u, double rho) noexcept;

// Combined Weighted Sampling: samples keys by b_x = rho * h_x + w_x. Each
// element contributes its subkey hash (distinct part) and a fresh random draw
// (volume part) to the key's seed; cached keys also count elements in f.
class ChhSketch {
 public:
  // Throws InvalidParameter unless rho in (0,1].
  ChhSketch(std::size_t capacity, std::uint32_t buckets, double rho, std::uint64_t hash_seed);

  static ChhSketch fixed_threshold(double tau, std::uint32_t buckets, double rho, std::uint64_t hash_seed);

  ProcessResult process(std::string_view key, std::string_view subkey);
  ProcessResult process_hashed(std::string_view key, PairHash h, double erand);

  [[nodiscard]] std::vector<ReportRecord> report() const { return make_report(cache_); }
  // Combined weight interval.
  [[nodiscard]] WeightEstimate estimate(const ReportRecord& r, Confidence conf = Confidence::standard()) const;
  // Distinct weight interval for the same entry.
  [[nodiscard]] WeightEstimate distinct_estimate(const ReportRecord& r,
                                                 Confidence conf = Confidence::standard()) const;

  [[nodiscard]] const SamplingCache& cache() const noexcept { return cache_; }
  [[nodiscard]] double tau() const noexcept { return cache_.tau(); }
  [[nodiscard]] double rho() const noexcept { return rho_; }
  [[nodiscard]] std::size_t size() const noexcept { return cache_.size(); }
  [[nodiscard]] const PairHasher& hasher() const noexcept { return hasher_; }

  [[nodiscard]] bool same_state(const ChhSketch& other) const {
    return rho_ == other.rho_ && cache_.same_state(other.cache_);
  }

  [[nodiscard]] std::string serialize() const;
  static ChhSketch deserialize(std::string_view bytes);

 private:
  ChhSketch(SamplingCache cache, double rho, std::uint64_t hash_seed);

  PairHasher hasher_;
  SamplingCache cache_;
  double rho_;
  CoinSource coins_;
};

}  // namespace wsketch
