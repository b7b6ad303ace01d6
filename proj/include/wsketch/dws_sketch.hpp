#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wsketch/estimate.hpp"
#include "wsketch/hashing.hpp"
#include "wsketch/sampling_cache.hpp"

namespace wsketch {

// Distinct Weighted Sampling. The fixed-size form keeps the k keys with the
// lowest seeds (minimum element hash since caching) and integrates the
// sampling hash with the per-key distinct counters; the cached key set is a
// ppswor sample by distinct weight w_x. The fixed-threshold form admits a key
// when an element hashes below a constant tau and never evicts.
class DwsSketch {
 public:
  // Fixed-size sketch with capacity k and `buckets` buckets per counter.
  DwsSketch(std::size_t capacity, std::uint32_t buckets, std::uint64_t hash_seed);

  static DwsSketch fixed_threshold(double tau, std::uint32_t buckets, std::uint64_t hash_seed);

  ProcessResult process(std::string_view key, std::string_view subkey);
  // Same as process() with a caller-supplied element hash.
  ProcessResult process_hashed(std::string_view key, PairHash h);

  [[nodiscard]] std::vector<ReportRecord> report() const { return make_report(cache_); }
  [[nodiscard]] WeightEstimate estimate(const ReportRecord& r, Confidence conf = Confidence::standard()) const;

  [[nodiscard]] const SamplingCache& cache() const noexcept { return cache_; }
  [[nodiscard]] double tau() const noexcept { return cache_.tau(); }
  [[nodiscard]] std::size_t size() const noexcept { return cache_.size(); }
  [[nodiscard]] bool fixed_size() const noexcept { return cache_.bounded(); }
  [[nodiscard]] const PairHasher& hasher() const noexcept { return hasher_; }

  [[nodiscard]] bool same_state(const DwsSketch& other) const { return cache_.same_state(other.cache_); }

  [[nodiscard]] std::string serialize() const;
  static DwsSketch deserialize(std::string_view bytes);

 private:
  DwsSketch(SamplingCache cache, std::uint64_t hash_seed);

  PairHasher hasher_;
  SamplingCache cache_;
};

}  // namespace wsketch
