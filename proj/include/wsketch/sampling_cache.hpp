#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wsketch/distinct_counter.hpp"
#include "wsketch/hashing.hpp"

namespace wsketch {

// What happened to one stream element.
enum class Admission : std::uint8_t {
  kCachedUpdated,    // key was cached and its counter changed
  kCachedUnchanged,  // key was cached, counter unchanged
  kAdmitted,         // key entered the cache on this element
  kRejected,         // key not cached, element did not pass the threshold
};

struct ProcessResult {
  Admission admission = Admission::kRejected;
  bool evicted = false;     // some entry (possibly the new one) was evicted
  std::string evicted_key;  // set when evicted
  // Whether the element's key is in the cache after processing, i.e. the
  // element was accounted for.
  [[nodiscard]] bool counted() const noexcept {
    return admission != Admission::kRejected && !(admission == Admission::kAdmitted && evicted_self);
  }
  bool evicted_self = false;
};

// One cached key.
struct CacheEntry {
  std::string key;
  DistinctCounter counter;
  double tau_entry = 1.0;  // effective threshold when the key entered
  std::uint64_t f = 0;     // elements processed since caching (combined sampling only)
};

// Cache of per-key distinct counters ordered by seed, shared by the distinct
// and combined weighted samplers. Seeds live in a contiguous array so the
// eviction scan runs through the SIMD argmax kernel.
//
// Fixed-size mode keeps the `capacity` lowest-seed keys and lowers the
// threshold to the seed of each evicted key. Fixed-threshold mode never
// evicts and never changes the threshold.
class SamplingCache {
 public:
  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

  SamplingCache(std::size_t capacity, std::uint32_t buckets, double tau);

  // Distinct sampling step for key with precomputed element hash.
  ProcessResult process_distinct(std::string_view key, PairHash h);
  // Combined sampling step; `erand` is the per-element draw 1-(1-U)^(1/rho).
  ProcessResult process_combined(std::string_view key, PairHash h, double erand);
  // Fixed-threshold distinct step: merge into cached key, or admit when h < tau.
  ProcessResult process_threshold(std::string_view key, PairHash h);

  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
  [[nodiscard]] bool bounded() const noexcept { return capacity_ != kUnbounded; }
  [[nodiscard]] std::uint32_t buckets() const noexcept { return buckets_; }
  [[nodiscard]] double tau() const noexcept { return tau_; }

  [[nodiscard]] std::span<const CacheEntry> entries() const noexcept { return entries_; }
  [[nodiscard]] std::span<const double> seeds() const noexcept { return seeds_; }
  [[nodiscard]] double seed_at(std::size_t i) const noexcept { return seeds_[i]; }
  // Index into entries()/seeds(), or nullopt.
  [[nodiscard]] std::optional<std::size_t> find(std::string_view key) const;

  // Canonical state comparison: same keys with the same seeds, thresholds and counters.
  [[nodiscard]] bool same_state(const SamplingCache& other) const;

  void serialize(std::string& out, std::uint64_t hash_seed, bool with_f) const;
  static SamplingCache deserialize(std::string_view& in, std::uint64_t hash_seed, bool with_f);

 private:
  struct KeyHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };

  std::size_t insert(std::string_view key, double seed, PairHash h);
  // Removes the max-seed entry; ties go to the lexicographically largest key.
  void evict_max(ProcessResult& result, std::size_t new_index);

  std::size_t capacity_;
  std::uint32_t buckets_;
  double tau_;
  std::vector<CacheEntry> entries_;
  std::vector<double> seeds_;
  std::unordered_map<std::string, std::size_t, KeyHash, std::equal_to<>> index_;
};

// Report record for one cached key.
struct ReportRecord {
  std::string key;
  double card_est = 0.0;
  double tau_entry = 1.0;
  double seed = 1.0;
  std::uint64_t f = 0;
  double std_error = 0.0;
};

// Cached keys ordered by descending card_est, ties by key.
[[nodiscard]] std::vector<ReportRecord> make_report(const SamplingCache& cache);

}  // namespace wsketch
