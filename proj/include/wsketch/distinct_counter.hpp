#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsketch/hashing.hpp"

namespace wsketch {

// Stochastic-averaging distinct counter: keeps the minimum element hash in
// each of `buckets` buckets and a running HIP (historic inverse probability)
// cardinality estimate.
//
// Invariants: each bucket value is non-increasing, the estimate is
// non-decreasing, and the estimate is 0 exactly when no bucket was modified.
class DistinctCounter {
 public:
  // Throws InvalidParameter when buckets < 2.
  explicit DistinctCounter(std::uint32_t buckets);

  // Offers an element with precomputed hash `unit` in [0,1) and bucket index.
  // When unit undercuts the bucket minimum the HIP estimate grows by
  // buckets / sum(c) (computed before the write) and the bucket is lowered.
  // Returns whether the state changed.
  bool merge(double unit, std::uint32_t bucket);
  bool merge(PairHash h) { return merge(h.unit, h.bucket); }

  [[nodiscard]] double card_est() const noexcept { return cardest_; }
  // HIP standard error, (2 * buckets)^-1/2 * card_est.
  [[nodiscard]] double std_error() const noexcept;

  [[nodiscard]] std::uint32_t buckets() const noexcept {
    return static_cast<std::uint32_t>(c_.size());
  }
  [[nodiscard]] std::span<const double> bucket_values() const noexcept { return c_; }
  // min over buckets; 1 for an empty counter.
  [[nodiscard]] double min_bucket() const noexcept;

  void reset() noexcept;

  // Versioned little-endian record: magic, version, bucket count, the two
  // hash-seed ids, bucket values, estimate.
  void serialize(std::string& out, std::uint64_t element_seed_id, std::uint64_t bucket_seed_id) const;
  struct Loaded;
  static Loaded deserialize(std::string_view& in);

  friend bool operator==(const DistinctCounter&, const DistinctCounter&) = default;

 private:
  DistinctCounter() = default;

  std::vector<double> c_;
  double cardest_ = 0.0;
};

struct DistinctCounter::Loaded {
  DistinctCounter counter;
  std::uint64_t element_seed_id = 0;
  std::uint64_t bucket_seed_id = 0;
};

// Serialized size of one counter record for the given bucket count.
[[nodiscard]] std::size_t serialized_counter_size(std::uint32_t buckets) noexcept;

}  // namespace wsketch
