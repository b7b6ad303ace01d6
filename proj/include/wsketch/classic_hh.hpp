#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wsketch/hashing.hpp"

namespace wsketch {

// Classic Sample-and-Hold over keys. Fixed-threshold mode admits an uncached
// key with probability tau and counts it exactly afterwards. Fixed-size mode
// draws a uniform seed per element, keeps the k keys with the lowest seeds
// and lowers tau to each evicted seed; the cached set is ppswor by h_x.
class SampleAndHold {
 public:
  struct Entry {
    std::uint64_t count = 0;
    double seed = 1.0;
    double tau_entry = 1.0;
  };

  static SampleAndHold fixed_threshold(double tau, std::uint64_t seed);
  static SampleAndHold fixed_size(std::size_t capacity, std::uint64_t seed);

  void process(std::string_view key);
  // Same with a caller-supplied coin in [0,1).
  void process_with_coin(std::string_view key, double coin);

  [[nodiscard]] double tau() const noexcept { return tau_; }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] const std::map<std::string, Entry, std::less<>>& entries() const noexcept { return entries_; }
  // Unbiased estimate c - 1 + 1/tau_entry of h_x for a cached key; 0 if absent.
  [[nodiscard]] double estimate(std::string_view key) const;

 private:
  SampleAndHold(std::size_t capacity, double tau, std::uint64_t seed);

  std::size_t capacity_;
  double tau_;
  CoinSource coins_;
  std::map<std::string, Entry, std::less<>> entries_;
};

// Space-Saving (Metwally et al.) frequent-items summary.
class SpaceSaving {
 public:
  struct Item {
    std::string key;
    std::uint64_t count = 0;
    std::uint64_t bound = 0;  // overestimation bound: true frequency in [count - bound, count]
  };

  // Throws InvalidParameter when capacity == 0.
  explicit SpaceSaving(std::size_t capacity);

  void process(std::string_view key, std::uint64_t weight = 1);

  [[nodiscard]] std::size_t size() const noexcept { return items_.size(); }
  [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
  [[nodiscard]] std::uint64_t total() const noexcept { return total_; }
  // Entry for key or nullptr.
  [[nodiscard]] const Item* find(std::string_view key) const;
  // Entries with count >= min_count, by descending count then key.
  [[nodiscard]] std::vector<Item> top(std::uint64_t min_count) const;

 private:
  struct KeyHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };

  std::size_t capacity_;
  std::uint64_t total_ = 0;
  std::unordered_map<std::string, Item, KeyHash, std::equal_to<>> items_;
  // (count, key) ordered so begin() is the minimum-count entry.
  std::set<std::pair<std::uint64_t, std::string>> by_count_;
};

}  // namespace wsketch
