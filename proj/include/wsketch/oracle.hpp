#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wsketch/trace.hpp"

namespace wsketch {

struct KeyWeights {
  std::uint64_t h = 0;  // elements with this key
  std::uint64_t w = 0;  // distinct subkeys with this key

  [[nodiscard]] double combined(double rho) const noexcept {
    return rho * static_cast<double>(h) + static_cast<double>(w);
  }
};

// Exact per-key counts by full materialization of the distinct pair set.
class ExactOracle {
 public:
  void add(std::string_view key, std::string_view subkey);
  static ExactOracle from_trace(const Trace& trace);

  [[nodiscard]] const std::unordered_map<std::string, KeyWeights>& table() const noexcept { return table_; }
  [[nodiscard]] const KeyWeights* find(std::string_view key) const;
  [[nodiscard]] std::uint64_t elements() const noexcept { return elements_; }
  [[nodiscard]] std::uint64_t distinct_pairs() const noexcept { return pairs_.size(); }
  // Stored entries: one per distinct pair plus one per key.
  [[nodiscard]] std::uint64_t table_entries() const noexcept { return pairs_.size() + table_.size(); }
  // Bytes of key/subkey payload held by the oracle.
  [[nodiscard]] std::uint64_t payload_bytes() const noexcept { return payload_bytes_; }

  // Keys sorted by name.
  [[nodiscard]] std::vector<std::string> keys() const;

 private:
  std::unordered_map<std::string, KeyWeights> table_;
  std::unordered_set<std::string> pairs_;
  std::uint64_t elements_ = 0;
  std::uint64_t payload_bytes_ = 0;
};

}  // namespace wsketch
