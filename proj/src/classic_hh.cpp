#include "wsketch/classic_hh.hpp"

#include <algorithm>

#include "wsketch/errors.hpp"

namespace wsketch {

SampleAndHold::SampleAndHold(std::size_t capacity, double tau, std::uint64_t seed)
    : capacity_(capacity), tau_(tau), coins_(seed) {}

SampleAndHold SampleAndHold::fixed_threshold(double tau, std::uint64_t seed) {
  if (!(tau > 0.0 && tau <= 1.0)) throw InvalidParameter("Sample-and-Hold threshold must be in (0,1]");
  return SampleAndHold(std::numeric_limits<std::size_t>::max(), tau, seed);
}

SampleAndHold SampleAndHold::fixed_size(std::size_t capacity, std::uint64_t seed) {
  if (capacity == 0) throw InvalidParameter("Sample-and-Hold capacity must be at least 1");
  return SampleAndHold(capacity, 1.0, seed);
}

void SampleAndHold::process(std::string_view key) { process_with_coin(key, coins_.next()); }

void SampleAndHold::process_with_coin(std::string_view key, double coin) {
  if (auto it = entries_.find(key); it != entries_.end()) {
    it->second.count += 1;
    it->second.seed = std::min(it->second.seed, coin);
    return;
  }
  if (!(coin < tau_)) return;
  entries_.emplace(std::string(key), Entry{1, coin, tau_});
  if (entries_.size() <= capacity_) return;

  auto victim = entries_.begin();
  for (auto it = entries_.begin(); it != entries_.end(); ++it) {
    if (it->second.seed >= victim->second.seed) victim = it;  // ties: largest key
  }
  tau_ = victim->second.seed;
  entries_.erase(victim);
}

double SampleAndHold::estimate(std::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return 0.0;
  return static_cast<double>(it->second.count) - 1.0 + 1.0 / it->second.tau_entry;
}

SpaceSaving::SpaceSaving(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw InvalidParameter("Space-Saving capacity must be at least 1");
  items_.reserve(capacity);
}

void SpaceSaving::process(std::string_view key, std::uint64_t weight) {
  total_ += weight;
  if (auto it = items_.find(key); it != items_.end()) {
    Item& item = it->second;
    by_count_.erase({item.count, item.key});
    item.count += weight;
    by_count_.emplace(item.count, item.key);
    return;
  }
  if (items_.size() < capacity_) {
    Item item{std::string(key), weight, 0};
    by_count_.emplace(item.count, item.key);
    items_.emplace(item.key, std::move(item));
    return;
  }
  // Replace the minimum; the newcomer inherits its count as error bound.
  const auto min_it = by_count_.begin();
  const std::uint64_t min_count = min_it->first;
  items_.erase(min_it->second);
  by_count_.erase(min_it);
  Item item{std::string(key), min_count + weight, min_count};
  by_count_.emplace(item.count, item.key);
  items_.emplace(item.key, std::move(item));
}

const SpaceSaving::Item* SpaceSaving::find(std::string_view key) const {
  const auto it = items_.find(key);
  return it == items_.end() ? nullptr : &it->second;
}

std::vector<SpaceSaving::Item> SpaceSaving::top(std::uint64_t min_count) const {
  std::vector<Item> out;
  for (auto it = by_count_.rbegin(); it != by_count_.rend() && it->first >= min_count; ++it) {
    out.push_back(items_.find(it->second)->second);
  }
  std::stable_sort(out.begin(), out.end(), [](const Item& a, const Item& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.key < b.key;
  });
  return out;
}

}  // namespace wsketch
