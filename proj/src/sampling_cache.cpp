#include "wsketch/sampling_cache.hpp"

#include <algorithm>

#include "wsketch/binary_io.hpp"
#include "wsketch/errors.hpp"
#include "wsketch/kernels.hpp"

namespace wsketch {
namespace {
constexpr std::string_view kMagic = "WSSC";
constexpr std::uint16_t kVersion = 1;
}  // namespace

SamplingCache::SamplingCache(std::size_t capacity, std::uint32_t buckets, double tau)
    : capacity_(capacity), buckets_(buckets), tau_(tau) {
  if (capacity == 0) throw InvalidParameter("cache capacity must be at least 1");
  if (buckets < 2) throw InvalidParameter("distinct counters need at least 2 buckets");
  if (!(tau > 0.0 && tau <= 1.0)) throw InvalidParameter("threshold must be in (0,1]");
  if (bounded()) {
    entries_.reserve(capacity + 1);
    seeds_.reserve(capacity + 1);
    index_.reserve(capacity + 1);
  }
}

std::optional<std::size_t> SamplingCache::find(std::string_view key) const {
  const auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t SamplingCache::insert(std::string_view key, double seed, PairHash h) {
  const std::size_t i = entries_.size();
  CacheEntry& e = entries_.emplace_back(CacheEntry{std::string(key), DistinctCounter(buckets_), tau_, 0});
  e.counter.merge(h);
  seeds_.push_back(seed);
  index_.emplace(e.key, i);
  return i;
}

void SamplingCache::evict_max(ProcessResult& result, std::size_t new_index) {
  std::size_t victim = kernels::argmax(seeds_);
  const double top = seeds_[victim];
  for (std::size_t j = victim + 1; j < seeds_.size(); ++j) {
    if (seeds_[j] == top && entries_[j].key > entries_[victim].key) victim = j;
  }
  tau_ = top;
  result.evicted = true;
  result.evicted_self = victim == new_index;

  index_.erase(entries_[victim].key);
  result.evicted_key = std::move(entries_[victim].key);
  const std::size_t last = entries_.size() - 1;
  if (victim != last) {
    entries_[victim] = std::move(entries_[last]);
    seeds_[victim] = seeds_[last];
    index_[entries_[victim].key] = victim;
  }
  entries_.pop_back();
  seeds_.pop_back();
}

ProcessResult SamplingCache::process_distinct(std::string_view key, PairHash h) {
  ProcessResult result;
  if (const auto it = index_.find(key); it != index_.end()) {
    const std::size_t i = it->second;
    if (entries_[i].counter.merge(h)) {
      seeds_[i] = std::min(seeds_[i], h.unit);
      result.admission = Admission::kCachedUpdated;
    } else {
      result.admission = Admission::kCachedUnchanged;
    }
    return result;
  }
  if (!(h.unit < tau_)) return result;
  result.admission = Admission::kAdmitted;
  const std::size_t i = insert(key, h.unit, h);
  if (entries_.size() > capacity_) evict_max(result, i);
  return result;
}

ProcessResult SamplingCache::process_combined(std::string_view key, PairHash h, double erand) {
  ProcessResult result;
  if (const auto it = index_.find(key); it != index_.end()) {
    const std::size_t i = it->second;
    CacheEntry& e = entries_[i];
    e.f += 1;
    // The draw lowers the seed on every element, not only on counter
    // updates; otherwise repeated subkeys would never count toward h_x.
    const bool merged = e.counter.merge(h);
    const double seed = std::min({seeds_[i], h.unit, erand});
    result.admission = merged || seed != seeds_[i] ? Admission::kCachedUpdated : Admission::kCachedUnchanged;
    seeds_[i] = seed;
    return result;
  }
  const double candidate = std::min(erand, h.unit);
  if (!(candidate < tau_)) return result;
  result.admission = Admission::kAdmitted;
  const std::size_t i = insert(key, candidate, h);
  entries_[i].f = 1;
  if (entries_.size() > capacity_) evict_max(result, i);
  return result;
}

ProcessResult SamplingCache::process_threshold(std::string_view key, PairHash h) {
  ProcessResult result;
  if (const auto it = index_.find(key); it != index_.end()) {
    const std::size_t i = it->second;
    if (entries_[i].counter.merge(h)) {
      seeds_[i] = std::min(seeds_[i], h.unit);
      result.admission = Admission::kCachedUpdated;
    } else {
      result.admission = Admission::kCachedUnchanged;
    }
    return result;
  }
  if (!(h.unit < tau_)) return result;
  result.admission = Admission::kAdmitted;
  insert(key, h.unit, h);
  return result;
}

bool SamplingCache::same_state(const SamplingCache& other) const {
  if (capacity_ != other.capacity_ || buckets_ != other.buckets_ || tau_ != other.tau_ ||
      entries_.size() != other.entries_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto j = other.find(entries_[i].key);
    if (!j) return false;
    const CacheEntry& a = entries_[i];
    const CacheEntry& b = other.entries_[*j];
    if (seeds_[i] != other.seeds_[*j] || a.tau_entry != b.tau_entry || a.f != b.f || !(a.counter == b.counter)) {
      return false;
    }
  }
  return true;
}

void SamplingCache::serialize(std::string& out, std::uint64_t hash_seed, bool with_f) const {
  out.append(kMagic);
  binary::put<std::uint16_t>(out, kVersion);
  binary::put<std::uint64_t>(out, bounded() ? capacity_ : 0);
  binary::put<std::uint32_t>(out, buckets_);
  binary::put<double>(out, tau_);
  binary::put<std::uint32_t>(out, static_cast<std::uint32_t>(entries_.size()));
  // Entries in key order so equal states serialize identically.
  std::vector<std::size_t> order(entries_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return entries_[a].key < entries_[b].key; });
  for (std::size_t i : order) {
    const CacheEntry& e = entries_[i];
    binary::put_bytes(out, e.key);
    binary::put<double>(out, seeds_[i]);
    binary::put<double>(out, e.tau_entry);
    if (with_f) binary::put<std::uint64_t>(out, e.f);
    e.counter.serialize(out, HashSeed{hash_seed, HashPurpose::kElement}.derived(),
                        HashSeed{hash_seed, HashPurpose::kBucket}.derived());
  }
}

SamplingCache SamplingCache::deserialize(std::string_view& in, std::uint64_t hash_seed, bool with_f) {
  binary::expect_magic(in, kMagic);
  if (binary::get<std::uint16_t>(in) != kVersion) throw ParseError("sampling cache: unsupported version");
  const auto capacity = binary::get<std::uint64_t>(in);
  const auto buckets = binary::get<std::uint32_t>(in);
  const auto tau = binary::get<double>(in);
  const auto count = binary::get<std::uint32_t>(in);
  SamplingCache cache(capacity == 0 ? kUnbounded : capacity, buckets, tau);
  const std::uint64_t element_id = HashSeed{hash_seed, HashPurpose::kElement}.derived();
  const std::uint64_t bucket_id = HashSeed{hash_seed, HashPurpose::kBucket}.derived();
  for (std::uint32_t n = 0; n < count; ++n) {
    CacheEntry e{std::string(binary::get_bytes(in)), DistinctCounter(buckets), 1.0, 0};
    const double seed = binary::get<double>(in);
    e.tau_entry = binary::get<double>(in);
    if (with_f) e.f = binary::get<std::uint64_t>(in);
    auto loaded = DistinctCounter::deserialize(in);
    if (loaded.element_seed_id != element_id || loaded.bucket_seed_id != bucket_id) {
      throw ParseError("sampling cache: counter hashed with a different seed");
    }
    if (loaded.counter.buckets() != buckets) throw ParseError("sampling cache: bucket count mismatch");
    e.counter = std::move(loaded.counter);
    if (cache.index_.contains(e.key)) throw ParseError("sampling cache: duplicate key");
    cache.index_.emplace(e.key, cache.entries_.size());
    cache.entries_.push_back(std::move(e));
    cache.seeds_.push_back(seed);
  }
  return cache;
}

std::vector<ReportRecord> make_report(const SamplingCache& cache) {
  std::vector<ReportRecord> out;
  out.reserve(cache.size());
  const auto entries = cache.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const CacheEntry& e = entries[i];
    out.push_back({e.key, e.counter.card_est(), e.tau_entry, cache.seed_at(i), e.f, e.counter.std_error()});
  }
  std::sort(out.begin(), out.end(), [](const ReportRecord& a, const ReportRecord& b) {
    if (a.card_est != b.card_est) return a.card_est > b.card_est;
    return a.key < b.key;
  });
  return out;
}

}  // namespace wsketch
