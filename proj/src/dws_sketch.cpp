#include "wsketch/dws_sketch.hpp"

#include "wsketch/binary_io.hpp"
#include "wsketch/errors.hpp"

namespace wsketch {
namespace {
constexpr std::string_view kMagic = "WSDW";
constexpr std::uint16_t kVersion = 1;
}  // namespace

DwsSketch::DwsSketch(std::size_t capacity, std::uint32_t buckets, std::uint64_t hash_seed)
    : hasher_(hash_seed, buckets), cache_(capacity, buckets, 1.0) {}

DwsSketch::DwsSketch(SamplingCache cache, std::uint64_t hash_seed)
    : hasher_(hash_seed, cache.buckets()), cache_(std::move(cache)) {}

DwsSketch DwsSketch::fixed_threshold(double tau, std::uint32_t buckets, std::uint64_t hash_seed) {
  return DwsSketch(SamplingCache(SamplingCache::kUnbounded, buckets, tau), hash_seed);
}

ProcessResult DwsSketch::process(std::string_view key, std::string_view subkey) {
  return process_hashed(key, hasher_(key, subkey));
}

ProcessResult DwsSketch::process_hashed(std::string_view key, PairHash h) {
  return cache_.bounded() ? cache_.process_distinct(key, h) : cache_.process_threshold(key, h);
}

WeightEstimate DwsSketch::estimate(const ReportRecord& r, Confidence conf) const {
  return estimate_distinct(r.card_est, r.std_error, r.tau_entry, conf);
}

std::string DwsSketch::serialize() const {
  std::string out;
  out.append(kMagic);
  binary::put<std::uint16_t>(out, kVersion);
  binary::put<std::uint64_t>(out, hasher_.master_seed());
  cache_.serialize(out, hasher_.master_seed(), false);
  return out;
}

DwsSketch DwsSketch::deserialize(std::string_view bytes) {
  binary::expect_magic(bytes, kMagic);
  if (binary::get<std::uint16_t>(bytes) != kVersion) throw ParseError("dWS sketch: unsupported version");
  const auto seed = binary::get<std::uint64_t>(bytes);
  auto cache = SamplingCache::deserialize(bytes, seed, false);
  if (!bytes.empty()) throw ParseError("dWS sketch: trailing bytes");
  return DwsSketch(std::move(cache), seed);
}

}  // namespace wsketch
