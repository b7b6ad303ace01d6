#include "wsketch/chh_sketch.hpp"

#include <cmath>

#include "wsketch/binary_io.hpp"
#include "wsketch/errors.hpp"

namespace wsketch {
namespace {
constexpr std::string_view kMagic = "WSCW";
constexpr std::uint16_t kVersion = 1;

double checked_rho(double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw InvalidParameter("rho must be in (0,1]");
  return rho;
}
}  // namespace

double combined_draw(double u, double rho) noexcept {
  // 1 - (1-u)^(1/rho) without cancellation for small u.
  return -std::expm1(std::log1p(-u) / rho);
}

ChhSketch::ChhSketch(std::size_t capacity, std::uint32_t buckets, double rho, std::uint64_t hash_seed)
    : hasher_(hash_seed, buckets), cache_(capacity, buckets, 1.0), rho_(checked_rho(rho)), coins_(hash_seed) {}

ChhSketch::ChhSketch(SamplingCache cache, double rho, std::uint64_t hash_seed)
    : hasher_(hash_seed, cache.buckets()), cache_(std::move(cache)), rho_(checked_rho(rho)), coins_(hash_seed) {}

ChhSketch ChhSketch::fixed_threshold(double tau, std::uint32_t buckets, double rho, std::uint64_t hash_seed) {
  return ChhSketch(SamplingCache(SamplingCache::kUnbounded, buckets, tau), rho, hash_seed);
}

ProcessResult ChhSketch::process(std::string_view key, std::string_view subkey) {
  // One draw per element, used or not.
  const double erand = combined_draw(coins_.next(), rho_);
  return process_hashed(key, hasher_(key, subkey), erand);
}

ProcessResult ChhSketch::process_hashed(std::string_view key, PairHash h, double erand) {
  return cache_.process_combined(key, h, erand);
}

WeightEstimate ChhSketch::estimate(const ReportRecord& r, Confidence conf) const {
  return estimate_combined(r.card_est, r.std_error, r.tau_entry, rho_, static_cast<double>(r.f), conf);
}

WeightEstimate ChhSketch::distinct_estimate(const ReportRecord& r, Confidence conf) const {
  return estimate_distinct(r.card_est, r.std_error, r.tau_entry, conf);
}

std::string ChhSketch::serialize() const {
  std::string out;
  out.append(kMagic);
  binary::put<std::uint16_t>(out, kVersion);
  binary::put<std::uint64_t>(out, hasher_.master_seed());
  binary::put<double>(out, rho_);
  binary::put<std::uint64_t>(out, coins_.state());
  cache_.serialize(out, hasher_.master_seed(), true);
  return out;
}

ChhSketch ChhSketch::deserialize(std::string_view bytes) {
  binary::expect_magic(bytes, kMagic);
  if (binary::get<std::uint16_t>(bytes) != kVersion) throw ParseError("cWS sketch: unsupported version");
  const auto seed = binary::get<std::uint64_t>(bytes);
  const auto rho = binary::get<double>(bytes);
  const auto coin_state = binary::get<std::uint64_t>(bytes);
  auto cache = SamplingCache::deserialize(bytes, seed, true);
  if (!bytes.empty()) throw ParseError("cWS sketch: trailing bytes");
  ChhSketch sketch(std::move(cache), rho, seed);
  sketch.coins_.set_state(coin_state);
  return sketch;
}

}  // namespace wsketch
