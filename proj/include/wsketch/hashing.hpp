#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace wsketch {

enum class HashPurpose : std::uint8_t {
  kElement = 1,  // unit-interval element hash
  kBucket = 2,   // bucket index for stochastic averaging
  kCoin = 3,     // random draws (Sample-and-Hold coins, cWS erand)
};

// A 64-bit seed bound to one purpose. The same value with different purposes
// yields unrelated hash families.
struct HashSeed {
  std::uint64_t value = 0;
  HashPurpose purpose = HashPurpose::kElement;

  // Mixed seed actually fed to the byte hash.
  [[nodiscard]] std::uint64_t derived() const noexcept;
};

// splitmix64 finalizer; bijective on 64 bits.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

// MurmurHash64A over raw bytes.
[[nodiscard]] std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed) noexcept;

// Digest of key || 0x00 || subkey.
[[nodiscard]] std::uint64_t hash_pair(std::uint64_t seed, std::string_view key,
                                      std::string_view subkey) noexcept;

// Maps a digest to [0,1) with 2^-64 granularity (rounded down to the nearest double).
[[nodiscard]] double to_unit(std::uint64_t digest) noexcept;

// Uniform value in [0,1); deterministic for fixed (seed, key, subkey).
[[nodiscard]] double unit_hash(HashSeed seed, std::string_view key, std::string_view subkey) noexcept;

// Bucket in [0, buckets). Throws InvalidParameter when buckets == 0.
[[nodiscard]] std::uint32_t bucket_of(HashSeed seed, std::string_view key, std::string_view subkey,
                                      std::uint32_t buckets);

// Parses a decimal or 0x-prefixed hex 64-bit seed. Returns nullopt on garbage.
[[nodiscard]] std::optional<std::uint64_t> parse_seed(std::string_view text) noexcept;

// Element hash and bucket for one (key, subkey) pair under a master seed.
struct PairHash {
  double unit = 0.0;
  std::uint32_t bucket = 0;
};

class PairHasher {
 public:
  PairHasher(std::uint64_t master_seed, std::uint32_t buckets);

  [[nodiscard]] PairHash operator()(std::string_view key, std::string_view subkey) const noexcept;

  [[nodiscard]] std::uint64_t master_seed() const noexcept { return master_; }
  [[nodiscard]] std::uint32_t buckets() const noexcept { return buckets_; }
  [[nodiscard]] HashSeed element_seed() const noexcept { return {master_, HashPurpose::kElement}; }
  [[nodiscard]] HashSeed bucket_seed() const noexcept { return {master_, HashPurpose::kBucket}; }

 private:
  std::uint64_t master_;
  std::uint64_t element_;
  std::uint64_t bucket_;
  std::uint32_t buckets_;
};

// Seeded generator of uniform [0,1) draws with a platform-independent mapping.
class CoinSource {
 public:
  explicit CoinSource(std::uint64_t master_seed) noexcept;

  [[nodiscard]] double next() noexcept;

  [[nodiscard]] std::uint64_t state() const noexcept { return state_; }
  void set_state(std::uint64_t s) noexcept { state_ = s; }

 private:
  std::uint64_t state_;
};

}  // namespace wsketch
