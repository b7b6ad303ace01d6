#include "wsketch/hashing.hpp"

#include <array>
#include <charconv>
#include <cstring>
#include <string>

#include "wsketch/errors.hpp"

namespace wsketch {
namespace {

constexpr std::uint64_t kPurposeSalt[] = {
    0x0000000000000000ULL,
    0x9e3779b97f4a7c15ULL,  // element
    0xc2b2ae3d27d4eb4fULL,  // bucket
    0x165667b19e3779f9ULL,  // coin
};

inline std::uint64_t load64(const unsigned char* p) noexcept {
  std::uint64_t v;
  std::memcpy(&v, p, sizeof(v));
  return v;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t HashSeed::derived() const noexcept {
  return mix64(value ^ kPurposeSalt[static_cast<std::size_t>(purpose) & 3U]);
}

std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed) noexcept {
  constexpr std::uint64_t m = 0xc6a4a7935bd1e995ULL;
  constexpr int r = 47;
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t len = bytes.size();
  std::uint64_t h = seed ^ (len * m);

  const std::size_t blocks = len / 8;
  for (std::size_t i = 0; i < blocks; ++i) {
    std::uint64_t k = load64(data + i * 8);
    k *= m;
    k ^= k >> r;
    k *= m;
    h ^= k;
    h *= m;
  }

  const unsigned char* tail = data + blocks * 8;
  switch (len & 7U) {
    case 7: h ^= std::uint64_t(tail[6]) << 48; [[fallthrough]];
    case 6: h ^= std::uint64_t(tail[5]) << 40; [[fallthrough]];
    case 5: h ^= std::uint64_t(tail[4]) << 32; [[fallthrough]];
    case 4: h ^= std::uint64_t(tail[3]) << 24; [[fallthrough]];
    case 3: h ^= std::uint64_t(tail[2]) << 16; [[fallthrough]];
    case 2: h ^= std::uint64_t(tail[1]) << 8; [[fallthrough]];
    case 1:
      h ^= std::uint64_t(tail[0]);
      h *= m;
      break;
    default: break;
  }

  h ^= h >> r;
  h *= m;
  h ^= h >> r;
  return h;
}

std::uint64_t hash_pair(std::uint64_t seed, std::string_view key, std::string_view subkey) noexcept {
  const std::size_t total = key.size() + 1 + subkey.size();
  std::array<char, 256> stack;
  if (total <= stack.size()) {
    std::memcpy(stack.data(), key.data(), key.size());
    stack[key.size()] = '\0';
    std::memcpy(stack.data() + key.size() + 1, subkey.data(), subkey.size());
    return mix64(hash_bytes({stack.data(), total}, seed));
  }
  std::string buf;
  buf.reserve(total);
  buf.append(key).push_back('\0');
  buf.append(subkey);
  return mix64(hash_bytes(buf, seed));
}

double to_unit(std::uint64_t digest) noexcept {
  // Top 53 bits: exact in a double and strictly below 1.
  return static_cast<double>(digest >> 11) * 0x1.0p-53;
}

double unit_hash(HashSeed seed, std::string_view key, std::string_view subkey) noexcept {
  return to_unit(hash_pair(seed.derived(), key, subkey));
}

std::uint32_t bucket_of(HashSeed seed, std::string_view key, std::string_view subkey,
                        std::uint32_t buckets) {
  if (buckets == 0) throw InvalidParameter("bucket_of: bucket count must be positive");
  const std::uint64_t d = hash_pair(seed.derived(), key, subkey);
  return static_cast<std::uint32_t>((static_cast<unsigned __int128>(d) * buckets) >> 64);
}

std::optional<std::uint64_t> parse_seed(std::string_view text) noexcept {
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
    base = 16;
  }
  if (text.empty()) return std::nullopt;
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, base);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

PairHasher::PairHasher(std::uint64_t master_seed, std::uint32_t buckets)
    : master_(master_seed),
      element_(HashSeed{master_seed, HashPurpose::kElement}.derived()),
      bucket_(HashSeed{master_seed, HashPurpose::kBucket}.derived()),
      buckets_(buckets) {
  if (buckets == 0) throw InvalidParameter("PairHasher: bucket count must be positive");
}

PairHash PairHasher::operator()(std::string_view key, std::string_view subkey) const noexcept {
  const std::uint64_t e = hash_pair(element_, key, subkey);
  const std::uint64_t b = hash_pair(bucket_, key, subkey);
  return {to_unit(e), static_cast<std::uint32_t>((static_cast<unsigned __int128>(b) * buckets_) >> 64)};
}

CoinSource::CoinSource(std::uint64_t master_seed) noexcept
    : state_(HashSeed{master_seed, HashPurpose::kCoin}.derived()) {}

double CoinSource::next() noexcept {
  // splitmix64 stream
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return to_unit(z ^ (z >> 31));
}

}  // namespace wsketch
