#include "wsketch/distinct_counter.hpp"

#include <algorithm>
#include <cmath>

#include "wsketch/binary_io.hpp"
#include "wsketch/errors.hpp"
#include "wsketch/kernels.hpp"

namespace wsketch {
namespace {
constexpr std::string_view kMagic = "WSDC";
constexpr std::uint16_t kVersion = 1;
}  // namespace

DistinctCounter::DistinctCounter(std::uint32_t buckets) {
  if (buckets < 2) throw InvalidParameter("DistinctCounter: need at least 2 buckets");
  c_.assign(buckets, 1.0);
}

bool DistinctCounter::merge(double unit, std::uint32_t bucket) {
  if (!(unit >= 0.0 && unit < 1.0)) throw InvalidParameter("DistinctCounter::merge: hash outside [0,1)");
  if (bucket >= c_.size()) throw InvalidParameter("DistinctCounter::merge: bucket index out of range");
  if (!(unit < c_[bucket])) return false;
  cardest_ += static_cast<double>(c_.size()) / kernels::sum(c_);
  c_[bucket] = unit;
  return true;
}

double DistinctCounter::std_error() const noexcept {
  return cardest_ / std::sqrt(2.0 * static_cast<double>(c_.size()));
}

double DistinctCounter::min_bucket() const noexcept { return kernels::min(c_); }

void DistinctCounter::reset() noexcept {
  std::fill(c_.begin(), c_.end(), 1.0);
  cardest_ = 0.0;
}

void DistinctCounter::serialize(std::string& out, std::uint64_t element_seed_id,
                                std::uint64_t bucket_seed_id) const {
  out.append(kMagic);
  binary::put<std::uint16_t>(out, kVersion);
  binary::put<std::uint32_t>(out, buckets());
  binary::put<std::uint64_t>(out, element_seed_id);
  binary::put<std::uint64_t>(out, bucket_seed_id);
  for (double v : c_) binary::put<double>(out, v);
  binary::put<double>(out, cardest_);
}

DistinctCounter::Loaded DistinctCounter::deserialize(std::string_view& in) {
  binary::expect_magic(in, kMagic);
  const auto version = binary::get<std::uint16_t>(in);
  if (version != kVersion) throw ParseError("DistinctCounter: unsupported record version");
  const auto buckets = binary::get<std::uint32_t>(in);
  if (buckets < 2) throw ParseError("DistinctCounter: bad bucket count");
  Loaded loaded;
  loaded.element_seed_id = binary::get<std::uint64_t>(in);
  loaded.bucket_seed_id = binary::get<std::uint64_t>(in);
  loaded.counter.c_.resize(buckets);
  for (auto& v : loaded.counter.c_) {
    v = binary::get<double>(in);
    if (!(v >= 0.0 && v <= 1.0)) throw ParseError("DistinctCounter: bucket value outside [0,1]");
  }
  loaded.counter.cardest_ = binary::get<double>(in);
  return loaded;
}

std::size_t serialized_counter_size(std::uint32_t buckets) noexcept {
  return kMagic.size() + 2 + 4 + 8 + 8 + 8 * static_cast<std::size_t>(buckets) + 8;
}

}  // namespace wsketch
