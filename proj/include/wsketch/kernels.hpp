#pragma once

// Data-parallel inner loops over bucket arrays and cache seed arrays.
//
// Every kernel has a scalar reference implementation and optional AVX2 and
// NEON variants selected at runtime. Variants are bit-identical to the
// reference: the reference sum accumulates four interleaved lanes and
// combines them as (l0 + l1) + (l2 + l3), which is the order a 4-wide
// vector accumulator produces.

#include <cstddef>
#include <span>
#include <string_view>

namespace wsketch::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

struct KernelTable {
  double (*sum)(const double* data, std::size_t n);
  double (*min)(const double* data, std::size_t n);
  std::size_t (*argmax)(const double* data, std::size_t n);
};

// Reference implementations; always available.
namespace scalar {
double sum(const double* data, std::size_t n);
double min(const double* data, std::size_t n);
std::size_t argmax(const double* data, std::size_t n);
}  // namespace scalar

[[nodiscard]] bool isa_supported(Isa isa) noexcept;
[[nodiscard]] const KernelTable& table_for(Isa isa);
[[nodiscard]] Isa best_isa() noexcept;

// Active table; defaults to best_isa() unless WSKETCH_SIMD=scalar|avx2|neon is set.
[[nodiscard]] Isa active_isa() noexcept;
void set_active_isa(Isa isa);
[[nodiscard]] const KernelTable& active() noexcept;

[[nodiscard]] std::string_view isa_name(Isa isa) noexcept;
// Accepts "auto", "scalar", "avx2", "neon".
[[nodiscard]] Isa parse_isa(std::string_view name);

// Sum of values. 0 for an empty span.
inline double sum(std::span<const double> v) noexcept { return active().sum(v.data(), v.size()); }
// Minimum; +inf for an empty span.
inline double min(std::span<const double> v) noexcept { return active().min(v.data(), v.size()); }
// Index of the first maximum; 0 for an empty span.
inline std::size_t argmax(std::span<const double> v) noexcept {
  return active().argmax(v.data(), v.size());
}

}  // namespace wsketch::kernels
