#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "wsketch/errors.hpp"

namespace wsketch::kernels {
namespace {

constexpr KernelTable kScalar{&scalar::sum, &scalar::min, &scalar::argmax};
#if defined(WSKETCH_HAVE_AVX2)
constexpr KernelTable kAvx2{&avx2::sum, &avx2::min, &avx2::argmax};
#endif
#if defined(__aarch64__) && defined(__ARM_NEON)
constexpr KernelTable kNeon{&neon::sum, &neon::min, &neon::argmax};
#endif

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("WSKETCH_SIMD")) {
    try {
      const Isa requested = parse_isa(env);
      if (isa_supported(requested)) return requested;
    } catch (const InvalidParameter&) {
    }
  }
  return best_isa();
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{&table_for(initial_isa())};
  return slot;
}

std::atomic<Isa>& active_isa_slot() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2:
#if defined(WSKETCH_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(__aarch64__) && defined(__ARM_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!isa_supported(isa)) {
    throw InvalidParameter("kernel ISA not supported on this machine: " + std::string(isa_name(isa)));
  }
  switch (isa) {
#if defined(WSKETCH_HAVE_AVX2)
    case Isa::kAvx2: return kAvx2;
#endif
#if defined(__aarch64__) && defined(__ARM_NEON)
    case Isa::kNeon: return kNeon;
#endif
    default: return kScalar;
  }
}

Isa best_isa() noexcept {
  if (isa_supported(Isa::kAvx2)) return Isa::kAvx2;
  if (isa_supported(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

Isa active_isa() noexcept { return active_isa_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  const KernelTable& t = table_for(isa);
  active_slot().store(&t, std::memory_order_release);
  active_isa_slot().store(isa, std::memory_order_relaxed);
}

const KernelTable& active() noexcept { return *active_slot().load(std::memory_order_acquire); }

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

Isa parse_isa(std::string_view name) {
  if (name == "auto") return best_isa();
  if (name == "scalar") return Isa::kScalar;
  if (name == "avx2") return Isa::kAvx2;
  if (name == "neon") return Isa::kNeon;
  throw InvalidParameter("unknown kernel ISA: " + std::string(name));
}

}  // namespace wsketch::kernels
