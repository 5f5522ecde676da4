#include <atomic>
#include <string>

#include "evgraph/error.hpp"
#include "evgraph/kernels.hpp"

namespace evgraph::kernels {

namespace {

const KernelTable* table_or_null(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return &detail::scalar_table;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return &detail::avx2_table;
      }
#endif
      return nullptr;
    case Isa::Neon:
#if defined(__aarch64__)
      return &detail::neon_table;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{table_or_null(best_isa())};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::Scalar;
  if (name == "avx2") return Isa::Avx2;
  if (name == "neon") return Isa::Neon;
  if (name == "auto") return best_isa();
  fail(ErrorKind::InvalidParameter, "unknown ISA '" + std::string(name) + "'");
}

bool isa_supported(Isa isa) noexcept { return table_or_null(isa) != nullptr; }

Isa best_isa() noexcept {
  if (isa_supported(Isa::Avx2)) return Isa::Avx2;
  if (isa_supported(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

const KernelTable& table(Isa isa) {
  const KernelTable* t = table_or_null(isa);
  if (t == nullptr) {
    fail(ErrorKind::InvalidParameter,
         "ISA '" + std::string(isa_name(isa)) + "' is not supported on this CPU");
  }
  return *t;
}

const KernelTable& active() noexcept { return *active_slot().load(std::memory_order_acquire); }

void set_isa(Isa isa) { active_slot().store(&table(isa), std::memory_order_release); }

ScopedIsa::ScopedIsa(Isa isa) : previous_(active().isa) { set_isa(isa); }

ScopedIsa::~ScopedIsa() { set_isa(previous_); }

}  // namespace evgraph::kernels
