#pragma once

// Data-parallel inner loops shared by the graph builder and the eigensolver.
//
// Every kernel has a scalar reference implementation; vectorized variants
// (AVX2+FMA on x86-64, NEON on AArch64) are selected once at runtime from the
// CPU feature set and can be pinned with set_isa() for testing and
// reproducibility. Variants agree with the scalar reference up to floating
// point reassociation; the result for a fixed ISA is deterministic.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace evgraph::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;
Isa parse_isa(std::string_view name);  // "scalar" | "avx2" | "neon" | "auto"

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // out[i] = alpha * x[i] + beta * y[i]; out may alias x or y
  void (*axpby)(double alpha, const double* x, double beta, const double* y, double* out,
                std::size_t n);
  // y = A x for CSR A with n_rows rows
  void (*spmv)(std::size_t n_rows, const std::int64_t* row_ptr, const std::int32_t* col,
               const double* val, const double* x, double* y);
  // out[i] = |(xs[i], ys[i], zs[i]) - q|^2 for SoA coordinates
  void (*sq_dist3)(const double* q, const double* xs, const double* ys, const double* zs,
                   double* out, std::size_t n);
};

bool isa_supported(Isa isa) noexcept;
Isa best_isa() noexcept;

// Table for a specific ISA; throws evgraph::Error if unsupported on this CPU.
const KernelTable& table(Isa isa);

// Currently active table (best_isa() unless overridden).
const KernelTable& active() noexcept;
void set_isa(Isa isa);

// RAII pin of the active ISA, restoring the previous one on scope exit.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa);
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline double norm2(std::span<const double> a) {
  return active().dot(a.data(), a.data(), a.size());
}

inline void axpby(double alpha, std::span<const double> x, double beta, std::span<const double> y,
                  std::span<double> out) {
  active().axpby(alpha, x.data(), beta, y.data(), out.data(), out.size());
}

namespace detail {
// Per-ISA tables, defined in their own translation units.
extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif
#if defined(__aarch64__)
extern const KernelTable neon_table;
#endif
}  // namespace detail

}  // namespace evgraph::kernels
