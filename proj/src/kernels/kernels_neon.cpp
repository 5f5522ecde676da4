#include "evgraph/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace evgraph::kernels::detail {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpby_neon(double alpha, const double* x, double beta, const double* y, double* out,
                std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  const float64x2_t vb = vdupq_n_f64(beta);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vaddq_f64(vmulq_f64(va, vld1q_f64(x + i)), vmulq_f64(vb, vld1q_f64(y + i))));
  }
  for (; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

void spmv_neon(std::size_t n_rows, const std::int64_t* row_ptr, const std::int32_t* col,
               const double* val, const double* x, double* y) {
  for (std::size_t r = 0; r < n_rows; ++r) {
    std::int64_t k = row_ptr[r];
    const std::int64_t end = row_ptr[r + 1];
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; k + 2 <= end; k += 2) {
      const double pair[2] = {x[col[k]], x[col[k + 1]]};
      acc = vfmaq_f64(acc, vld1q_f64(val + k), vld1q_f64(pair));
    }
    double s = vaddvq_f64(acc);
    for (; k < end; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }
}

void sq_dist3_neon(const double* q, const double* xs, const double* ys, const double* zs,
                   double* out, std::size_t n) {
  const float64x2_t qx = vdupq_n_f64(q[0]);
  const float64x2_t qy = vdupq_n_f64(q[1]);
  const float64x2_t qz = vdupq_n_f64(q[2]);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(xs + i), qx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(ys + i), qy);
    const float64x2_t dz = vsubq_f64(vld1q_f64(zs + i), qz);
    vst1q_f64(out + i,
              vaddq_f64(vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)), vmulq_f64(dz, dz)));
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - q[0];
    const double dy = ys[i] - q[1];
    const double dz = zs[i] - q[2];
    out[i] = dx * dx + dy * dy + dz * dz;
  }
}

}  // namespace

const KernelTable neon_table{Isa::Neon, dot_neon, axpby_neon, spmv_neon, sq_dist3_neon};

}  // namespace evgraph::kernels::detail

#endif
