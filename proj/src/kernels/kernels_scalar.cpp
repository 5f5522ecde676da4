#include "evgraph/kernels.hpp"

namespace evgraph::kernels::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpby_scalar(double alpha, const double* x, double beta, const double* y, double* out,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

void spmv_scalar(std::size_t n_rows, const std::int64_t* row_ptr, const std::int32_t* col,
                 const double* val, const double* x, double* y) {
  for (std::size_t r = 0; r < n_rows; ++r) {
    double s = 0.0;
    for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }
}

void sq_dist3_scalar(const double* q, const double* xs, const double* ys, const double* zs,
                     double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - q[0];
    const double dy = ys[i] - q[1];
    const double dz = zs[i] - q[2];
    out[i] = dx * dx + dy * dy + dz * dz;
  }
}

}  // namespace

const KernelTable scalar_table{Isa::Scalar, dot_scalar, axpby_scalar, spmv_scalar,
                               sq_dist3_scalar};

}  // namespace evgraph::kernels::detail
