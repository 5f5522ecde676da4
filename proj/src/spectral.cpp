#include "evgraph/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "evgraph/error.hpp"
#include "evgraph/kernels.hpp"
#include "evgraph/rng.hpp"

namespace evgraph {

namespace {

constexpr double kStrictMargin = 1.0 + 1e-9;
// |S x| below this (for unit x) is treated as an exhausted operator.
constexpr double kUnderflow = 1e-13;

void normalize(std::span<double> x) {
  const double nrm = std::sqrt(kernels::norm2(x));
  if (nrm > 0.0) {
    for (double& v : x) v /= nrm;
  }
}

void fill_base_stats(const CsrMatrix& base, EigenPair& pair) {
  std::vector<double> lx(pair.vector.size());
  base.multiply(pair.vector, lx);
  pair.value = kernels::dot(pair.vector, lx);
  kernels::axpby(1.0, lx, -pair.value, pair.vector, lx);
  pair.residual = std::sqrt(kernels::norm2(lx));
}

}  // namespace

double rho_max_bound(const CsrMatrix& base, LaplacianKind kind) {
  bool has_edge = false;
  for (std::size_t r = 0; r < base.n && !has_edge; ++r) {
    for (std::int64_t k = base.row_ptr[r]; k < base.row_ptr[r + 1]; ++k) {
      if (static_cast<std::size_t>(base.col[static_cast<std::size_t>(k)]) != r &&
          base.val[static_cast<std::size_t>(k)] != 0.0) {
        has_edge = true;
        break;
      }
    }
  }
  if (!has_edge) return 1.0;
  if (kind == LaplacianKind::Normalized) return 2.0 * kStrictMargin;

  std::vector<double> deg(base.n);
  for (std::size_t r = 0; r < base.n; ++r) deg[r] = base.at(r, r);
  const double max_deg = *std::max_element(deg.begin(), deg.end());
  double edge_bound = 0.0;
  for (std::size_t r = 0; r < base.n; ++r) {
    for (std::int64_t k = base.row_ptr[r]; k < base.row_ptr[r + 1]; ++k) {
      const auto c = static_cast<std::size_t>(base.col[static_cast<std::size_t>(k)]);
      if (c != r && base.val[static_cast<std::size_t>(k)] != 0.0) {
        edge_bound = std::max(edge_bound, deg[r] + deg[c]);
      }
    }
  }
  return kStrictMargin * std::min(edge_bound, 2.0 * max_deg);
}

double spectral_map(double lambda, double rho_max, int omega) noexcept {
  const double mu = 1.0 - 2.0 * lambda / rho_max;
  return mu * (1.0 - std::pow(mu, omega));
}

void NullSpace::project_out(std::span<double> x) const {
  std::vector<double> num(n_components, 0.0);
  std::vector<double> den(n_components, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto c = static_cast<std::size_t>(component[i]);
    num[c] += weights[i] * x[i];
    den[c] += weights[i] * weights[i];
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto c = static_cast<std::size_t>(component[i]);
    if (den[c] > 0.0) x[i] -= weights[i] * num[c] / den[c];
  }
}

std::vector<double> NullSpace::basis_vector(std::size_t c) const {
  std::vector<double> v(component.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (static_cast<std::size_t>(component[i]) == c) v[i] = weights[i];
  }
  normalize(v);
  return v;
}

NullSpace null_space(const SparseGraph& graph, LaplacianKind kind) {
  NullSpace ns;
  ns.component = pattern_components(graph.adjacency);
  ns.n_components = graph.n_nodes == 0
                        ? 0
                        : static_cast<std::size_t>(
                              *std::max_element(ns.component.begin(), ns.component.end()) + 1);
  ns.weights.resize(graph.n_nodes);
  for (std::size_t i = 0; i < graph.n_nodes; ++i) {
    ns.weights[i] = kind == LaplacianKind::Normalized ? std::sqrt(graph.degrees[i]) : 1.0;
  }
  return ns;
}

SpectralOperator::SpectralOperator(const CsrMatrix& base, double rho_max, int omega)
    : base_(&base), rho_max_(rho_max), omega_(omega) {
  if (omega < 2) fail(ErrorKind::InvalidParameter, "omega must be >= 2");
  if (!(rho_max > 0.0)) fail(ErrorKind::InvalidParameter, "rho_max must be positive");
}

void SpectralOperator::deflate(double s_value, std::vector<double> v) {
  if (v.size() != dim()) fail(ErrorKind::InvalidInput, "deflation vector has wrong dimension");
  deflated_.push_back({s_value, std::move(v)});
}

void SpectralOperator::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = dim();
  if (x.size() != n || y.size() != n) {
    fail(ErrorKind::InvalidInput, "operator dimension " + std::to_string(n) +
                                      " does not match vector length " + std::to_string(x.size()));
  }
  const double c = 2.0 / rho_max_;
  t0_.assign(x.begin(), x.end());  // running M^j x
  t1_.resize(n);
  t2_.resize(n);
  for (int j = 0; j < omega_; ++j) {
    base_->multiply(t0_, t1_);
    kernels::axpby(1.0, t0_, -c, t1_, t0_);
  }
  // t2 = x - M^omega x, then y = M t2
  kernels::axpby(1.0, x, -1.0, t0_, t2_);
  base_->multiply(t2_, t1_);
  kernels::axpby(1.0, t2_, -c, t1_, y);
  for (const Deflation& d : deflated_) {
    const double proj = kernels::dot(d.vector, x);
    kernels::axpby(1.0, y, -d.s_value * proj, d.vector, y);
  }
}

std::vector<double> SpectralOperator::apply(std::span<const double> x) const {
  std::vector<double> y(x.size());
  apply(x, y);
  return y;
}

namespace {

// Removes null-space and already-deflated directions (twice, for stability).
void keep_out(const SpectralOperator& op, const NullSpace* ns, std::span<double> x) {
  for (int pass = 0; pass < 2; ++pass) {
    if (ns != nullptr) ns->project_out(x);
    for (const auto& d : op.deflated()) {
      const double p = kernels::dot(d.vector, x);
      kernels::axpby(1.0, x, -p, d.vector, x);
    }
  }
}

bool random_start(const SpectralOperator& op, const NullSpace* ns, CounterRng& rng,
                  std::vector<double>& x) {
  for (double& v : x) v = rng.normal();
  keep_out(op, ns, x);
  const double nrm = std::sqrt(kernels::norm2(x));
  if (!(nrm > kUnderflow)) return false;
  for (double& v : x) v /= nrm;
  return true;
}

// Shift for S + sigma I. With depth = sup of -f(mu) over mu in [-1, 0], every
// eigenvalue of S lies in [-depth, 1), so sigma = depth / 2 leaves any
// positive f strictly ahead of the negative lobe and the null space (both
// at most sigma in magnitude) while slowing convergence as little as
// possible. For even omega the negative lobe mirrors the positive one and
// peaks at mu* = (omega + 1)^(-1/omega); for odd omega it grows to 2 at -1.
double algebraic_shift(int omega) {
  if (omega % 2 != 0) return 1.0;
  const double w = static_cast<double>(omega);
  const double mu = std::pow(w + 1.0, -1.0 / w);
  return 0.5 * mu * w / (w + 1.0);
}

}  // namespace

EigenPair power_iteration(const SpectralOperator& op, const PowerOptions& opts) {
  if (opts.max_iters < 1) fail(ErrorKind::InvalidParameter, "max_iters must be >= 1");
  const std::size_t n = op.dim();
  if (n == 0) fail(ErrorKind::InvalidInput, "power iteration on an empty operator");
  CounterRng root(opts.seed);
  // Iterating S itself would find the largest |f|, and for the negative lobe
  // (mu near -1, i.e. high-frequency vectors) |f| rivals the positive peak.
  // The target is the largest signed eigenvalue of S, so iterate S + sigma I.
  const double sigma = algebraic_shift(op.omega());

  std::vector<double> x(n), y(n);
  EigenPair pair;
  for (int attempt = 0; attempt < 2; ++attempt) {
    CounterRng rng = root.split(static_cast<std::uint64_t>(attempt));
    if (!random_start(op, opts.null_space, rng, x)) continue;
    bool collapsed = false;
    std::size_t it = 0;
    bool converged = false;
    // One plain application strips null-space content from the start vector.
    op.apply(x, y);
    keep_out(op, opts.null_space, y);
    const double y0 = std::sqrt(kernels::norm2(y));
    if (!(y0 > kUnderflow)) continue;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / y0;
    for (; it < opts.max_iters; ++it) {
      op.apply(x, y);
      kernels::axpby(1.0, y, sigma, x, y);
      keep_out(op, opts.null_space, y);
      const double nrm = std::sqrt(kernels::norm2(y));
      if (!(nrm > kUnderflow)) {
        collapsed = true;
        break;
      }
      for (double& v : y) v /= nrm;
      const double sign = kernels::dot(x, y) < 0.0 ? -1.0 : 1.0;
      double diff2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = y[i] - sign * x[i];
        diff2 += d * d;
      }
      // Keep the sign of the previous iterate so the sequence is comparable.
      for (std::size_t i = 0; i < n; ++i) x[i] = sign * y[i];
      if (std::sqrt(diff2) < opts.tol) {
        converged = true;
        ++it;
        break;
      }
    }
    if (collapsed) continue;
    pair.vector = x;
    pair.iterations = it;
    pair.converged = converged;
    op.apply(pair.vector, y);
    pair.s_value = kernels::dot(pair.vector, y);
    fill_base_stats(op.base(), pair);
    return pair;
  }
  fail(ErrorKind::Numerical,
       "power iteration collapsed: |S x| vanished for two seeded starts (operator exhausted)");
}

std::vector<EigenPair> topk_small_eigvecs(const CsrMatrix& base, LaplacianKind kind,
                                          std::size_t k, const TopKOptions& opts) {
  const std::size_t n = base.n;
  if (k < 1 || k > n) {
    fail(ErrorKind::InvalidParameter,
         "k = " + std::to_string(k) + " must lie in [1, N] with N = " + std::to_string(n));
  }
  if (opts.null_space != nullptr && opts.null_space->component.size() != n) {
    fail(ErrorKind::InvalidInput, "null space dimension does not match the Laplacian");
  }
  SpectralOperator op(base, rho_max_bound(base, kind), opts.omega);
  const std::size_t null_dim = opts.null_space ? opts.null_space->n_components : 0;
  const std::size_t range_dim = n - null_dim;

  std::vector<EigenPair> out;
  out.reserve(k);
  CounterRng seeds(opts.seed);
  for (std::size_t i = 0; i < k && i < range_dim; ++i) {
    PowerOptions po;
    po.max_iters = opts.max_iters;
    po.tol = opts.tol;
    po.seed = seeds.split(i).next_u64();
    po.null_space = opts.null_space;
    EigenPair pair;
    try {
      pair = power_iteration(op, po);
    } catch (const Error& e) {
      fail(e.kind(), "eigenpair " + std::to_string(i) + ": " + e.what());
    }
    op.deflate(pair.s_value, pair.vector);
    out.push_back(std::move(pair));
  }
  for (std::size_t c = 0; out.size() < k && c < null_dim; ++c) {
    EigenPair pair;
    pair.vector = opts.null_space->basis_vector(c);
    pair.converged = true;
    fill_base_stats(base, pair);
    pair.s_value = 0.0;
    out.push_back(std::move(pair));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
  return out;
}

Eigen::MatrixXd to_dense(const CsrMatrix& m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.n),
                                            static_cast<Eigen::Index>(m.n));
  for (std::size_t r = 0; r < m.n; ++r) {
    for (std::int64_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
      d(static_cast<Eigen::Index>(r), m.col[static_cast<std::size_t>(k)]) =
          m.val[static_cast<std::size_t>(k)];
    }
  }
  return d;
}

std::vector<EigenPair> dense_evd(const Eigen::MatrixXd& base, std::size_t cap) {
  const auto n = static_cast<std::size_t>(base.rows());
  if (base.rows() != base.cols()) fail(ErrorKind::InvalidInput, "dense_evd needs a square matrix");
  if (n > cap) {
    fail(ErrorKind::InvalidParameter,
         "dense eigendecomposition refused for N = " + std::to_string(n) + " (cap " +
             std::to_string(cap) + "); use the power solver for large graphs");
  }
  std::vector<EigenPair> out;
  if (n == 0) return out;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(base);
  if (es.info() != Eigen::Success) fail(ErrorKind::Numerical, "dense eigendecomposition failed");
  out.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    EigenPair& p = out[j];
    const auto col = es.eigenvectors().col(static_cast<Eigen::Index>(j));
    p.vector.assign(col.data(), col.data() + n);
    p.value = es.eigenvalues()(static_cast<Eigen::Index>(j));
    const Eigen::VectorXd r = base * col - p.value * col;
    p.residual = r.norm();
    p.converged = true;
  }
  return out;
}

std::vector<EigenPair> dense_evd(const CsrMatrix& base, std::size_t cap) {
  if (base.n > cap) {
    fail(ErrorKind::InvalidParameter,
         "dense eigendecomposition refused for N = " + std::to_string(base.n) + " (cap " +
             std::to_string(cap) + "); use the power solver for large graphs");
  }
  return dense_evd(to_dense(base), cap);
}

}  // namespace evgraph
