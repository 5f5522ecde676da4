#pragma once

// Eigenpairs of graph Laplacians for small non-zero eigenvalues.
//
// The power method runs on the polynomial operator
//
//   S = M (I - M^omega),  M = I - (2 / rho_max) L,
//
// which maps a Laplacian eigenvalue lambda to
// f(lambda) = mu (1 - mu^omega) with mu = 1 - 2 lambda / rho_max. Since
// |mu| < 1 for every non-zero lambda, the null space is annihilated and small
// non-zero eigenvalues get the largest signed values. The negative lobe
// (lambda near rho_max) reaches similar magnitudes, so the iteration targets
// the largest algebraic eigenvalue by running on S + sigma I, with sigma half
// the depth of that lobe. S is applied matrix-free with
// omega + 1 sparse products. Further pairs come from rank-one deflation
// S <- S - s x x^T with s the S-eigenvalue of the extracted vector.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "evgraph/graph_construct.hpp"
#include "evgraph/sparse.hpp"

namespace evgraph {

enum class LaplacianKind { Combinatorial, Normalized };

struct EigenPair {
  double value = 0.0;     // Rayleigh quotient against the base Laplacian
  std::vector<double> vector;  // unit norm
  double residual = 0.0;  // |L v - value v|
  double s_value = 0.0;   // Rayleigh quotient against the (deflated) operator S
  std::size_t iterations = 0;
  bool converged = false;
};

// Strict upper bound on lambda_max of `base`.
double rho_max_bound(const CsrMatrix& base, LaplacianKind kind);

// Reordering polynomial applied to a scalar eigenvalue.
double spectral_map(double lambda, double rho_max, int omega) noexcept;

// Null space of a Laplacian, one direction per connected component: the
// entries of `weights` restricted to the component, normalised. Weights are
// 1 for the combinatorial Laplacian and sqrt(degree) for the normalised one.
struct NullSpace {
  std::vector<std::int32_t> component;  // component id per node
  std::vector<double> weights;
  std::size_t n_components = 0;

  // x <- x minus its projection on the null space.
  void project_out(std::span<double> x) const;
  // Unit null vector of component c.
  std::vector<double> basis_vector(std::size_t c) const;
};

NullSpace null_space(const SparseGraph& graph, LaplacianKind kind);

class SpectralOperator {
 public:
  // `base` must outlive the operator.
  SpectralOperator(const CsrMatrix& base, double rho_max, int omega);

  std::size_t dim() const noexcept { return base_->n; }
  const CsrMatrix& base() const noexcept { return *base_; }
  double rho_max() const noexcept { return rho_max_; }
  int omega() const noexcept { return omega_; }

  // Adds the rank-one term -s_value * v v^T; v must be unit norm.
  void deflate(double s_value, std::vector<double> v);

  struct Deflation {
    double s_value;
    std::vector<double> vector;
  };
  const std::vector<Deflation>& deflated() const noexcept { return deflated_; }

  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

 private:
  const CsrMatrix* base_;
  double rho_max_;
  int omega_;
  std::vector<Deflation> deflated_;
  mutable std::vector<double> t0_, t1_, t2_;
};

struct PowerOptions {
  std::size_t max_iters = 50;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  // Directions kept out of every iterate: the null space (if known) and the
  // previously deflated vectors.
  const NullSpace* null_space = nullptr;
};

// Normalized iteration on S + sigma I from a seeded start. value/residual are
// measured against the base Laplacian, s_value against S (unshifted).
EigenPair power_iteration(const SpectralOperator& op, const PowerOptions& opts);

struct TopKOptions {
  int omega = 30;
  std::size_t max_iters = 50;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  const NullSpace* null_space = nullptr;
};

// k pairs by repeated power iteration and deflation, ascending by value.
// When a null space is supplied and the non-null part of the spectrum is
// exhausted, the remaining slots are filled with null-space directions.
std::vector<EigenPair> topk_small_eigvecs(const CsrMatrix& base, LaplacianKind kind,
                                          std::size_t k, const TopKOptions& opts);

constexpr std::size_t kDenseEvdCap = 3000;

Eigen::MatrixXd to_dense(const CsrMatrix& m);

// Full symmetric eigendecomposition, ascending.
std::vector<EigenPair> dense_evd(const Eigen::MatrixXd& base, std::size_t cap = kDenseEvdCap);
std::vector<EigenPair> dense_evd(const CsrMatrix& base, std::size_t cap = kDenseEvdCap);

}  // namespace evgraph
