// Brute-force and closed-form references shared by the test binaries. Nothing
// here calls into the library's search, graph or solver code paths.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "evgraph/event_model.hpp"
#include "evgraph/graph_construct.hpp"

namespace oracle {

using EdgeSet = std::set<std::pair<int, int>>;

inline evgraph::ScaledEvents random_cloud(std::size_t n, std::uint64_t seed, double extent = 10.0,
                                          bool lattice = false) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, extent);
  std::uniform_int_distribution<int> cell(0, static_cast<int>(extent));
  std::vector<std::array<double, 3>> pts(n);
  for (auto& p : pts) {
    for (double& c : p) c = lattice ? cell(gen) : u(gen);
  }
  return evgraph::ScaledEvents::from_points(pts);
}

inline double sq(const evgraph::ScaledEvents& p, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    const double d = p(i, c) - p(j, c);
    s += d * d;
  }
  return s;
}

// (squared distance, index) for every other point, ascending.
inline std::vector<std::pair<double, int>> ranked(const evgraph::ScaledEvents& p, std::size_t i) {
  std::vector<std::pair<double, int>> out;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (j != i) out.emplace_back(sq(p, i, j), static_cast<int>(j));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline EdgeSet eng_edges(const evgraph::ScaledEvents& p, double eps) {
  EdgeSet e;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (std::sqrt(sq(p, i, j)) <= eps) e.emplace(i, j);
    }
  }
  return e;
}

inline EdgeSet knng_edges(const evgraph::ScaledEvents& p, std::size_t k) {
  EdgeSet e;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto r = ranked(p, i);
    for (std::size_t m = 0; m < k; ++m) {
      const int j = r[m].second;
      e.emplace(std::min<int>(i, j), std::max<int>(i, j));
    }
  }
  return e;
}

// Greedy budgeted neighbour lists: admit nearest-first while the running sum
// of unsquared distances stays within (1/N) * sum of all distances from i.
inline std::vector<std::vector<int>> vknng_lists(const evgraph::ScaledEvents& p) {
  const std::size_t n = p.size();
  std::vector<std::vector<int>> lists(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = ranked(p, i);
    double total = 0.0;
    for (const auto& [d2, j] : r) total += std::sqrt(d2);
    const double budget = total / static_cast<double>(n);
    double used = 0.0;
    for (const auto& [d2, j] : r) {
      const double d = std::sqrt(d2);
      if (used + d > budget) break;
      used += d;
      lists[i].push_back(j);
    }
  }
  return lists;
}

inline EdgeSet union_edges(const std::vector<std::vector<int>>& lists) {
  EdgeSet e;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    for (int j : lists[i]) e.emplace(std::min<int>(i, j), std::max<int>(i, j));
  }
  return e;
}

inline EdgeSet edges_of(const evgraph::SparseGraph& g) {
  EdgeSet e;
  const auto& a = g.adjacency;
  for (std::size_t r = 0; r < a.n; ++r) {
    for (auto k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      const int c = a.col[k];
      if (static_cast<int>(r) < c) e.emplace(static_cast<int>(r), c);
    }
  }
  return e;
}

// Index of the first maximiser of L(n) - d_n, 1-based.
inline std::size_t knee_position(const std::vector<double>& d) {
  const std::size_t n = d.size();
  std::size_t best = 1;
  double best_gap = -INFINITY;
  for (std::size_t i = 1; i <= n; ++i) {
    const double line =
        (d[n - 1] - d[0]) / static_cast<double>(n - 1) * static_cast<double>(i - 1) + d[0];
    const double gap = line - d[i - 1];
    if (gap > best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  return best;
}

// Fixture builders over an explicit edge list.
using Edges = std::vector<evgraph::WeightedEdge>;

inline void add_path(Edges& e, int first, int len, double w = 1.0) {
  for (int i = 0; i + 1 < len; ++i) e.push_back({first + i, first + i + 1, w});
}

inline void add_complete(Edges& e, int first, int m, double w = 1.0) {
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) e.push_back({first + i, first + j, w});
}

inline void add_grid(Edges& e, int first, int rows, int cols, double w = 1.0) {
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int v = first + r * cols + c;
      if (c + 1 < cols) e.push_back({v, v + 1, w});
      if (r + 1 < rows) e.push_back({v, v + cols, w});
    }
  }
}

// Random spanning tree plus extra random edges; weights in [0.2, 1].
inline Edges random_connected(int n, double extra_p, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> w(0.2, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::set<std::pair<int, int>> seen;
  Edges e;
  for (int v = 1; v < n; ++v) {
    const int p = std::uniform_int_distribution<int>(0, v - 1)(gen);
    seen.emplace(p, v);
    e.push_back({p, v, w(gen)});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!seen.count({i, j}) && u(gen) < extra_p) e.push_back({i, j, w(gen)});
    }
  }
  return e;
}

inline Eigen::MatrixXd dense_laplacian(int n, const Edges& edges) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [u, v, w] : edges) {
    l(u, v) -= w;
    l(v, u) -= w;
    l(u, u) += w;
    l(v, v) += w;
  }
  return l;
}

inline Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// S = M (I - M^omega) with M = I - (2/rho) L, materialised densely.
inline Eigen::MatrixXd dense_s(const Eigen::MatrixXd& l, double rho, int omega) {
  const auto n = l.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd m = id - (2.0 / rho) * l;
  Eigen::MatrixXd p = id;
  for (int i = 0; i < omega; ++i) p = p * m;
  return m * (id - p);
}

}  // namespace oracle
