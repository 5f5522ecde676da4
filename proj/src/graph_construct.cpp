#include "evgraph/graph_construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "evgraph/error.hpp"
#include "evgraph/spatial_index.hpp"

namespace evgraph {

DensityProfile local_density(const ScaledEvents& coords, std::size_t knn_k) {
  const std::size_t n = coords.size();
  if (n < 2) fail(ErrorKind::InvalidInput, "density needs at least two events");
  if (knn_k < 1 || knn_k >= n) {
    fail(ErrorKind::InvalidParameter, "density k = " + std::to_string(knn_k) +
                                          " must lie in [1, N-1] with N = " + std::to_string(n));
  }
  const KdIndex index(coords);
  DensityProfile p;
  p.knn_k = knn_k;
  p.d.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (const Neighbor& nb : index.knn(i, knn_k)) s += nb.sq_dist;
    p.d[i] = s / static_cast<double>(knn_k);
  }
  p.sorted_desc.resize(n);
  std::iota(p.sorted_desc.begin(), p.sorted_desc.end(), 0);
  std::stable_sort(p.sorted_desc.begin(), p.sorted_desc.end(),
                   [&](std::size_t a, std::size_t b) { return p.d[a] > p.d[b]; });
  return p;
}

KneePoint knee_from_sorted(const std::vector<double>& d) {
  const std::size_t n = d.size();
  if (n < 2) fail(ErrorKind::InvalidInput, "knee point needs at least two densities");
  const double slope = (d[n - 1] - d[0]) / static_cast<double>(n - 1);
  KneePoint best{d[0], 1, false};
  double best_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t pos = 1; pos <= n; ++pos) {
    const double line = slope * static_cast<double>(pos - 1) + d[0];
    const double gap = line - d[pos - 1];
    if (gap > best_gap) {
      best_gap = gap;
      best.value = d[pos - 1];
      best.position = pos;
    }
  }
  best.degenerate = !(best_gap > 0.0);
  return best;
}

KneePoint knee_epsilon(const DensityProfile& profile) {
  std::vector<double> sorted;
  sorted.reserve(profile.d.size());
  for (std::size_t i : profile.sorted_desc) sorted.push_back(profile.d[i]);
  return knee_from_sorted(sorted);
}

namespace {

// Builds a graph from undirected pairs (i < j); weights are computed once per
// pair so the adjacency is exactly symmetric. A weight that underflows past
// the normal range carries no usable coupling (and breaks D^-1/2), so the
// pair is dropped: W is a normal positive number exactly on edges.
SparseGraph graph_from_pairs(std::size_t n, const std::vector<std::pair<std::int32_t, std::int32_t>>& pairs,
                             const ScaledEvents& coords, double gamma) {
  std::vector<Triplet> t;
  t.reserve(pairs.size() * 2);
  for (const auto& [i, j] : pairs) {
    const double w = std::exp(-gamma * squared_distance(coords, static_cast<std::size_t>(i),
                                                        static_cast<std::size_t>(j)));
    if (!(w >= std::numeric_limits<double>::min())) continue;
    t.push_back({i, j, w});
    t.push_back({j, i, w});
  }
  SparseGraph g;
  g.n_nodes = n;
  g.adjacency = csr_from_triplets(n, std::move(t));
  g.degrees.assign(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::int64_t k = g.adjacency.row_ptr[r]; k < g.adjacency.row_ptr[r + 1]; ++k) {
      s += g.adjacency.val[static_cast<std::size_t>(k)];
    }
    g.degrees[r] = s;
  }
  return g;
}

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    fail(ErrorKind::InvalidParameter, "RBF gamma must be positive");
  }
}

void dedupe(std::vector<std::pair<std::int32_t, std::int32_t>>& pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

}  // namespace

SparseGraph build_eng(const ScaledEvents& coords, double eps, double gamma, NeighborSearch search) {
  if (!(eps >= 0.0)) fail(ErrorKind::InvalidParameter, "eps must be >= 0");
  check_gamma(gamma);
  const std::size_t n = coords.size();
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  if (search == NeighborSearch::KdTree) {
    if (n > 0) {
      const KdIndex index(coords);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::int32_t j : index.radius(i, eps)) {
          if (static_cast<std::size_t>(j) > i) pairs.emplace_back(static_cast<std::int32_t>(i), j);
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (within_radius(squared_distance(coords, i, j), eps)) {
          pairs.emplace_back(static_cast<std::int32_t>(i), static_cast<std::int32_t>(j));
        }
      }
    }
  }
  return graph_from_pairs(n, pairs, coords, gamma);
}

SparseGraph build_knng(const ScaledEvents& coords, std::size_t k, double gamma) {
  check_gamma(gamma);
  const std::size_t n = coords.size();
  if (k < 1 || k >= n) {
    fail(ErrorKind::InvalidParameter,
         "kNNG k = " + std::to_string(k) + " must lie in [1, N-1] with N = " + std::to_string(n));
  }
  const KdIndex index(coords);
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  pairs.reserve(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    for (const Neighbor& nb : index.knn(i, k)) {
      const auto a = static_cast<std::int32_t>(i);
      pairs.emplace_back(std::min(a, nb.index), std::max(a, nb.index));
    }
  }
  dedupe(pairs);
  return graph_from_pairs(n, pairs, coords, gamma);
}

std::vector<std::vector<std::int32_t>> vknng_neighbors(const ScaledEvents& coords) {
  const std::size_t n = coords.size();
  if (n < 2) fail(ErrorKind::InvalidInput, "vkNNG needs at least two events");
  std::vector<std::vector<std::int32_t>> out(n);
  std::vector<std::pair<double, std::int32_t>> row(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    std::size_t m = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dist = std::sqrt(squared_distance(coords, i, j));
      row[m++] = {dist, static_cast<std::int32_t>(j)};
      total += dist;
    }
    const double budget = total / static_cast<double>(n);
    std::sort(row.begin(), row.end());
    double used = 0.0;
    for (const auto& [dist, j] : row) {
      if (used + dist > budget) break;
      used += dist;
      out[i].push_back(j);
    }
  }
  return out;
}

SparseGraph build_vknng(const ScaledEvents& coords, double gamma) {
  check_gamma(gamma);
  const auto lists = vknng_neighbors(coords);
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    const auto a = static_cast<std::int32_t>(i);
    for (std::int32_t j : lists[i]) pairs.emplace_back(std::min(a, j), std::max(a, j));
  }
  dedupe(pairs);
  return graph_from_pairs(coords.size(), pairs, coords, gamma);
}

SparseGraph graph_from_edges(std::size_t n_nodes, const std::vector<WeightedEdge>& edges) {
  std::vector<Triplet> t;
  t.reserve(edges.size() * 2);
  std::vector<std::pair<std::int32_t, std::int32_t>> seen;
  seen.reserve(edges.size());
  for (const WeightedEdge& e : edges) {
    if (e.u == e.v) fail(ErrorKind::InvalidInput, "self loop at node " + std::to_string(e.u));
    if (!(e.weight > 0.0)) fail(ErrorKind::InvalidInput, "edge weights must be positive");
    seen.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
    t.push_back({e.u, e.v, e.weight});
    t.push_back({e.v, e.u, e.weight});
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    fail(ErrorKind::InvalidInput, "duplicate edge in edge list");
  }
  SparseGraph g;
  g.n_nodes = n_nodes;
  g.adjacency = csr_from_triplets(n_nodes, std::move(t));
  g.degrees.assign(n_nodes, 0.0);
  for (std::size_t r = 0; r < n_nodes; ++r) {
    for (std::int64_t k = g.adjacency.row_ptr[r]; k < g.adjacency.row_ptr[r + 1]; ++k) {
      g.degrees[r] += g.adjacency.val[static_cast<std::size_t>(k)];
    }
  }
  return g;
}

SparseGraph induced_subgraph(const SparseGraph& graph, const std::vector<std::int32_t>& keep) {
  std::vector<std::int32_t> new_id(graph.n_nodes, -1);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    new_id[static_cast<std::size_t>(keep[k])] = static_cast<std::int32_t>(k);
  }
  SparseGraph g;
  g.n_nodes = keep.size();
  g.adjacency.n = keep.size();
  g.adjacency.row_ptr.assign(keep.size() + 1, 0);
  g.degrees.assign(keep.size(), 0.0);
  const CsrMatrix& a = graph.adjacency;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto r = static_cast<std::size_t>(keep[k]);
    for (std::int64_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
      const std::int32_t c = new_id[static_cast<std::size_t>(a.col[static_cast<std::size_t>(p)])];
      if (c < 0) continue;
      const double w = a.val[static_cast<std::size_t>(p)];
      g.adjacency.col.push_back(c);
      g.adjacency.val.push_back(w);
      g.degrees[k] += w;
    }
    g.adjacency.row_ptr[k + 1] = static_cast<std::int64_t>(g.adjacency.col.size());
  }
  return g;
}

CsrMatrix laplacian(const SparseGraph& graph) {
  const CsrMatrix& a = graph.adjacency;
  CsrMatrix l;
  l.n = graph.n_nodes;
  l.row_ptr.assign(l.n + 1, 0);
  l.col.reserve(a.nnz() + l.n);
  l.val.reserve(a.nnz() + l.n);
  for (std::size_t r = 0; r < l.n; ++r) {
    bool diag_done = false;
    for (std::int64_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      const auto c = a.col[static_cast<std::size_t>(k)];
      if (!diag_done && static_cast<std::size_t>(c) > r) {
        l.col.push_back(static_cast<std::int32_t>(r));
        l.val.push_back(graph.degrees[r]);
        diag_done = true;
      }
      l.col.push_back(c);
      l.val.push_back(-a.val[static_cast<std::size_t>(k)]);
    }
    if (!diag_done) {
      l.col.push_back(static_cast<std::int32_t>(r));
      l.val.push_back(graph.degrees[r]);
    }
    l.row_ptr[r + 1] = static_cast<std::int64_t>(l.col.size());
  }
  return l;
}

NormalizedLaplacian normalized_laplacian(const SparseGraph& graph) {
  NormalizedLaplacian out;
  for (std::size_t i = 0; i < graph.n_nodes; ++i) {
    (graph.degrees[i] > 0.0 ? out.kept : out.isolated).push_back(static_cast<std::int32_t>(i));
  }
  const SparseGraph sub = induced_subgraph(graph, out.kept);
  CsrMatrix l = laplacian(sub);
  std::vector<double> root(sub.n_nodes);
  for (std::size_t i = 0; i < sub.n_nodes; ++i) root[i] = std::sqrt(sub.degrees[i]);
  for (std::size_t r = 0; r < l.n; ++r) {
    for (std::int64_t k = l.row_ptr[r]; k < l.row_ptr[r + 1]; ++k) {
      const auto c = static_cast<std::size_t>(l.col[static_cast<std::size_t>(k)]);
      double& v = l.val[static_cast<std::size_t>(k)];
      // Two divisions never overflow (|w| <= d) where 1/sqrt(d_r d_c) can;
      // the lower index goes first so (r, c) and (c, r) round identically.
      v = (c == r) ? 1.0 : v / root[std::min(r, c)] / root[std::max(r, c)];
    }
  }
  out.matrix = std::move(l);
  return out;
}

void write_edge_list(const SparseGraph& graph, std::ostream& out) {
  const CsrMatrix& a = graph.adjacency;
  const auto old_precision = out.precision(17);
  for (std::size_t r = 0; r < graph.n_nodes; ++r) {
    for (std::int64_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      const auto c = static_cast<std::size_t>(a.col[static_cast<std::size_t>(k)]);
      if (c > r) out << r << ' ' << c << ' ' << a.val[static_cast<std::size_t>(k)] << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace evgraph
