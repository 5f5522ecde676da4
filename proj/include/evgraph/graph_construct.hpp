#pragma once

// Density profile, knee-point radius and neighbourhood graphs over scaled
// events, plus their Laplacians.
//
// Unit convention: the density d_n is a mean of *squared* distances, so the
// knee value is in squared units. The εNG radius is its square root
// (eps_lin), keeping the adjacency test in plain distance units.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "evgraph/event_model.hpp"
#include "evgraph/sparse.hpp"

namespace evgraph {

struct DensityProfile {
  std::vector<double> d;
  std::size_t knn_k = 0;
  std::vector<std::size_t> sorted_desc;  // permutation making d non-increasing
};

DensityProfile local_density(const ScaledEvents& coords, std::size_t knn_k);

struct KneePoint {
  double value = 0.0;        // d at the knee (squared units)
  std::size_t position = 1;  // 1-based position in the non-increasing order
  bool degenerate = false;   // no point lies strictly below the chord
};

// Argmax over n of L(n) - d_n, with L the chord from (1, d_1) to (N, d_N) of
// the non-increasing sequence. Ties resolve to the smallest position.
KneePoint knee_epsilon(const DensityProfile& profile);
KneePoint knee_from_sorted(const std::vector<double>& sorted_desc_values);

// Undirected weighted graph; adjacency has no diagonal and is exactly
// symmetric.
struct SparseGraph {
  std::size_t n_nodes = 0;
  CsrMatrix adjacency;
  std::vector<double> degrees;

  std::size_t edge_count() const noexcept { return adjacency.nnz() / 2; }
};

enum class NeighborSearch { KdTree, BruteForce };

// Edge iff unsquared distance <= eps; weight exp(-gamma * squared distance).
SparseGraph build_eng(const ScaledEvents& coords, double eps, double gamma,
                      NeighborSearch search = NeighborSearch::KdTree);

// k-nearest-neighbour relation symmetrised by union.
SparseGraph build_knng(const ScaledEvents& coords, std::size_t k, double gamma);

// Per node, neighbours admitted in ascending distance while the cumulative
// admitted distance stays within (1/N) of the node's total distance to all
// nodes. Returned lists are before symmetrisation.
std::vector<std::vector<std::int32_t>> vknng_neighbors(const ScaledEvents& coords);
SparseGraph build_vknng(const ScaledEvents& coords, double gamma);

// Graph from an explicit undirected edge list (duplicates and self loops are
// rejected). Used for fixtures and tests.
struct WeightedEdge {
  std::int32_t u;
  std::int32_t v;
  double weight;
};
SparseGraph graph_from_edges(std::size_t n_nodes, const std::vector<WeightedEdge>& edges);

// Subgraph induced by `keep` (ascending original indices), renumbered 0..m-1.
SparseGraph induced_subgraph(const SparseGraph& graph, const std::vector<std::int32_t>& keep);

CsrMatrix laplacian(const SparseGraph& graph);

struct NormalizedLaplacian {
  CsrMatrix matrix;                   // over the nodes in `kept`
  std::vector<std::int32_t> kept;     // original indices with degree > 0
  std::vector<std::int32_t> isolated; // original indices with degree 0
};

NormalizedLaplacian normalized_laplacian(const SparseGraph& graph);

// One line per undirected edge, `i j weight` with i < j, lexicographic.
void write_edge_list(const SparseGraph& graph, std::ostream& out);

}  // namespace evgraph
