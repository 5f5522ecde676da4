#pragma once

// Real/noise labelling from eigenvector support.
//
// A node is real when it carries non-negligible mass in an eigenvector of a
// small non-zero eigenvalue: single mode uses the Fiedler vector of the
// combinatorial Laplacian, multi mode every normalised-Laplacian pair with
// eigenvalue in (0, eig_cutoff). Thresholds are relative to the vector's
// largest magnitude, so results do not depend on vector scaling or N.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "evgraph/graph_construct.hpp"
#include "evgraph/spectral.hpp"

namespace evgraph {

enum class DetectionMode { Single, Multi };

struct DetectionConfig {
  DetectionMode mode = DetectionMode::Multi;
  double support_threshold_rel = 1e-3;
  double eig_cutoff = 1.0;
  std::size_t num_eigvecs = 20;
  // Eigenvalues at or below this are treated as zero (component indicators).
  double zero_floor = 1e-8;

  void validate() const;
};

// y[i] = 1 real, 0 noise.
using LabelVector = std::vector<std::uint8_t>;

struct Detection {
  LabelVector labels;
  bool degenerate = false;  // nothing to threshold (all-zero vector, no pairs)
};

// `fiedler.vector` is indexed over the non-isolated nodes in ascending order.
Detection detect_single(const EigenPair& fiedler, std::size_t n_total,
                        const std::vector<std::int32_t>& isolated, const DetectionConfig& cfg);

Detection detect_multi(const std::vector<EigenPair>& pairs, std::size_t n_total,
                       const std::vector<std::int32_t>& isolated, const DetectionConfig& cfg);

// Component id per node, ordered by smallest member.
std::vector<std::int32_t> connected_components(const SparseGraph& graph);

// 1 iff the node's component has at least `min_component_size` nodes.
LabelVector oracle_labels(const SparseGraph& graph, std::size_t min_component_size);

}  // namespace evgraph
