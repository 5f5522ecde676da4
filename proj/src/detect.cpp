#include "evgraph/detect.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evgraph/error.hpp"

namespace evgraph {

void DetectionConfig::validate() const {
  if (!(support_threshold_rel > 0.0 && support_threshold_rel < 1.0)) {
    fail(ErrorKind::InvalidParameter, "support threshold must lie in (0, 1)");
  }
  if (!(eig_cutoff > 0.0 && eig_cutoff <= 2.0)) {
    fail(ErrorKind::InvalidParameter, "eigenvalue cutoff must lie in (0, 2]");
  }
  if (num_eigvecs < 1) fail(ErrorKind::InvalidParameter, "num_eigvecs must be >= 1");
}

namespace {

// Original indices of the non-isolated nodes, ascending.
std::vector<std::int32_t> support_nodes(std::size_t n_total,
                                        const std::vector<std::int32_t>& isolated) {
  std::vector<std::uint8_t> iso(n_total, 0);
  for (std::int32_t i : isolated) {
    if (i < 0 || static_cast<std::size_t>(i) >= n_total) {
      fail(ErrorKind::InvalidInput, "isolated index out of range");
    }
    iso[static_cast<std::size_t>(i)] = 1;
  }
  std::vector<std::int32_t> nodes;
  nodes.reserve(n_total - isolated.size());
  for (std::size_t i = 0; i < n_total; ++i) {
    if (!iso[i]) nodes.push_back(static_cast<std::int32_t>(i));
  }
  return nodes;
}

// Marks nodes whose magnitude reaches the relative threshold; false if the
// vector is identically zero.
bool mark_support(const std::vector<double>& v, const std::vector<std::int32_t>& nodes,
                  double rel, LabelVector& y) {
  if (v.size() != nodes.size()) {
    fail(ErrorKind::InvalidInput, "eigenvector length " + std::to_string(v.size()) +
                                      " does not match " + std::to_string(nodes.size()) +
                                      " non-isolated nodes");
  }
  double vmax = 0.0;
  for (double a : v) vmax = std::max(vmax, std::abs(a));
  if (!(vmax > 0.0)) return false;
  const double thr = rel * vmax;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= thr) y[static_cast<std::size_t>(nodes[i])] = 1;
  }
  return true;
}

}  // namespace

Detection detect_single(const EigenPair& fiedler, std::size_t n_total,
                        const std::vector<std::int32_t>& isolated, const DetectionConfig& cfg) {
  cfg.validate();
  Detection out;
  out.labels.assign(n_total, 0);
  const auto nodes = support_nodes(n_total, isolated);
  if (nodes.empty()) {
    out.degenerate = true;
    return out;
  }
  out.degenerate = !mark_support(fiedler.vector, nodes, cfg.support_threshold_rel, out.labels);
  return out;
}

Detection detect_multi(const std::vector<EigenPair>& pairs, std::size_t n_total,
                       const std::vector<std::int32_t>& isolated, const DetectionConfig& cfg) {
  cfg.validate();
  Detection out;
  out.labels.assign(n_total, 0);
  const auto nodes = support_nodes(n_total, isolated);
  if (pairs.empty() || nodes.empty()) {
    out.degenerate = true;
    return out;
  }
  for (const EigenPair& p : pairs) {
    if (p.value > cfg.zero_floor && p.value < cfg.eig_cutoff) {
      mark_support(p.vector, nodes, cfg.support_threshold_rel, out.labels);
    }
  }
  return out;
}

std::vector<std::int32_t> connected_components(const SparseGraph& graph) {
  return pattern_components(graph.adjacency);
}

LabelVector oracle_labels(const SparseGraph& graph, std::size_t min_component_size) {
  if (min_component_size < 1) fail(ErrorKind::InvalidParameter, "min_component_size must be >= 1");
  const auto comp = connected_components(graph);
  std::vector<std::size_t> size(graph.n_nodes, 0);
  for (std::int32_t c : comp) ++size[static_cast<std::size_t>(c)];
  LabelVector y(graph.n_nodes, 0);
  for (std::size_t i = 0; i < graph.n_nodes; ++i) {
    y[i] = size[static_cast<std::size_t>(comp[i])] >= min_component_size ? 1 : 0;
  }
  return y;
}

}  // namespace evgraph
