#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "evgraph/event_model.hpp"

namespace evgraph {

struct Neighbor {
  std::int32_t index;
  double sq_dist;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Inclusive radius predicate on the unsquared distance. Shared by the index,
// the graph builders and the brute-force oracles so boundaries agree exactly.
bool within_radius(double sq_dist, double eps) noexcept;

// Exact 3-D kd-tree over a copy of the scaled coordinates. Immutable after
// construction; concurrent queries are safe.
class KdIndex {
 public:
  explicit KdIndex(const ScaledEvents& points, std::size_t leaf_size = 16);

  std::size_t size() const noexcept { return n_; }

  // The k nearest rows to `query_row`, excluding itself, ordered by
  // (squared distance, index). Requires 1 <= k <= N - 1.
  std::vector<Neighbor> knn(std::size_t query_row, std::size_t k) const;

  // All rows j != query_row with |p_j - p_q| <= eps, ascending by index.
  std::vector<std::int32_t> radius(std::size_t query_row, double eps) const;

  // Same as radius() but keeps the squared distances.
  std::vector<Neighbor> radius_with_distances(std::size_t query_row, double eps) const;

 private:
  struct Node {
    double lo[3];
    double hi[3];
    std::uint32_t begin;
    std::uint32_t end;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  double box_sq_dist(const Node& node, const double* q) const noexcept;
  void check_row(std::size_t query_row) const;

  std::size_t n_ = 0;
  std::size_t leaf_size_;
  // Coordinates in tree order (structure of arrays) and the original row ids.
  std::vector<double> xs_, ys_, zs_;
  std::vector<std::int32_t> ids_;
  std::vector<double> rows_;  // original row-major copy, for query lookup
  std::vector<Node> nodes_;
};

}  // namespace evgraph
