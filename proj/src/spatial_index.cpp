#include "evgraph/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "evgraph/error.hpp"
#include "evgraph/kernels.hpp"

namespace evgraph {

bool within_radius(double sq_dist, double eps) noexcept { return std::sqrt(sq_dist) <= eps; }

namespace {

bool neighbor_less(const Neighbor& a, const Neighbor& b) noexcept {
  return a.sq_dist < b.sq_dist || (a.sq_dist == b.sq_dist && a.index < b.index);
}

}  // namespace

KdIndex::KdIndex(const ScaledEvents& points, std::size_t leaf_size)
    : n_(points.size()), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  if (n_ > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    fail(ErrorKind::InvalidInput, "too many points for the spatial index");
  }
  rows_.assign(points.coords().begin(), points.coords().end());
  ids_.resize(n_);
  std::iota(ids_.begin(), ids_.end(), 0);
  if (n_ > 0) {
    nodes_.reserve(2 * (n_ / leaf_size_ + 1));
    build(0, static_cast<std::uint32_t>(n_));
  }
  xs_.resize(n_);
  ys_.resize(n_);
  zs_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t r = static_cast<std::size_t>(ids_[i]);
    xs_[i] = rows_[3 * r];
    ys_[i] = rows_[3 * r + 1];
    zs_[i] = rows_[3 * r + 2];
  }
}

std::int32_t KdIndex::build(std::uint32_t begin, std::uint32_t end) {
  Node node{};
  node.begin = begin;
  node.end = end;
  for (int c = 0; c < 3; ++c) {
    node.lo[c] = std::numeric_limits<double>::infinity();
    node.hi[c] = -std::numeric_limits<double>::infinity();
  }
  for (std::uint32_t i = begin; i < end; ++i) {
    const double* p = &rows_[3 * static_cast<std::size_t>(ids_[i])];
    for (int c = 0; c < 3; ++c) {
      node.lo[c] = std::min(node.lo[c], p[c]);
      node.hi[c] = std::max(node.hi[c], p[c]);
    }
  }
  const auto self = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= leaf_size_) return self;

  int dim = 0;
  for (int c = 1; c < 3; ++c) {
    if (node.hi[c] - node.lo[c] > node.hi[dim] - node.lo[dim]) dim = c;
  }
  if (node.hi[dim] == node.lo[dim]) return self;  // all points coincide

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(ids_.begin() + begin, ids_.begin() + mid, ids_.begin() + end,
                   [&](std::int32_t a, std::int32_t b) {
                     const double va = rows_[3 * static_cast<std::size_t>(a) + dim];
                     const double vb = rows_[3 * static_cast<std::size_t>(b) + dim];
                     return va < vb || (va == vb && a < b);
                   });
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  nodes_[static_cast<std::size_t>(self)].left = left;
  nodes_[static_cast<std::size_t>(self)].right = right;
  return self;
}

double KdIndex::box_sq_dist(const Node& node, const double* q) const noexcept {
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    double d = 0.0;
    if (q[c] < node.lo[c]) {
      d = node.lo[c] - q[c];
    } else if (q[c] > node.hi[c]) {
      d = q[c] - node.hi[c];
    }
    s += d * d;
  }
  return s;
}

void KdIndex::check_row(std::size_t query_row) const {
  if (query_row >= n_) {
    fail(ErrorKind::InvalidParameter,
         "query row " + std::to_string(query_row) + " out of range for " + std::to_string(n_) +
             " points");
  }
}

std::vector<Neighbor> KdIndex::knn(std::size_t query_row, std::size_t k) const {
  check_row(query_row);
  if (k < 1 || k >= n_) {
    fail(ErrorKind::InvalidParameter,
         "k = " + std::to_string(k) + " must lie in [1, N-1] with N = " + std::to_string(n_));
  }
  const double* q = &rows_[3 * query_row];
  const auto& kern = kernels::active();
  std::vector<Neighbor> heap;  // max-heap under neighbor_less
  heap.reserve(k + 1);
  std::vector<double> dist(leaf_size_);

  // Explicit stack of (node, lower bound).
  std::vector<std::pair<std::int32_t, double>> stack;
  stack.emplace_back(0, box_sq_dist(nodes_[0], q));
  while (!stack.empty()) {
    const auto [ni, lb] = stack.back();
    stack.pop_back();
    // Equal bounds cannot be pruned: a tie with a smaller index still wins.
    if (heap.size() == k && lb > heap.front().sq_dist) continue;
    const Node& node = nodes_[static_cast<std::size_t>(ni)];
    if (node.left < 0) {
      const std::size_t m = node.end - node.begin;
      if (dist.size() < m) dist.resize(m);
      kern.sq_dist3(q, xs_.data() + node.begin, ys_.data() + node.begin, zs_.data() + node.begin,
                    dist.data(), m);
      for (std::size_t i = 0; i < m; ++i) {
        const std::int32_t id = ids_[node.begin + i];
        if (static_cast<std::size_t>(id) == query_row) continue;
        const Neighbor cand{id, dist[i]};
        if (heap.size() < k) {
          heap.push_back(cand);
          std::push_heap(heap.begin(), heap.end(), neighbor_less);
        } else if (neighbor_less(cand, heap.front())) {
          std::pop_heap(heap.begin(), heap.end(), neighbor_less);
          heap.back() = cand;
          std::push_heap(heap.begin(), heap.end(), neighbor_less);
        }
      }
      continue;
    }
    const Node& l = nodes_[static_cast<std::size_t>(node.left)];
    const Node& r = nodes_[static_cast<std::size_t>(node.right)];
    const double lb_l = box_sq_dist(l, q);
    const double lb_r = box_sq_dist(r, q);
    // Push the farther child first so the nearer one is explored next.
    if (lb_l <= lb_r) {
      stack.emplace_back(node.right, lb_r);
      stack.emplace_back(node.left, lb_l);
    } else {
      stack.emplace_back(node.left, lb_l);
      stack.emplace_back(node.right, lb_r);
    }
  }
  std::sort_heap(heap.begin(), heap.end(), neighbor_less);
  return heap;
}

std::vector<Neighbor> KdIndex::radius_with_distances(std::size_t query_row, double eps) const {
  check_row(query_row);
  std::vector<Neighbor> out;
  if (!(eps >= 0.0)) fail(ErrorKind::InvalidParameter, "radius must be >= 0");
  const double* q = &rows_[3 * query_row];
  const auto& kern = kernels::active();
  // Loose pruning bound; the exact test is within_radius().
  const double prune = eps * eps * (1.0 + 1e-12) + std::numeric_limits<double>::min();
  std::vector<double> dist(leaf_size_);
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const std::int32_t ni = stack.back();
    stack.pop_back();
    const Node& node = nodes_[static_cast<std::size_t>(ni)];
    if (box_sq_dist(node, q) > prune) continue;
    if (node.left < 0) {
      const std::size_t m = node.end - node.begin;
      if (dist.size() < m) dist.resize(m);
      kern.sq_dist3(q, xs_.data() + node.begin, ys_.data() + node.begin, zs_.data() + node.begin,
                    dist.data(), m);
      for (std::size_t i = 0; i < m; ++i) {
        const std::int32_t id = ids_[node.begin + i];
        if (static_cast<std::size_t>(id) != query_row && within_radius(dist[i], eps)) {
          out.push_back({id, dist[i]});
        }
      }
      continue;
    }
    stack.push_back(node.left);
    stack.push_back(node.right);
  }
  std::sort(out.begin(), out.end(),
            [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
  return out;
}

std::vector<std::int32_t> KdIndex::radius(std::size_t query_row, double eps) const {
  const auto hits = radius_with_distances(query_row, eps);
  std::vector<std::int32_t> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(h.index);
  return out;
}

}  // namespace evgraph
