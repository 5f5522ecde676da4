#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "evgraph/error.hpp"
#include "evgraph/graph_construct.hpp"
#include "support/oracles.hpp"

using namespace evgraph;

namespace {

ScaledEvents line(std::initializer_list<double> xs) {
  std::vector<std::array<double, 3>> p;
  for (double x : xs) p.push_back({x, 0, 0});
  return ScaledEvents::from_points(p);
}

Eigen::MatrixXd dense(const CsrMatrix& m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m.n, m.n);
  for (std::size_t r = 0; r < m.n; ++r)
    for (auto k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) d(r, m.col[k]) += m.val[k];
  return d;
}

}  // namespace

TEST_CASE("local density is the mean squared kNN distance") {
  CHECK(local_density(line({0, 1}), 1).d == std::vector<double>{1, 1});
  CHECK(local_density(line({0, 1, 3}), 1).d == std::vector<double>{1, 1, 4});
  CHECK(local_density(line({0, 1, 3}), 2).d == std::vector<double>{5, 2.5, 6.5});
  const auto prof = local_density(line({0, 1, 3}), 2);
  CHECK(prof.sorted_desc == std::vector<std::size_t>{2, 0, 1});
  CHECK_THROWS_AS(local_density(line({0}), 1), Error);
  CHECK_THROWS_AS(local_density(line({0, 1, 3}), 3), Error);
}

TEST_CASE("knee of a worked profile, a line and the two-point case") {
  const KneePoint k = knee_from_sorted({10, 9, 1, 0.9, 0.8});
  CHECK(k.position == 3);
  CHECK(k.value == 1.0);
  CHECK_FALSE(k.degenerate);

  const KneePoint lin = knee_from_sorted({4, 3, 2, 1});
  CHECK(lin.position == 1);
  CHECK(lin.value == 4.0);
  CHECK(lin.degenerate);

  const KneePoint flat = knee_from_sorted({2, 2, 2});
  CHECK(flat.value == 2.0);
  CHECK(flat.degenerate);

  const KneePoint two = knee_from_sorted({5, 1});
  CHECK(two.position == 1);
  CHECK(two.value == 5.0);
}

TEST_CASE("knee agrees with the brute-force argmax on random profiles with ties") {
  std::mt19937_64 g(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 60)(g);
    std::vector<double> d(n);
    // Small integer alphabet: equal gaps are common, exercising tie-breaks.
    for (double& v : d) v = std::uniform_int_distribution<int>(0, 6)(g);
    std::sort(d.rbegin(), d.rend());
    const std::size_t want = oracle::knee_position(d);
    const KneePoint got = knee_from_sorted(d);
    CHECK(got.position == want);
    CHECK(got.value == d[want - 1]);
  }
}

TEST_CASE("epsilon graph: closed-form weight, empty graph, brute-force edge set") {
  const SparseGraph two = build_eng(line({0, 1}), 1.0, 0.5);
  CHECK(two.edge_count() == 1);
  CHECK(two.adjacency.at(0, 1) == doctest::Approx(std::exp(-0.5)));

  const SparseGraph none = build_eng(line({0, 5, 10}), 1.0, 1.0);
  CHECK(none.edge_count() == 0);
  CHECK(none.degrees == std::vector<double>{0, 0, 0});

  const ScaledEvents pts = oracle::random_cloud(200, 8);
  for (double eps : {0.5, 1.5, 3.0}) {
    const SparseGraph kd = build_eng(pts, eps, 0.7);
    const SparseGraph bf = build_eng(pts, eps, 0.7, NeighborSearch::BruteForce);
    CHECK(oracle::edges_of(kd) == oracle::eng_edges(pts, eps));
    CHECK(oracle::edges_of(bf) == oracle::eng_edges(pts, eps));
    CHECK(kd.adjacency.val == bf.adjacency.val);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (auto k = kd.adjacency.row_ptr[i]; k < kd.adjacency.row_ptr[i + 1]; ++k) {
        const int j = kd.adjacency.col[k];
        CHECK(kd.adjacency.val[k] == std::exp(-0.7 * oracle::sq(pts, i, j)));
        CHECK(kd.adjacency.at(j, i) == kd.adjacency.val[k]);
      }
    }
  }
  CHECK_THROWS_AS(build_eng(pts, 1.0, 0.0), Error);
  CHECK_THROWS_AS(build_eng(pts, -1.0, 1.0), Error);
}

TEST_CASE("kNN graph: union symmetrisation and saturation") {
  CHECK(oracle::edges_of(build_knng(line({0, 1, 3}), 1, 1.0)) ==
        oracle::EdgeSet{{0, 1}, {1, 2}});
  const ScaledEvents pts = oracle::random_cloud(30, 2);
  CHECK(build_knng(pts, 29, 1.0).edge_count() == 30 * 29 / 2);
  for (std::size_t k : {1, 3, 10}) {
    const ScaledEvents cloud = oracle::random_cloud(250, 10 + k);
    CHECK(oracle::edges_of(build_knng(cloud, k, 0.3)) == oracle::knng_edges(cloud, k));
  }
}

TEST_CASE("varied-k graph: greedy lists are feasible, maximal and match brute force") {
  for (std::uint64_t seed : {4, 5, 6}) {
    const ScaledEvents pts = oracle::random_cloud(250, seed);
    const auto lists = vknng_neighbors(pts);
    const auto want = oracle::vknng_lists(pts);
    REQUIRE(lists.size() == want.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(std::vector<int>(lists[i].begin(), lists[i].end()) == want[i]);
    }
    CHECK(oracle::edges_of(build_vknng(pts, 1.0)) == oracle::union_edges(want));
  }
}

TEST_CASE("varied-k: isolated node admits nothing, dense pair admits at least as much") {
  // Equidistant line with one extra point squeezed next to the first.
  const ScaledEvents pts = line({0, 0.1, 10, 20, 30});
  const auto lists = vknng_neighbors(pts);
  CHECK(lists[4].size() <= lists[0].size());
  CHECK(lists[0].size() >= 1);
  const ScaledEvents far = line({0, 0.1, 0.2, 100});
  CHECK(vknng_neighbors(far)[3].empty());
}

TEST_CASE("Laplacian: triangle, empty graph and zero row sums") {
  oracle::Edges tri;
  oracle::add_complete(tri, 0, 3);
  const CsrMatrix l = laplacian(graph_from_edges(3, tri));
  for (int i = 0; i < 3; ++i) {
    CHECK(l.at(i, i) == 2.0);
    for (int j = 0; j < 3; ++j) {
      if (i != j) CHECK(l.at(i, j) == -1.0);
    }
  }
  const CsrMatrix zero = laplacian(graph_from_edges(4, {}));
  CHECK(zero.n == 4);
  for (double v : zero.val) CHECK(v == 0.0);

  std::mt19937_64 g(1);
  const auto edges = oracle::random_connected(80, 0.1, g);
  const CsrMatrix lr = laplacian(graph_from_edges(80, edges));
  std::vector<double> ones(80, 1.0), y(80);
  lr.multiply(ones, y);
  for (double v : y) CHECK(std::abs(v) < 1e-12);
  CHECK((dense(lr) - oracle::dense_laplacian(80, edges)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("normalized Laplacian: K_2, K_3 spectra and isolated bookkeeping") {
  oracle::Edges k2{{0, 1, 1.0}};
  auto ev = oracle::eigenvalues(dense(normalized_laplacian(graph_from_edges(2, k2)).matrix));
  CHECK(ev(0) == doctest::Approx(0.0));
  CHECK(ev(1) == doctest::Approx(2.0));

  oracle::Edges k3;
  oracle::add_complete(k3, 1, 3);  // node 0 stays isolated
  const NormalizedLaplacian nl = normalized_laplacian(graph_from_edges(4, k3));
  CHECK(nl.isolated == std::vector<std::int32_t>{0});
  CHECK(nl.kept == std::vector<std::int32_t>{1, 2, 3});
  CHECK(nl.matrix.n == 3);
  ev = oracle::eigenvalues(dense(nl.matrix));
  CHECK(std::abs(ev(0)) < 1e-12);
  CHECK(ev(1) == doctest::Approx(1.5));
  CHECK(ev(2) == doctest::Approx(1.5));
  const Eigen::MatrixXd d = dense(nl.matrix);
  CHECK(d == d.transpose());
}

TEST_CASE("edge list export, subgraphs and malformed edge lists") {
  oracle::Edges e{{0, 2, 0.5}, {1, 2, 0.25}};
  const SparseGraph g = graph_from_edges(3, e);
  std::ostringstream out;
  write_edge_list(g, out);
  CHECK(out.str() == "0 2 0.5\n1 2 0.25\n");

  const SparseGraph sub = induced_subgraph(g, {1, 2});
  CHECK(sub.n_nodes == 2);
  CHECK(sub.adjacency.at(0, 1) == 0.25);
  CHECK(sub.degrees == std::vector<double>{0.25, 0.25});

  CHECK_THROWS_AS(graph_from_edges(3, {{1, 1, 1.0}}), Error);
  CHECK_THROWS_AS(graph_from_edges(3, {{0, 1, 1.0}, {1, 0, 1.0}}), Error);
  CHECK_THROWS_AS(graph_from_edges(3, {{0, 1, 0.0}}), Error);
}
