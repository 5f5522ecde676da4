#include "evgraph/sparse.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "evgraph/error.hpp"
#include "evgraph/kernels.hpp"

namespace evgraph {

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n || y.size() != n) {
    fail(ErrorKind::InvalidInput, "matrix-vector dimension mismatch: matrix " + std::to_string(n) +
                                      ", x " + std::to_string(x.size()) + ", y " +
                                      std::to_string(y.size()));
  }
  kernels::active().spmv(n, row_ptr.data(), col.data(), val.data(), x.data(), y.data());
}

double CsrMatrix::at(std::size_t i, std::size_t j) const noexcept {
  const auto b = col.begin() + row_ptr[i];
  const auto e = col.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(b, e, static_cast<std::int32_t>(j));
  return (it != e && *it == static_cast<std::int32_t>(j)) ? val[static_cast<std::size_t>(it - col.begin())]
                                                         : 0.0;
}

CsrMatrix csr_from_triplets(std::size_t n, std::vector<Triplet> entries) {
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row < b.row || (a.row == b.row && a.col < b.col);
  });
  CsrMatrix m;
  m.n = n;
  m.row_ptr.assign(n + 1, 0);
  m.col.reserve(entries.size());
  m.val.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size();) {
    const Triplet& t = entries[k];
    if (t.row < 0 || t.col < 0 || static_cast<std::size_t>(t.row) >= n ||
        static_cast<std::size_t>(t.col) >= n) {
      fail(ErrorKind::InvalidInput, "triplet index out of range");
    }
    double v = 0.0;
    std::size_t j = k;
    for (; j < entries.size() && entries[j].row == t.row && entries[j].col == t.col; ++j) {
      v += entries[j].value;
    }
    m.col.push_back(t.col);
    m.val.push_back(v);
    ++m.row_ptr[static_cast<std::size_t>(t.row) + 1];
    k = j;
  }
  std::partial_sum(m.row_ptr.begin(), m.row_ptr.end(), m.row_ptr.begin());
  return m;
}

namespace {

std::int32_t find_root(std::vector<std::int32_t>& parent, std::int32_t v) {
  while (parent[static_cast<std::size_t>(v)] != v) {
    auto& p = parent[static_cast<std::size_t>(v)];
    p = parent[static_cast<std::size_t>(p)];
    v = p;
  }
  return v;
}

}  // namespace

std::vector<std::int32_t> pattern_components(const CsrMatrix& m) {
  std::vector<std::int32_t> parent(m.n);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::int64_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
      const std::int32_t j = m.col[static_cast<std::size_t>(k)];
      if (static_cast<std::size_t>(j) == i || m.val[static_cast<std::size_t>(k)] == 0.0) continue;
      std::int32_t a = find_root(parent, static_cast<std::int32_t>(i));
      std::int32_t b = find_root(parent, j);
      if (a == b) continue;
      // Smaller index becomes the root, so roots are component minima.
      if (b < a) std::swap(a, b);
      parent[static_cast<std::size_t>(b)] = a;
    }
  }
  std::vector<std::int32_t> id(m.n, -1);
  std::vector<std::int32_t> root_id(m.n, -1);
  std::int32_t next = 0;
  for (std::size_t i = 0; i < m.n; ++i) {
    const auto r = static_cast<std::size_t>(find_root(parent, static_cast<std::int32_t>(i)));
    if (root_id[r] < 0) root_id[r] = next++;
    id[i] = root_id[r];
  }
  return id;
}

}  // namespace evgraph
