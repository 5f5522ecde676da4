#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace evgraph {

// Square matrix in compressed sparse row form. Column indices within a row
// are strictly increasing.
struct CsrMatrix {
  std::size_t n = 0;
  std::vector<std::int64_t> row_ptr{0};
  std::vector<std::int32_t> col;
  std::vector<double> val;

  std::size_t nnz() const noexcept { return col.size(); }

  // y = A x through the active SIMD kernel table.
  void multiply(std::span<const double> x, std::span<double> y) const;

  double at(std::size_t i, std::size_t j) const noexcept;
};

struct Triplet {
  std::int32_t row;
  std::int32_t col;
  double value;
};

// Duplicate (row, col) entries are summed.
CsrMatrix csr_from_triplets(std::size_t n, std::vector<Triplet> entries);

// Union-find labelling of the nonzero pattern (diagonal ignored). Component
// ids are dense and ordered by each component's smallest member.
std::vector<std::int32_t> pattern_components(const CsrMatrix& m);

}  // namespace evgraph
