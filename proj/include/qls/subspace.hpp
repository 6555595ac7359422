// Copyright 2026 The qls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QLS_SUBSPACE_HPP
#define QLS_SUBSPACE_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "qls/tensor.hpp"

namespace qls {

// Sparse matrix row: (column, coefficient) pairs, column-ascending, nonzero.
using SparseRow = std::vector<std::pair<std::size_t, Scalar>>;

// In-place reduction to the (unique) reduced row echelon form: pivot
// coefficient 1, pivot column zero in every other row, rows sorted by pivot
// column, zero rows dropped. Exact arithmetic and canonical scalar forms
// make the result byte-identical across the two kernels; a property test
// pins that down.
void rref_rows_serial(std::vector<SparseRow>& rows);
void rref_rows_parallel(std::vector<SparseRow>& rows);
void rref_rows(std::vector<SparseRow>& rows);  // picks a kernel by size

// Subspace of V^{(x)d}, stored as the reduced echelon basis with columns
// ordered deglex. The representation is canonical: two subspaces are equal
// iff their stored bases are.
class Subspace {
 public:
  Subspace() = default;
  Subspace(int base_dim, int degree, int nvars)
      : base_dim_(base_dim), degree_(degree), nvars_(nvars) {}
  static Subspace span(int base_dim, int degree, int nvars,
                       const std::vector<Tensor>& vectors);
  static Subspace full(int base_dim, int degree, int nvars);

  int base_dim() const { return base_dim_; }
  int degree() const { return degree_; }
  int nvars() const { return nvars_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  std::size_t ambient_dim() const { return power_dim(base_dim_, degree_); }
  const std::vector<Tensor>& basis() const { return basis_; }
  std::vector<MultiIndex> pivots() const;

  bool contains(const Tensor& v) const;
  bool contains(const Subspace& o) const;
  Subspace sum(const Subspace& o) const;
  Subspace intersect(const Subspace& o) const;

  // Annihilator under the standard pairing, in the same coordinates (the
  // dual basis is indexed identically).
  Subspace perp() const;

  // Non-pivot monomials, deglex-ascending; these project to a basis of the
  // quotient by this subspace.
  std::vector<MultiIndex> complement() const;

  // Remainder of v modulo this subspace, supported on complement monomials.
  Tensor reduce(const Tensor& v) const;
  // v = (component in the subspace) + (remainder on complement monomials);
  // returns {complement coordinates, subspace component}.
  std::pair<std::vector<std::pair<MultiIndex, Scalar>>, Tensor> decompose(
      const Tensor& v) const;

  bool operator==(const Subspace&) const = default;

 private:
  int base_dim_ = 0, degree_ = 0, nvars_ = 0;
  std::vector<Tensor> basis_;
};

}  // namespace qls

#endif  // QLS_SUBSPACE_HPP
