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

#ifndef QLS_TENSOR_HPP
#define QLS_TENSOR_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qls/scalar.hpp"

namespace qls {

// Word of base indices (0-based internally, printed 1-based); the degree is
// the length. The total order used everywhere is degree-then-lexicographic.
struct MultiIndex {
  std::vector<int> slots;

  static MultiIndex empty() { return MultiIndex{}; }
  static MultiIndex single(int i) { return MultiIndex{{i}}; }
  int degree() const { return static_cast<int>(slots.size()); }
  MultiIndex concat(const MultiIndex& o) const;

  bool operator==(const MultiIndex&) const = default;
};

bool deglex_less(const MultiIndex& a, const MultiIndex& b);
// Rank of a degree-d index among all degree-d indices in deglex order.
std::size_t mi_rank(const MultiIndex& m, int base_dim);
MultiIndex mi_from_rank(std::size_t rank, int base_dim, int degree);
std::size_t power_dim(int base_dim, int degree);
// All degree-d indices, deglex-ascending.
std::vector<MultiIndex> all_indices(int base_dim, int degree);

// Sparse element of V^{(x)d} for a base of dimension base_dim: terms sorted
// deglex-ascending, no zero coefficients. Also used for covector tensors
// (the dual basis carries the same index combinatorics).
class Tensor {
 public:
  Tensor() = default;
  Tensor(int base_dim, int degree, int nvars)
      : base_dim_(base_dim), degree_(degree), nvars_(nvars) {}
  static Tensor from_terms(int base_dim, int degree, int nvars,
                           std::vector<std::pair<MultiIndex, Scalar>> terms);
  static Tensor basis(int base_dim, int nvars, MultiIndex m);

  int base_dim() const { return base_dim_; }
  int degree() const { return degree_; }
  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::vector<std::pair<MultiIndex, Scalar>>& terms() const {
    return terms_;
  }
  Scalar coefficient(const MultiIndex& m) const;

  Tensor operator+(const Tensor& o) const;
  Tensor operator-(const Tensor& o) const;
  Tensor operator-() const;
  Tensor scaled(const Scalar& c) const;
  // Tensor product: degrees add, same base.
  Tensor concat(const Tensor& o) const;

  std::vector<Scalar> dense() const;
  static Tensor from_dense(int base_dim, int degree, int nvars,
                           const std::vector<Scalar>& v);

  bool operator==(const Tensor&) const = default;

 private:
  int base_dim_ = 0, degree_ = 0, nvars_ = 0;
  std::vector<std::pair<MultiIndex, Scalar>> terms_;
};

// Standard pairing <e^I, e_J> = delta_{I,J}, extended bilinearly.
Scalar pairing(const Tensor& co, const Tensor& v);

// Slotwise pairing of two same-degree tensors into one over the product
// base: composite slot index c_t = major_t * minor_dim + minor_t and the
// coefficient of a composite word is major(major word) * minor(minor word).
// This realizes the permutation identification [U (x) W]^{(x)d} with
// U^{(x)d} (x) W^{(x)d}.
Tensor shuffle_pair(const Tensor& major, const Tensor& minor);
// Composite index -> (major word, minor word).
std::pair<MultiIndex, MultiIndex> split_pair(const MultiIndex& c,
                                             int minor_dim);

// Interleaving with the hom-object convention: generators z[i,j] carry the
// lower (target) index i as the major digit, so interleave(upper, lower)
// = shuffle_pair(lower, upper).
Tensor interleave(const Tensor& upper, const Tensor& lower);

class LinearMap {
 public:
  LinearMap() = default;
  LinearMap(int rows, int cols, int nvars);
  static LinearMap identity(int n, int nvars);
  static LinearMap from_rows(std::vector<std::vector<Scalar>> rows, int nvars);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nvars() const { return nvars_; }
  const Scalar& at(int r, int c) const { return a_[r * cols_ + c]; }
  Scalar& at(int r, int c) { return a_[r * cols_ + c]; }

  std::vector<Scalar> apply(const std::vector<Scalar>& v) const;
  LinearMap operator*(const LinearMap& o) const;  // composition
  LinearMap operator+(const LinearMap& o) const;
  LinearMap scaled(const Scalar& c) const;
  LinearMap kron(const LinearMap& o) const;  // this on major digits
  LinearMap transpose() const;
  LinearMap inverse() const;  // throws precondition_error when singular
  bool is_invertible() const;
  LinearMap power(int e) const;  // negative e inverts first

  bool operator==(const LinearMap&) const = default;

 private:
  int rows_ = 0, cols_ = 0, nvars_ = 0;
  std::vector<Scalar> a_;
};

// (f_1 (x) ... (x) f_d)(t); one map per slot, all with source dim = base and
// a common target dimension.
Tensor apply_slotwise(const std::vector<LinearMap>& maps, const Tensor& t);
// All slots through the same map.
Tensor apply_all_slots(const LinearMap& f, const Tensor& t);

}  // namespace qls

#endif  // QLS_TENSOR_HPP
