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

#include "qls/subspace.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

#include "qls/errors.hpp"

namespace qls {

namespace {

std::size_t leading(const SparseRow& r) { return r.front().first; }

const Scalar* find_col(const SparseRow& r, std::size_t col) {
  auto it = std::lower_bound(
      r.begin(), r.end(), col,
      [](const std::pair<std::size_t, Scalar>& e, std::size_t c) {
        return e.first < c;
      });
  if (it != r.end() && it->first == col) return &it->second;
  return nullptr;
}

// r - c * p, both column-sorted.
SparseRow axpy(const SparseRow& r, const Scalar& c, const SparseRow& p) {
  SparseRow out;
  out.reserve(r.size() + p.size());
  auto a = r.begin();
  auto b = p.begin();
  while (a != r.end() || b != p.end()) {
    if (b == p.end() || (a != r.end() && a->first < b->first)) {
      out.push_back(*a++);
    } else if (a == r.end() || b->first < a->first) {
      out.emplace_back(b->first, -(c * b->second));
      ++b;
    } else {
      Scalar v = a->second - c * b->second;
      if (!v.is_zero()) out.emplace_back(a->first, std::move(v));
      ++a, ++b;
    }
  }
  return out;
}

void eliminate(SparseRow& row, const SparseRow& pivot) {
  const Scalar* c = find_col(row, leading(pivot));
  if (c == nullptr) return;
  Scalar cc = *c;
  row = axpy(row, cc, pivot);
}

void drop_empty(std::vector<SparseRow>& rows, std::size_t from) {
  rows.erase(std::remove_if(rows.begin() + static_cast<std::ptrdiff_t>(from),
                            rows.end(),
                            [](const SparseRow& r) { return r.empty(); }),
             rows.end());
}

// Pick the next pivot among rows[done..]: smallest leading column, first
// such row. Already finished rows keep strictly increasing pivot columns,
// so no final sort is needed.
std::size_t select_pivot(const std::vector<SparseRow>& rows,
                         std::size_t done) {
  std::size_t best = done;
  for (std::size_t i = done + 1; i < rows.size(); ++i)
    if (leading(rows[i]) < leading(rows[best])) best = i;
  return best;
}

void normalize_pivot(SparseRow& p) {
  Scalar inv = p.front().second.inv();
  for (auto& e : p) e.second = e.second * inv;
}

}  // namespace

void rref_rows_serial(std::vector<SparseRow>& rows) {
  drop_empty(rows, 0);
  std::size_t done = 0;
  while (done < rows.size()) {
    std::swap(rows[done], rows[select_pivot(rows, done)]);
    normalize_pivot(rows[done]);
    const SparseRow& p = rows[done];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == done) continue;
      eliminate(rows[i], p);
    }
    ++done;
    drop_empty(rows, done);
  }
}

void rref_rows_parallel(std::vector<SparseRow>& rows) {
  drop_empty(rows, 0);
  std::size_t done = 0;
  while (done < rows.size()) {
    std::swap(rows[done], rows[select_pivot(rows, done)]);
    normalize_pivot(rows[done]);
    const SparseRow& p = rows[done];
    const std::int64_t n = static_cast<std::int64_t>(rows.size());
    const std::int64_t skip = static_cast<std::int64_t>(done);
    // Row updates are independent; exact arithmetic keeps the result
    // identical to the serial kernel.
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      if (i == skip) continue;
      eliminate(rows[static_cast<std::size_t>(i)], p);
    }
    ++done;
    drop_empty(rows, done);
  }
}

void rref_rows(std::vector<SparseRow>& rows) {
#if defined(QLS_HAVE_OPENMP)
  if (rows.size() >= 24) {
    rref_rows_parallel(rows);
    return;
  }
#endif
  rref_rows_serial(rows);
}

Subspace Subspace::span(int base_dim, int degree, int nvars,
                        const std::vector<Tensor>& vectors) {
  std::vector<SparseRow> rows;
  rows.reserve(vectors.size());
  for (const Tensor& v : vectors) {
    if (v.base_dim() != base_dim || v.degree() != degree)
      throw internal_check_error("span over mismatched tensor space");
    if (v.is_zero()) continue;
    SparseRow r;
    r.reserve(v.terms().size());
    for (const auto& [m, c] : v.terms())
      r.emplace_back(mi_rank(m, base_dim), c);
    rows.push_back(std::move(r));
  }
  rref_rows(rows);
  Subspace s(base_dim, degree, nvars);
  s.basis_.reserve(rows.size());
  for (const SparseRow& r : rows) {
    std::vector<std::pair<MultiIndex, Scalar>> terms;
    terms.reserve(r.size());
    for (const auto& [col, c] : r)
      terms.emplace_back(mi_from_rank(col, base_dim, degree), c);
    s.basis_.push_back(
        Tensor::from_terms(base_dim, degree, nvars, std::move(terms)));
  }
  return s;
}

Subspace Subspace::full(int base_dim, int degree, int nvars) {
  Subspace s(base_dim, degree, nvars);
  std::size_t n = power_dim(base_dim, degree);
  s.basis_.reserve(n);
  for (std::size_t r = 0; r < n; ++r)
    s.basis_.push_back(
        Tensor::basis(base_dim, nvars, mi_from_rank(r, base_dim, degree)));
  return s;
}

std::vector<MultiIndex> Subspace::pivots() const {
  std::vector<MultiIndex> out;
  out.reserve(basis_.size());
  for (const Tensor& b : basis_) out.push_back(b.terms().front().first);
  return out;
}

bool Subspace::contains(const Tensor& v) const {
  return reduce(v).is_zero();
}

bool Subspace::contains(const Subspace& o) const {
  for (const Tensor& b : o.basis_)
    if (!contains(b)) return false;
  return true;
}

Subspace Subspace::sum(const Subspace& o) const {
  if (base_dim_ != o.base_dim_ || degree_ != o.degree_)
    throw internal_check_error("sum of mismatched subspaces");
  std::vector<Tensor> all = basis_;
  all.insert(all.end(), o.basis_.begin(), o.basis_.end());
  return span(base_dim_, degree_, nvars_, all);
}

Subspace Subspace::intersect(const Subspace& o) const {
  if (base_dim_ != o.base_dim_ || degree_ != o.degree_)
    throw internal_check_error("intersect of mismatched subspaces");
  // Zassenhaus: reduce [x|x; y|0]; rows with zero left half span the
  // intersection on the right half.
  const std::size_t n = ambient_dim();
  std::vector<SparseRow> rows;
  rows.reserve(basis_.size() + o.basis_.size());
  for (const Tensor& x : basis_) {
    SparseRow r;
    for (const auto& [m, c] : x.terms()) r.emplace_back(mi_rank(m, base_dim_), c);
    std::size_t half = r.size();
    for (std::size_t i = 0; i < half; ++i)
      r.emplace_back(r[i].first + n, r[i].second);
    rows.push_back(std::move(r));
  }
  for (const Tensor& y : o.basis_) {
    SparseRow r;
    for (const auto& [m, c] : y.terms()) r.emplace_back(mi_rank(m, base_dim_), c);
    rows.push_back(std::move(r));
  }
  rref_rows(rows);
  std::vector<Tensor> inter;
  for (const SparseRow& r : rows) {
    if (leading(r) < n) continue;
    std::vector<std::pair<MultiIndex, Scalar>> terms;
    for (const auto& [col, c] : r)
      terms.emplace_back(mi_from_rank(col - n, base_dim_, degree_), c);
    inter.push_back(
        Tensor::from_terms(base_dim_, degree_, nvars_, std::move(terms)));
  }
  return span(base_dim_, degree_, nvars_, inter);
}

Subspace Subspace::perp() const {
  const std::size_t n = ambient_dim();
  std::set<std::size_t> pivot_cols;
  for (const Tensor& b : basis_)
    pivot_cols.insert(mi_rank(b.terms().front().first, base_dim_));
  std::vector<Tensor> gens;
  gens.reserve(n - pivot_cols.size());
  for (std::size_t f = 0; f < n; ++f) {
    if (pivot_cols.count(f)) continue;
    MultiIndex fm = mi_from_rank(f, base_dim_, degree_);
    std::vector<std::pair<MultiIndex, Scalar>> terms;
    terms.emplace_back(fm, Scalar::one(nvars_));
    for (const Tensor& b : basis_) {
      Scalar c = b.coefficient(fm);
      if (!c.is_zero())
        terms.emplace_back(b.terms().front().first, -c);
    }
    gens.push_back(
        Tensor::from_terms(base_dim_, degree_, nvars_, std::move(terms)));
  }
  return span(base_dim_, degree_, nvars_, gens);
}

std::vector<MultiIndex> Subspace::complement() const {
  const std::size_t n = ambient_dim();
  std::set<std::size_t> pivot_cols;
  for (const Tensor& b : basis_)
    pivot_cols.insert(mi_rank(b.terms().front().first, base_dim_));
  std::vector<MultiIndex> out;
  out.reserve(n - pivot_cols.size());
  for (std::size_t r = 0; r < n; ++r)
    if (!pivot_cols.count(r)) out.push_back(mi_from_rank(r, base_dim_, degree_));
  return out;
}

Tensor Subspace::reduce(const Tensor& v) const {
  if (v.base_dim() != base_dim_ || v.degree() != degree_)
    throw internal_check_error("reduce over mismatched tensor space");
  Tensor r = v;
  // Basis rows vanish at each other's pivots, so one pass suffices.
  for (const Tensor& b : basis_) {
    Scalar c = r.coefficient(b.terms().front().first);
    if (!c.is_zero()) r = r - b.scaled(c);
  }
  return r;
}

std::pair<std::vector<std::pair<MultiIndex, Scalar>>, Tensor>
Subspace::decompose(const Tensor& v) const {
  Tensor r = reduce(v);
  return {r.terms(), v - r};
}

}  // namespace qls
