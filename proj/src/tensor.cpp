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

#include "qls/tensor.hpp"

#include <algorithm>
#include <map>

#include "qls/errors.hpp"

namespace qls {

MultiIndex MultiIndex::concat(const MultiIndex& o) const {
  MultiIndex r = *this;
  r.slots.insert(r.slots.end(), o.slots.begin(), o.slots.end());
  return r;
}

bool deglex_less(const MultiIndex& a, const MultiIndex& b) {
  if (a.slots.size() != b.slots.size())
    return a.slots.size() < b.slots.size();
  return a.slots < b.slots;
}

std::size_t mi_rank(const MultiIndex& m, int base_dim) {
  std::size_t r = 0;
  for (int s : m.slots) r = r * static_cast<std::size_t>(base_dim) +
                             static_cast<std::size_t>(s);
  return r;
}

MultiIndex mi_from_rank(std::size_t rank, int base_dim, int degree) {
  MultiIndex m;
  m.slots.assign(static_cast<std::size_t>(degree), 0);
  for (int s = degree - 1; s >= 0; --s) {
    m.slots[static_cast<std::size_t>(s)] =
        static_cast<int>(rank % static_cast<std::size_t>(base_dim));
    rank /= static_cast<std::size_t>(base_dim);
  }
  return m;
}

std::size_t power_dim(int base_dim, int degree) {
  std::size_t r = 1;
  for (int i = 0; i < degree; ++i) r *= static_cast<std::size_t>(base_dim);
  return r;
}

std::vector<MultiIndex> all_indices(int base_dim, int degree) {
  std::vector<MultiIndex> out;
  std::size_t n = power_dim(base_dim, degree);
  out.reserve(n);
  for (std::size_t r = 0; r < n; ++r)
    out.push_back(mi_from_rank(r, base_dim, degree));
  return out;
}

Tensor Tensor::from_terms(int base_dim, int degree, int nvars,
                          std::vector<std::pair<MultiIndex, Scalar>> terms) {
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& a, const auto& b) {
                     return deglex_less(a.first, b.first);
                   });
  Tensor t(base_dim, degree, nvars);
  for (auto& [m, c] : terms) {
    if (m.degree() != degree)
      throw internal_check_error("tensor term has wrong degree");
    if (!t.terms_.empty() && t.terms_.back().first == m) {
      t.terms_.back().second = t.terms_.back().second + c;
      if (t.terms_.back().second.is_zero()) t.terms_.pop_back();
    } else if (!c.is_zero()) {
      t.terms_.emplace_back(std::move(m), std::move(c));
    }
  }
  return t;
}

Tensor Tensor::basis(int base_dim, int nvars, MultiIndex m) {
  Tensor t(base_dim, m.degree(), nvars);
  t.terms_.emplace_back(std::move(m), Scalar::one(nvars));
  return t;
}

Scalar Tensor::coefficient(const MultiIndex& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const auto& t, const MultiIndex& k) {
                               return deglex_less(t.first, k);
                             });
  if (it != terms_.end() && it->first == m) return it->second;
  return Scalar::zero(nvars_);
}

Tensor Tensor::operator+(const Tensor& o) const {
  Tensor r(base_dim_, degree_, nvars_);
  auto a = terms_.begin(), b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() ||
        (a != terms_.end() && deglex_less(a->first, b->first))) {
      r.terms_.push_back(*a++);
    } else if (a == terms_.end() || deglex_less(b->first, a->first)) {
      r.terms_.push_back(*b++);
    } else {
      Scalar c = a->second + b->second;
      if (!c.is_zero()) r.terms_.emplace_back(a->first, std::move(c));
      ++a, ++b;
    }
  }
  return r;
}

Tensor Tensor::operator-(const Tensor& o) const { return *this + (-o); }

Tensor Tensor::operator-() const {
  Tensor r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Tensor Tensor::scaled(const Scalar& c) const {
  if (c.is_zero()) return Tensor(base_dim_, degree_, nvars_);
  Tensor r = *this;
  for (auto& [m, v] : r.terms_) v = v * c;
  return r;
}

Tensor Tensor::concat(const Tensor& o) const {
  std::vector<std::pair<MultiIndex, Scalar>> terms;
  terms.reserve(terms_.size() * o.terms_.size());
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_)
      terms.emplace_back(ma.concat(mb), ca * cb);
  return from_terms(base_dim_, degree_ + o.degree_, nvars_, std::move(terms));
}

std::vector<Scalar> Tensor::dense() const {
  std::vector<Scalar> v(power_dim(base_dim_, degree_), Scalar::zero(nvars_));
  for (const auto& [m, c] : terms_) v[mi_rank(m, base_dim_)] = c;
  return v;
}

Tensor Tensor::from_dense(int base_dim, int degree, int nvars,
                          const std::vector<Scalar>& v) {
  Tensor t(base_dim, degree, nvars);
  for (std::size_t r = 0; r < v.size(); ++r)
    if (!v[r].is_zero())
      t.terms_.emplace_back(mi_from_rank(r, base_dim, degree), v[r]);
  return t;
}

Scalar pairing(const Tensor& co, const Tensor& v) {
  Scalar s = Scalar::zero(co.nvars());
  auto a = co.terms().begin();
  auto b = v.terms().begin();
  while (a != co.terms().end() && b != v.terms().end()) {
    if (deglex_less(a->first, b->first)) {
      ++a;
    } else if (deglex_less(b->first, a->first)) {
      ++b;
    } else {
      s = s + a->second * b->second;
      ++a, ++b;
    }
  }
  return s;
}

Tensor shuffle_pair(const Tensor& major, const Tensor& minor) {
  if (major.degree() != minor.degree())
    throw internal_check_error("shuffle_pair degree mismatch");
  int d = major.degree();
  int composite = major.base_dim() * minor.base_dim();
  std::vector<std::pair<MultiIndex, Scalar>> terms;
  for (const auto& [ma, ca] : major.terms())
    for (const auto& [mb, cb] : minor.terms()) {
      MultiIndex m;
      m.slots.resize(static_cast<std::size_t>(d));
      for (int s = 0; s < d; ++s)
        m.slots[static_cast<std::size_t>(s)] =
            ma.slots[static_cast<std::size_t>(s)] * minor.base_dim() +
            mb.slots[static_cast<std::size_t>(s)];
      terms.emplace_back(std::move(m), ca * cb);
    }
  return Tensor::from_terms(composite, d, major.nvars(), std::move(terms));
}

std::pair<MultiIndex, MultiIndex> split_pair(const MultiIndex& c,
                                             int minor_dim) {
  MultiIndex hi, lo;
  hi.slots.reserve(c.slots.size());
  lo.slots.reserve(c.slots.size());
  for (int s : c.slots) {
    hi.slots.push_back(s / minor_dim);
    lo.slots.push_back(s % minor_dim);
  }
  return {hi, lo};
}

Tensor interleave(const Tensor& upper, const Tensor& lower) {
  return shuffle_pair(lower, upper);
}

LinearMap::LinearMap(int rows, int cols, int nvars)
    : rows_(rows), cols_(cols), nvars_(nvars) {
  a_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
            Scalar::zero(nvars));
}

LinearMap LinearMap::identity(int n, int nvars) {
  LinearMap m(n, n, nvars);
  for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(nvars);
  return m;
}

LinearMap LinearMap::from_rows(std::vector<std::vector<Scalar>> rows,
                               int nvars) {
  int r = static_cast<int>(rows.size());
  int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  LinearMap m(r, c, nvars);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != c)
      throw internal_check_error("ragged matrix rows");
    for (int j = 0; j < c; ++j)
      m.at(i, j) = std::move(rows[static_cast<std::size_t>(i)]
                                 [static_cast<std::size_t>(j)]);
  }
  return m;
}

std::vector<Scalar> LinearMap::apply(const std::vector<Scalar>& v) const {
  if (static_cast<int>(v.size()) != cols_)
    throw internal_check_error("apply dimension mismatch");
  std::vector<Scalar> out(static_cast<std::size_t>(rows_),
                          Scalar::zero(nvars_));
  for (int i = 0; i < rows_; ++i) {
    Scalar s = Scalar::zero(nvars_);
    for (int j = 0; j < cols_; ++j) {
      const Scalar& a = at(i, j);
      if (!a.is_zero() && !v[static_cast<std::size_t>(j)].is_zero())
        s = s + a * v[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(i)] = std::move(s);
  }
  return out;
}

LinearMap LinearMap::operator*(const LinearMap& o) const {
  if (cols_ != o.rows_) throw internal_check_error("compose shape mismatch");
  LinearMap r(rows_, o.cols_, nvars_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Scalar& a = at(i, k);
      if (a.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j) {
        const Scalar& b = o.at(k, j);
        if (!b.is_zero()) r.at(i, j) = r.at(i, j) + a * b;
      }
    }
  return r;
}

LinearMap LinearMap::operator+(const LinearMap& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw internal_check_error("sum shape mismatch");
  LinearMap r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = r.a_[i] + o.a_[i];
  return r;
}

LinearMap LinearMap::scaled(const Scalar& c) const {
  LinearMap r = *this;
  for (auto& x : r.a_) x = x * c;
  return r;
}

LinearMap LinearMap::kron(const LinearMap& o) const {
  LinearMap r(rows_ * o.rows_, cols_ * o.cols_, nvars_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      const Scalar& a = at(i, j);
      if (a.is_zero()) continue;
      for (int k = 0; k < o.rows_; ++k)
        for (int l = 0; l < o.cols_; ++l) {
          const Scalar& b = o.at(k, l);
          if (!b.is_zero()) r.at(i * o.rows_ + k, j * o.cols_ + l) = a * b;
        }
    }
  return r;
}

LinearMap LinearMap::transpose() const {
  LinearMap r(cols_, rows_, nvars_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

LinearMap LinearMap::inverse() const {
  if (rows_ != cols_) throw precondition_error("inverse of non-square map");
  int n = rows_;
  // Gauss-Jordan on [M | I].
  std::vector<std::vector<Scalar>> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& row = w[static_cast<std::size_t>(i)];
    row.assign(static_cast<std::size_t>(2 * n), Scalar::zero(nvars_));
    for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = at(i, j);
    row[static_cast<std::size_t>(n + i)] = Scalar::one(nvars_);
  }
  for (int col = 0; col < n; ++col) {
    int p = -1;
    for (int i = col; i < n; ++i)
      if (!w[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)]
               .is_zero()) {
        p = i;
        break;
      }
    if (p < 0) throw precondition_error("inverse of singular map");
    std::swap(w[static_cast<std::size_t>(col)], w[static_cast<std::size_t>(p)]);
    auto& pr = w[static_cast<std::size_t>(col)];
    Scalar inv = pr[static_cast<std::size_t>(col)].inv();
    for (auto& x : pr) x = x * inv;
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      auto& ri = w[static_cast<std::size_t>(i)];
      Scalar c = ri[static_cast<std::size_t>(col)];
      if (c.is_zero()) continue;
      for (int j = col; j < 2 * n; ++j)
        ri[static_cast<std::size_t>(j)] =
            ri[static_cast<std::size_t>(j)] -
            c * pr[static_cast<std::size_t>(j)];
    }
  }
  LinearMap r(n, n, nvars_);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r.at(i, j) = w[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + j)];
  return r;
}

bool LinearMap::is_invertible() const {
  if (rows_ != cols_) return false;
  try {
    (void)inverse();
    return true;
  } catch (const precondition_error&) {
    return false;
  }
}

LinearMap LinearMap::power(int e) const {
  if (rows_ != cols_) throw precondition_error("power of non-square map");
  LinearMap base = e < 0 ? inverse() : *this;
  int k = e < 0 ? -e : e;
  LinearMap r = identity(rows_, nvars_);
  for (int i = 0; i < k; ++i) r = r * base;
  return r;
}

Tensor apply_slotwise(const std::vector<LinearMap>& maps, const Tensor& t) {
  if (static_cast<int>(maps.size()) != t.degree())
    throw internal_check_error("apply_slotwise arity mismatch");
  int out_dim = t.degree() == 0 ? t.base_dim() : maps[0].rows();
  for (const auto& f : maps) {
    if (f.cols() != t.base_dim() || f.rows() != out_dim)
      throw internal_check_error("apply_slotwise shape mismatch");
  }
  std::map<std::vector<int>, Scalar> acc;
  for (const auto& [m, c] : t.terms()) {
    std::vector<std::pair<std::vector<int>, Scalar>> partial;
    partial.emplace_back(std::vector<int>{}, c);
    for (int s = 0; s < t.degree(); ++s) {
      const LinearMap& f = maps[static_cast<std::size_t>(s)];
      int j = m.slots[static_cast<std::size_t>(s)];
      std::vector<std::pair<std::vector<int>, Scalar>> next;
      for (int k = 0; k < f.rows(); ++k) {
        const Scalar& a = f.at(k, j);
        if (a.is_zero()) continue;
        for (const auto& [prefix, coeff] : partial) {
          std::vector<int> ext = prefix;
          ext.push_back(k);
          next.emplace_back(std::move(ext), coeff * a);
        }
      }
      partial = std::move(next);
    }
    for (auto& [word, coeff] : partial) {
      auto it = acc.find(word);
      if (it == acc.end())
        acc.emplace(std::move(word), std::move(coeff));
      else
        it->second = it->second + coeff;
    }
  }
  std::vector<std::pair<MultiIndex, Scalar>> terms;
  for (auto& [word, coeff] : acc)
    if (!coeff.is_zero()) terms.emplace_back(MultiIndex{word}, coeff);
  return Tensor::from_terms(out_dim, t.degree(), t.nvars(), std::move(terms));
}

Tensor apply_all_slots(const LinearMap& f, const Tensor& t) {
  return apply_slotwise(
      std::vector<LinearMap>(static_cast<std::size_t>(t.degree()), f), t);
}

}  // namespace qls
