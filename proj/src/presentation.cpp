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

#include "qls/presentation.hpp"

#include <algorithm>

#include "qls/errors.hpp"

namespace qls {

FreeElement free_normalize(FreeElement e) {
  std::stable_sort(e.begin(), e.end(), [](const auto& a, const auto& b) {
    return deglex_less(a.first, b.first);
  });
  FreeElement out;
  for (auto& [m, c] : e) {
    if (!out.empty() && out.back().first == m) {
      out.back().second = out.back().second + c;
      if (out.back().second.is_zero()) out.pop_back();
    } else if (!c.is_zero()) {
      out.emplace_back(std::move(m), std::move(c));
    }
  }
  return out;
}

bool free_is_homogeneous(const FreeElement& e, int* degree_out) {
  if (e.empty()) {
    if (degree_out) *degree_out = 0;
    return true;
  }
  int d = e.front().first.degree();
  for (const auto& [m, c] : e)
    if (m.degree() != d) return false;
  if (degree_out) *degree_out = d;
  return true;
}

Presentation Presentation::make(FieldSpec field, std::string name,
                                std::vector<std::string> gens,
                                std::vector<FreeElement> relations, int cap) {
  Presentation p;
  p.field_ = std::move(field);
  p.name_ = std::move(name);
  p.gens_ = std::move(gens);
  p.cap_ = cap;
  if (cap < 0) throw precondition_error("negative degree cap");
  for (std::size_t i = 0; i < p.gens_.size(); ++i)
    for (std::size_t j = i + 1; j < p.gens_.size(); ++j)
      if (p.gens_[i] == p.gens_[j])
        throw precondition_error("duplicate generator '" + p.gens_[i] + "'");
  int n = static_cast<int>(p.gens_.size());
  for (FreeElement r : relations) {
    r = free_normalize(std::move(r));
    if (r.empty()) continue;
    for (const auto& [m, c] : r)
      for (int s : m.slots)
        if (s < 0 || s >= n)
          throw precondition_error("relation uses unknown generator index");
    int d = 0;
    if (!free_is_homogeneous(r, &d)) {
      p.conic_ = false;
    } else if (d < 2) {
      p.conic_ = false;  // degree 0/1 relations leave the conic setting
    }
    p.given_.push_back(std::move(r));
  }
  if (p.conic_) {
    for (const FreeElement& r : p.given_) {
      int d = r.front().first.degree();
      if (d > cap)
        throw precondition_error("relation degree exceeds the cap");
      p.graded_rels_[d].push_back(
          Tensor::from_terms(n, d, p.field_.nvars(), r));
    }
  }
  p.given_cache_.assign(static_cast<std::size_t>(cap) + 1, std::nullopt);
  p.ideal_cache_.assign(static_cast<std::size_t>(cap) + 1, std::nullopt);
  return p;
}

Presentation Presentation::from_graded_relations(
    FieldSpec field, std::string name, std::vector<std::string> gens,
    const std::map<int, std::vector<Tensor>>& relations, int cap) {
  std::vector<FreeElement> rels;
  for (const auto& [d, ts] : relations)
    for (const Tensor& t : ts) {
      if (t.degree() != d)
        throw internal_check_error("graded relation filed under wrong degree");
      if (!t.is_zero()) rels.push_back(t.terms());
    }
  return make(std::move(field), std::move(name), std::move(gens),
              std::move(rels), cap);
}

Presentation Presentation::unit_trivial(FieldSpec field, int cap) {
  Presentation p = make(std::move(field), "1", {}, {}, cap);
  p.degenerate_ = true;
  return p;
}

Presentation Presentation::unit_free_line(FieldSpec field, int cap) {
  return make(std::move(field), "K", {"e"}, {}, cap);
}

Presentation Presentation::unit_truncated_line(FieldSpec field, int m,
                                               int cap) {
  if (m < 2) throw precondition_error("truncated line needs exponent >= 2");
  FieldSpec f = std::move(field);
  std::vector<FreeElement> rels;
  if (m <= cap) {
    MultiIndex w;
    w.slots.assign(static_cast<std::size_t>(m), 0);
    rels.push_back({{w, Scalar::one(f.nvars())}});
  }
  return make(std::move(f), "U" + std::to_string(m), {"e"}, std::move(rels),
              cap);
}

void Presentation::require_conic(const char* what) const {
  if (!conic_)
    throw precondition_error(std::string(what) +
                             " requires a graded presentation");
}

const Subspace& Presentation::given_component(int d) const {
  require_conic("given_component");
  if (d < 0 || d > cap_) throw precondition_error("degree outside the cap");
  auto& slot = given_cache_[static_cast<std::size_t>(d)];
  if (!slot) {
    auto it = graded_rels_.find(d);
    std::vector<Tensor> gens_d =
        it == graded_rels_.end() ? std::vector<Tensor>{} : it->second;
    slot = Subspace::span(dim(), d, field_.nvars(), gens_d);
  }
  return *slot;
}

const Subspace& Presentation::ideal_component(int d) const {
  require_conic("ideal_component");
  if (d < 0 || d > cap_) throw precondition_error("degree outside the cap");
  auto& slot = ideal_cache_[static_cast<std::size_t>(d)];
  if (!slot) {
    if (d < 2) {
      slot = Subspace(dim(), d, field_.nvars());
    } else {
      std::vector<Tensor> vs;
      const Subspace& prev = ideal_component(d - 1);
      for (const Tensor& b : prev.basis())
        for (int i = 0; i < dim(); ++i) {
          Tensor e = Tensor::basis(dim(), field_.nvars(), MultiIndex::single(i));
          vs.push_back(e.concat(b));
          vs.push_back(b.concat(e));
        }
      for (const Tensor& g : given_component(d).basis()) vs.push_back(g);
      slot = Subspace::span(dim(), d, field_.nvars(), vs);
    }
  }
  return *slot;
}

int Presentation::hilbert(int d) const {
  require_conic("hilbert");
  if (d == 0) return 1;
  return static_cast<int>(power_dim(dim(), d)) - ideal_component(d).dim();
}

std::vector<MultiIndex> Presentation::normal_words(int d) const {
  return ideal_component(d).complement();
}

Tensor Presentation::normal_form(const Tensor& v) const {
  return ideal_component(v.degree()).reduce(v);
}

Tensor Presentation::quotient_product(const Tensor& a, const Tensor& b) const {
  return normal_form(a.concat(b));
}

std::optional<MorphismWitness> morphism_failure(const Presentation& src,
                                                const Presentation& dst,
                                                const LinearMap& f,
                                                int up_to) {
  if (f.cols() != src.dim() || f.rows() != dst.dim())
    throw precondition_error("morphism matrix has wrong shape");
  for (int d = 2; d <= up_to; ++d) {
    const Subspace& is = src.ideal_component(d);
    const Subspace& id = dst.ideal_component(d);
    for (const Tensor& b : is.basis()) {
      Tensor img = apply_all_slots(f, b);
      if (!id.contains(img)) return MorphismWitness{d, b, std::move(img)};
    }
  }
  return std::nullopt;
}

bool is_stable_under(const Presentation& a, const LinearMap& sigma,
                     int up_to) {
  return !morphism_failure(a, a, sigma, up_to).has_value();
}

std::optional<std::vector<LinearMap>> sigma_stability(const Presentation& a,
                                                      const LinearMap& sigma,
                                                      int up_to) {
  if (sigma.rows() != a.dim() || sigma.cols() != a.dim())
    throw precondition_error("automorphism matrix has wrong shape");
  if (!sigma.is_invertible())
    throw precondition_error("automorphism matrix is singular");
  const int nv = a.field().nvars();
  std::vector<LinearMap> out;
  for (int d = 2; d <= up_to; ++d) {
    const Subspace& comp = a.ideal_component(d);
    const auto& basis = comp.basis();
    const auto& pivots = comp.pivots();
    const int k = comp.dim();
    // Invertibility turns componentwise containment into equality.
    std::vector<std::vector<Scalar>> c(k, std::vector<Scalar>(k, Scalar::zero(nv)));
    for (int j = 0; j < k; ++j) {
      Tensor img = apply_all_slots(sigma, basis[j]);
      if (!comp.contains(img)) return std::nullopt;
      // Echelon basis: coordinates are the coefficients at the pivot words.
      for (int i = 0; i < k; ++i) c[i][j] = img.coefficient(pivots[i]);
    }
    out.push_back(LinearMap::from_rows(std::move(c), nv));
  }
  return out;
}

bool presentations_equal(const Presentation& a, const Presentation& b,
                         int up_to) {
  if (a.dim() != b.dim()) return false;
  for (int d = 2; d <= up_to; ++d)
    if (!(a.ideal_component(d) == b.ideal_component(d))) return false;
  return true;
}

bool presentations_equal(const Presentation& a, const Presentation& b,
                         const LinearMap& ident, int up_to) {
  if (ident.cols() != a.dim() || ident.rows() != b.dim())
    throw precondition_error("identification matrix has wrong shape");
  if (a.dim() != b.dim() || !ident.is_invertible())
    throw precondition_error("identification matrix is singular");
  const int nv = a.field().nvars();
  for (int d = 2; d <= up_to; ++d) {
    std::vector<Tensor> img;
    for (const Tensor& r : a.ideal_component(d).basis())
      img.push_back(apply_all_slots(ident, r));
    Subspace carried = Subspace::span(b.dim(), d, nv, img);
    if (!(carried == b.ideal_component(d))) return false;
  }
  return true;
}

}  // namespace qls
