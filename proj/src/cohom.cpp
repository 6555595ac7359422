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

#include "qls/cohom.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "qls/errors.hpp"

namespace qls {

namespace {

std::vector<Tensor> stack_rows(const Subspace& major, const Subspace& minor) {
  std::vector<Tensor> rows;
  for (const Tensor& r : major.basis())
    for (const Tensor& s : minor.basis()) rows.push_back(shuffle_pair(r, s));
  return rows;
}

std::vector<std::string> z_gens(int p, int q) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(p) * q);
  for (int i = 1; i <= p; ++i)
    for (int j = 1; j <= q; ++j)
      out.push_back("z[" + std::to_string(i) + "," + std::to_string(j) + "]");
  return out;
}

}  // namespace

HomObject hom_object(const Presentation& b, const Presentation& a) {
  HomObject h{mix(MixKind::right, b, a), b, a, false};
  h.pres.set_name("hom(" + b.name() + "," + a.name() + ")");
  return h;
}

HomObject end_object(const Presentation& a) {
  HomObject h = hom_object(a, a);
  h.pres.set_name("end(" + a.name() + ")");
  return h;
}

bool in_circ_ideal(const Presentation& a, const Presentation& b,
                   const Tensor& v) {
  if (v.is_zero()) return true;
  const int d = v.degree();
  const int m = b.dim();
  std::map<std::vector<int>, std::vector<std::pair<MultiIndex, Scalar>>> by_b;
  for (const auto& [mi, c] : v.terms()) {
    std::vector<int> ua(d), wb(d);
    for (int t = 0; t < d; ++t) {
      ua[t] = mi.slots[t] / m;
      wb[t] = mi.slots[t] % m;
    }
    by_b[std::move(wb)].push_back({MultiIndex{std::move(ua)}, c});
  }
  const Subspace& ia = a.ideal_component(d);
  std::map<std::vector<int>, std::vector<std::pair<MultiIndex, Scalar>>> by_a;
  for (auto& [wb, terms] : by_b) {
    Tensor t = Tensor::from_terms(a.dim(), d, a.nvars(), std::move(terms));
    Tensor rem = ia.reduce(t);
    for (const auto& [mi, c] : rem.terms())
      by_a[mi.slots].push_back({MultiIndex{wb}, c});
  }
  const Subspace& jb = b.ideal_component(d);
  for (auto& [ua, terms] : by_a) {
    (void)ua;
    Tensor t = Tensor::from_terms(b.dim(), d, b.nvars(), std::move(terms));
    if (!jb.reduce(t).is_zero()) return false;
  }
  return true;
}

std::optional<MorphismWitness> circ_morphism_failure(const Presentation& src,
                                                     const Presentation& a,
                                                     const Presentation& b,
                                                     const LinearMap& f,
                                                     int up_to) {
  if (f.cols() != src.dim() || f.rows() != a.dim() * b.dim())
    throw precondition_error("morphism matrix has wrong shape");
  for (int d = 2; d <= up_to; ++d)
    for (const Tensor& r : src.ideal_component(d).basis()) {
      Tensor img = apply_all_slots(f, r);
      if (!in_circ_ideal(a, b, img))
        return MorphismWitness{d, r, std::move(img)};
    }
  return std::nullopt;
}

LinearMap coevaluation_map(int n, int m, int nvars) {
  LinearMap f(n * m * m, n, nvars);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) f.at((i * m + j) * m + j, i) = Scalar::one(nvars);
  return f;
}

LinearMap cocomposition_map(int n, int c, int m, int nvars) {
  LinearMap f(n * c * c * m, n * m, nvars);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < c; ++k)
        f.at((i * c + k) * (c * m) + (k * m + j), i * m + j) =
            Scalar::one(nvars);
  return f;
}

LinearMap counit_map(int n, int nvars) {
  LinearMap f(1, n * n, nvars);
  for (int i = 0; i < n; ++i) f.at(0, i * n + i) = Scalar::one(nvars);
  return f;
}

LinearMap coevaluation_check(const HomObject& h, int up_to) {
  const int n = h.target.dim(), m = h.source.dim();
  LinearMap f = coevaluation_map(n, m, h.pres.nvars());
  if (circ_morphism_failure(h.target, h.pres, h.source, f, up_to))
    throw internal_check_error("coevaluation is not a morphism");
  return f;
}

IdentityReport bialgebra_checks(const HomObject& e, int up_to) {
  if (e.source.dim() != e.target.dim())
    throw precondition_error("bialgebra checks need a coEnd object");
  const int n = e.target.dim();
  const int nv = e.pres.nvars();
  IdentityReport rep;

  LinearMap delta = cocomposition_map(n, n, n, nv);
  rep.add("comultiplication well-defined",
          !circ_morphism_failure(e.pres, e.pres, e.pres, delta, up_to));

  LinearMap eps = counit_map(n, nv);
  Presentation line = Presentation::unit_free_line(e.pres.field(), e.pres.cap());
  rep.add("counit well-defined",
          !morphism_failure(e.pres, line, eps, up_to));

  const int nn = n * n;
  LinearMap id_e = LinearMap::identity(nn, nv);
  rep.add("coassociativity on generators",
          delta.kron(id_e) * delta == id_e.kron(delta) * delta);
  rep.add("left counit law", eps.kron(id_e) * delta == id_e);
  rep.add("right counit law", id_e.kron(eps) * delta == id_e);

  LinearMap coact = coevaluation_map(n, n, nv);
  rep.add("coaction well-defined",
          !circ_morphism_failure(e.target, e.pres, e.target, coact, up_to));
  rep.add("counit reduces the coaction to the identity",
          eps.kron(LinearMap::identity(n, nv)) * coact ==
              LinearMap::identity(n, nv));
  return rep;
}

CocompositionReport cocomposition(const Presentation& b, const Presentation& c,
                                  const Presentation& a, int up_to) {
  const int n = a.dim(), cd = c.dim(), m = b.dim();
  const int nv = a.nvars();
  HomObject h_ba = hom_object(b, a);
  HomObject h_ca = hom_object(c, a);
  HomObject h_bc = hom_object(b, c);
  CocompositionReport rep;
  LinearMap split = cocomposition_map(n, cd, m, nv);
  rep.failure =
      circ_morphism_failure(h_ba.pres, h_ca.pres, h_bc.pres, split, up_to);

  // Both coevaluation routes A -> hom[C,A]_1 (x) hom[B,C]_1 (x) B_1 agree;
  // the flattened index regroups associatively, so this is matrix equality.
  LinearMap route1 =
      split.kron(LinearMap::identity(m, nv)) * coevaluation_map(n, m, nv);
  LinearMap route2 =
      LinearMap::identity(n * cd, nv).kron(coevaluation_map(cd, m, nv)) *
      coevaluation_map(n, cd, nv);
  rep.square_commutes = route1 == route2;
  return rep;
}

Presentation e_marked(const Presentation& a) {
  const int d_cap = a.cap();
  std::map<int, std::vector<Tensor>> rels;
  for (int d = 2; d <= d_cap; ++d) {
    const Subspace& id = a.ideal_component(d);
    Subspace pd = id.perp();
    std::vector<Tensor> rows = stack_rows(id, pd);
    for (Tensor& t : stack_rows(pd, id)) rows.push_back(std::move(t));
    rels[d] = std::move(rows);
  }
  return Presentation::from_graded_relations(a.field(),
                                              "emarked(" + a.name() + ")",
                                              z_gens(a.dim(), a.dim()), rels,
                                              d_cap);
}

DiagramObject make_diagram(const Presentation& a, const Presentation& b,
                           const Presentation& h_alg,
                           std::vector<std::vector<Tensor>> h, int up_to) {
  const int n = a.dim(), m = b.dim(), hd = h_alg.dim();
  if (static_cast<int>(h.size()) != n)
    throw precondition_error("coefficient array has wrong shape");
  for (const auto& row : h)
    if (static_cast<int>(row.size()) != m)
      throw precondition_error("coefficient array has wrong shape");
  LinearMap f(hd * m, n, a.nvars());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < hd; ++k)
        f.at(k * m + j, i) = h[i][j].coefficient(MultiIndex::single(k));
  DiagramObject dg{a, b, h_alg, std::move(h), false, std::nullopt};
  dg.failure = circ_morphism_failure(a, h_alg, b, f, up_to);
  dg.verified = !dg.failure.has_value();
  return dg;
}

DiagramObject initial_diagram(const HomObject& h, int up_to) {
  const int n = h.target.dim(), m = h.source.dim();
  std::vector<std::vector<Tensor>> coords(n, std::vector<Tensor>(m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      coords[i][j] = Tensor::basis(n * m, h.pres.nvars(),
                                   MultiIndex::single(i * m + j));
  return make_diagram(h.target, h.source, h.pres, std::move(coords), up_to);
}

Presentation specialize_diagram(const DiagramObject& dg, int up_to) {
  if (!dg.verified)
    throw precondition_error("diagram is not a verified morphism");
  const int n = dg.source.dim(), m = dg.cofactor.dim();
  const int nm = n * m;
  const int nv = dg.source.nvars();
  const int cap = std::min(up_to, dg.target_h.cap());
  std::map<int, std::vector<Tensor>> rels;
  for (int d = 2; d <= cap; ++d) {
    // Evaluation z-word -> normal form of the h-word; its kernel is the
    // annihilator of the row space of the transposed coefficient matrix.
    std::vector<Tensor> rows;
    std::map<std::vector<int>, std::vector<std::pair<MultiIndex, Scalar>>>
        by_word;
    for (const MultiIndex& w : all_indices(nm, d)) {
      Tensor prod = dg.h[w.slots[0] / m][w.slots[0] % m];
      for (int t = 1; t < d; ++t)
        prod = prod.concat(dg.h[w.slots[t] / m][w.slots[t] % m]);
      Tensor nf = dg.target_h.normal_form(prod);
      for (const auto& [mi, cc] : nf.terms())
        by_word[mi.slots].push_back({w, cc});
    }
    for (auto& [mi, terms] : by_word) {
      (void)mi;
      rows.push_back(Tensor::from_terms(nm, d, nv, std::move(terms)));
    }
    rels[d] = Subspace::span(nm, d, nv, rows).perp().basis();
  }
  return Presentation::from_graded_relations(
      dg.source.field(), "specialize(" + dg.target_h.name() + ")",
      z_gens(n, m), rels, cap);
}

std::optional<MorphismWitness> initial_factor_map(const DiagramObject& dg,
                                                  int up_to) {
  if (!dg.verified)
    throw precondition_error("diagram is not a verified morphism");
  HomObject h = hom_object(dg.cofactor, dg.source);
  Presentation image = specialize_diagram(dg, up_to);
  LinearMap id = LinearMap::identity(h.pres.dim(), h.pres.nvars());
  const int lim = std::min({up_to, image.cap(), h.pres.cap()});
  return morphism_failure(h.pres, image, id, lim);
}

}  // namespace qls
