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

#include "qls/products.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "qls/errors.hpp"

namespace qls {

namespace {

void require_same_field(const Presentation& a, const Presentation& b) {
  if (a.field().indeterminates != b.field().indeterminates)
    throw precondition_error("factors live over different scalar fields");
}

std::vector<std::string> pair_gens(const char* stem, int p, int q) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(p) * q);
  for (int i = 1; i <= p; ++i)
    for (int j = 1; j <= q; ++j)
      out.push_back(std::string(stem) + "[" + std::to_string(i) + "," +
                    std::to_string(j) + "]");
  return out;
}

// All of I (x) W + V (x) J at degree d, composite index first-factor-major.
std::vector<Tensor> circ_rows(const Presentation& a, const Presentation& b,
                              int d) {
  const int nv = a.nvars();
  std::vector<Tensor> rows;
  for (const Tensor& r : a.ideal_component(d).basis())
    for (const MultiIndex& w : all_indices(b.dim(), d))
      rows.push_back(shuffle_pair(r, Tensor::basis(b.dim(), nv, w)));
  for (const MultiIndex& w : all_indices(a.dim(), d))
    for (const Tensor& s : b.ideal_component(d).basis())
      rows.push_back(shuffle_pair(Tensor::basis(a.dim(), nv, w), s));
  return rows;
}

std::vector<Tensor> pair_rows(const Subspace& x, const Subspace& y) {
  std::vector<Tensor> rows;
  for (const Tensor& r : x.basis())
    for (const Tensor& s : y.basis()) rows.push_back(shuffle_pair(r, s));
  return rows;
}

}  // namespace

bool generated_in_degree(const Presentation& p, int m) {
  if (p.is_degenerate()) return true;
  if (m < 2 || m > p.cap()) return false;
  std::map<int, std::vector<Tensor>> only{{m, p.ideal_component(m).basis()}};
  Presentation closed = Presentation::from_graded_relations(
      p.field(), p.name(), p.gens(), only, p.cap());
  return presentations_equal(closed, p, p.cap());
}

Presentation product(ProductKind kind, const Presentation& a,
                     const Presentation& b, int m) {
  require_same_field(a, b);
  const int cap = std::min(a.cap(), b.cap());
  const char* tag = kind == ProductKind::circ    ? "circ"
                    : kind == ProductKind::odot  ? "odot"
                                                 : "bullet";
  const std::string name =
      std::string(tag) + "(" + a.name() + "," + b.name() + ")";
  if (a.is_degenerate() || b.is_degenerate()) {
    // The flagged unit: circ keeps the partner, the pair products collapse.
    if (kind == ProductKind::circ) {
      Presentation out = a.is_degenerate() ? b : a;
      return out;
    }
    return Presentation::unit_trivial(a.field(), cap);
  }
  if (kind == ProductKind::bullet) {
    if (m < 2 || m > cap)
      throw precondition_error("bullet degree outside [2, cap]");
    if (!generated_in_degree(a, m) || !generated_in_degree(b, m))
      throw precondition_error(
          "bullet factors need ideals generated in the product degree");
  }
  std::map<int, std::vector<Tensor>> rels;
  switch (kind) {
    case ProductKind::circ:
      for (int d = 2; d <= cap; ++d) rels[d] = circ_rows(a, b, d);
      break;
    case ProductKind::odot:
      for (int d = 2; d <= cap; ++d)
        rels[d] = pair_rows(a.ideal_component(d), b.ideal_component(d));
      break;
    case ProductKind::bullet:
      rels[m] = pair_rows(a.ideal_component(m), b.ideal_component(m));
      break;
  }
  return Presentation::from_graded_relations(
      a.field(), name, pair_gens("p", a.dim(), b.dim()), rels, cap);
}

Presentation bang(const Presentation& a) {
  if (a.is_degenerate()) return a;
  std::vector<std::string> gens;
  gens.reserve(a.gens().size());
  for (const std::string& g : a.gens()) gens.push_back(g + "_dual");
  std::map<int, std::vector<Tensor>> rels;
  for (int d = 2; d <= a.cap(); ++d)
    rels[d] = a.ideal_component(d).perp().basis();
  return Presentation::from_graded_relations(
      a.field(), "bang(" + a.name() + ")", std::move(gens), rels, a.cap());
}

Presentation mix(MixKind kind, const Presentation& a, const Presentation& b) {
  require_same_field(a, b);
  const int cap = std::min(a.cap(), b.cap());
  const char* tag = kind == MixKind::right  ? "mix_right"
                    : kind == MixKind::left ? "mix_left"
                                            : "mix_diamond";
  const std::string name =
      std::string(tag) + "(" + a.name() + "," + b.name() + ")";
  if (a.is_degenerate() || b.is_degenerate())
    return Presentation::unit_trivial(a.field(), cap);
  std::map<int, std::vector<Tensor>> rels;
  std::vector<std::string> gens;
  for (int d = 2; d <= cap; ++d) {
    switch (kind) {
      case MixKind::right:
        // Covectors of the first factor on upper slots, second factor on
        // lower (major) slots: the hom-object index convention.
        rels[d] = pair_rows(b.ideal_component(d), a.ideal_component(d).perp());
        break;
      case MixKind::left:
        rels[d] = pair_rows(a.ideal_component(d), b.ideal_component(d).perp());
        break;
      case MixKind::diamond:
        rels[d] = pair_rows(a.ideal_component(d).perp(),
                            b.ideal_component(d).perp());
        break;
    }
  }
  gens = kind == MixKind::right ? pair_gens("z", b.dim(), a.dim())
                                : pair_gens("p", a.dim(), b.dim());
  return Presentation::from_graded_relations(a.field(), name, std::move(gens),
                                             rels, cap);
}

Presentation unit_object(UnitKind kind, const FieldSpec& field, int cap,
                         int m) {
  switch (kind) {
    case UnitKind::trivial:
      return Presentation::unit_trivial(field, cap);
    case UnitKind::free_line:
      return Presentation::unit_free_line(field, cap);
    case UnitKind::truncated_line:
      break;
  }
  return Presentation::unit_truncated_line(field, m, cap);
}

LinearMap swap_transport(int p, int q, int nvars) {
  const int n = p * q;
  std::vector<std::vector<Scalar>> rows(
      n, std::vector<Scalar>(n, Scalar::zero(nvars)));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) rows[j * p + i][i * q + j] = Scalar::one(nvars);
  return LinearMap::from_rows(std::move(rows), nvars);
}

void IdentityReport::add(std::string name, bool ok) {
  items.push_back({std::move(name), ok});
  all_passed = all_passed && ok;
}

IdentityReport verify_identities(const Presentation& a, const Presentation& b,
                                 int up_to) {
  IdentityReport rep;
  const FieldSpec& fs = a.field();
  const int nv = fs.nvars();
  const int cap = std::min({a.cap(), b.cap(), up_to});
  const Presentation unit_i = Presentation::unit_trivial(fs, cap);
  const Presentation unit_k = Presentation::unit_free_line(fs, cap);
  const Presentation unit_u = Presentation::unit_truncated_line(fs, 2, cap);
  const Presentation ab = bang(a), bb = bang(b);

  rep.add("circ(A,1) = A", presentations_equal(
                               product(ProductKind::circ, a, unit_i), a, cap));
  rep.add("circ(1,A) = A", presentations_equal(
                               product(ProductKind::circ, unit_i, a), a, cap));
  rep.add("circ(A,K) = A", presentations_equal(
                               product(ProductKind::circ, a, unit_k), a, cap));
  rep.add("circ(K,A) = A", presentations_equal(
                               product(ProductKind::circ, unit_k, a), a, cap));
  rep.add("dual(K) = U", presentations_equal(bang(unit_k), unit_u, cap));
  rep.add("dual(U) = K", presentations_equal(bang(unit_u), unit_k, cap));

  const Presentation circ_duals = product(ProductKind::circ, ab, bb);
  rep.add("dual(odot(A,B)) = circ(dual A,dual B)",
          presentations_equal(bang(product(ProductKind::odot, a, b)),
                              circ_duals, cap));

  rep.add("mix_right(K,A) = A",
          presentations_equal(mix(MixKind::right, unit_k, a), a, cap));
  rep.add("mix_left(A,K) = A",
          presentations_equal(mix(MixKind::left, a, unit_k), a, cap));
  rep.add("mix_right(A,U) = dual(A)",
          presentations_equal(mix(MixKind::right, a, unit_u), ab, cap));
  rep.add("mix_left(U,A) = dual(A)",
          presentations_equal(mix(MixKind::left, unit_u, a), ab, cap));
  rep.add("mix_diamond(K,A) = dual(A)",
          presentations_equal(mix(MixKind::diamond, unit_k, a), ab, cap));
  rep.add("mix_diamond(A,K) = dual(A)",
          presentations_equal(mix(MixKind::diamond, a, unit_k), ab, cap));

  if (generated_in_degree(a, 2) && generated_in_degree(b, 2)) {
    rep.add("dual(dual(A)) = A", presentations_equal(bang(ab), a, cap));
    rep.add("dual(circ(A,B)) = bullet(dual A,dual B)",
            presentations_equal(bang(product(ProductKind::circ, a, b)),
                                product(ProductKind::bullet, ab, bb), cap));
    rep.add("dual(bullet(A,B)) = circ(dual A,dual B)",
            presentations_equal(bang(product(ProductKind::bullet, a, b)),
                                circ_duals, cap));
    // mix_right(B,A) indexes composites A-major, the bullet side B*-major.
    rep.add("mix_right(B,A) = bullet(dual B,A)",
            presentations_equal(mix(MixKind::right, b, a),
                                product(ProductKind::bullet, bb, a),
                                swap_transport(a.dim(), b.dim(), nv), cap));
    rep.add("circ(dual B,A) = dual(mix_right(dual B,dual A))",
            presentations_equal(product(ProductKind::circ, bb, a),
                                bang(mix(MixKind::right, bb, ab)),
                                swap_transport(b.dim(), a.dim(), nv), cap));
  }
  return rep;
}

}  // namespace qls
