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

#include <string>
#include <vector>

#include "doctest.h"
#include "qls/errors.hpp"

namespace qls {
namespace {

const FieldSpec kQP({"q", "p"});

Scalar S(const std::string& text) { return scalar_parse(text, kQP); }

Presentation plane(const std::string& c, const char* name, int cap = 4) {
  FreeElement r = free_normalize(
      {{MultiIndex{{0, 1}}, S("1")}, {MultiIndex{{1, 0}}, -S(c)}});
  return Presentation::make(kQP, name, {"x", "y"}, {r}, cap);
}

Presentation conic3(const std::string& c, const char* name, int cap = 4) {
  FreeElement r2 = free_normalize(
      {{MultiIndex{{0, 1}}, S("1")}, {MultiIndex{{1, 0}}, -S(c)}});
  FreeElement r3 = free_normalize({{MultiIndex{{1, 1, 1}}, S("1")}});
  return Presentation::make(kQP, name, {"x", "y"}, {r2, r3}, cap);
}

TEST_CASE("hom object structure") {
  Presentation a = plane("q", "Aq");
  Presentation b = plane("p", "Bp");
  HomObject h = hom_object(b, a);
  CHECK(h.pres.dim() == 4);
  CHECK(h.pres.name() == "hom(Bp,Aq)");
  CHECK(h.pres.gens().front() == "z[1,1]");
  CHECK_FALSE(h.twisted);
  for (int d = 2; d <= 3; ++d)
    CHECK(h.pres.given_component(d).dim() ==
          b.ideal_component(d).perp().dim() * a.ideal_component(d).dim());
  CHECK(end_object(a).pres.given_component(2).dim() == 3);
}

TEST_CASE("hom from the free line recovers the target") {
  for (const Presentation& a :
       {plane("q", "Aq"), conic3("q", "Cq"),
        Presentation::unit_truncated_line(kQP, 3, 4)}) {
    HomObject h = hom_object(Presentation::unit_free_line(kQP, 4), a);
    CHECK(h.pres.dim() == a.dim());
    CHECK(presentations_equal(h.pres, a, 4));
  }
}

TEST_CASE("circ ideal membership is factorwise") {
  Presentation a = plane("q", "Aq");
  Presentation b = plane("p", "Bp");
  Tensor rel_a = Tensor::from_terms(
      2, 2, 2, {{MultiIndex{{0, 1}}, S("1")}, {MultiIndex{{1, 0}}, -S("q")}});
  Tensor rel_b = Tensor::from_terms(
      2, 2, 2, {{MultiIndex{{0, 1}}, S("1")}, {MultiIndex{{1, 0}}, -S("p")}});
  Tensor w = Tensor::basis(2, 2, MultiIndex{{1, 0}});
  CHECK(in_circ_ideal(a, b, shuffle_pair(rel_a, w)));
  CHECK(in_circ_ideal(a, b, shuffle_pair(w, rel_b)));
  CHECK_FALSE(in_circ_ideal(a, b, shuffle_pair(w, w)));
  CHECK_FALSE(in_circ_ideal(a, b, shuffle_pair(rel_b, w)));
  // Mixed sum in neither factor alone.
  Tensor mixed =
      shuffle_pair(rel_a, w) + shuffle_pair(w, rel_b).scaled(S("p"));
  CHECK(in_circ_ideal(a, b, mixed));
  CHECK_FALSE(in_circ_ideal(a, b, mixed + shuffle_pair(w, w)));
}

TEST_CASE("coevaluation is a morphism") {
  Presentation a = plane("q", "Aq");
  Presentation b = plane("p", "Bp");
  HomObject h = hom_object(b, a);
  LinearMap f = coevaluation_check(h, 3);
  // delta(x) = z[1,1] (x) u + z[1,2] (x) v on the flattened index.
  CHECK(f.at((0 * 2 + 0) * 2 + 0, 0).is_one());
  CHECK(f.at((0 * 2 + 1) * 2 + 1, 0).is_one());
  CHECK(f.at((1 * 2 + 0) * 2 + 0, 1).is_one());
  int nonzero = 0;
  for (int r = 0; r < f.rows(); ++r)
    for (int c = 0; c < f.cols(); ++c)
      if (!f.at(r, c).is_zero()) ++nonzero;
  CHECK(nonzero == 4);
}

TEST_CASE("bialgebra checks on the coend") {
  Presentation a = plane("q", "Aq");
  IdentityReport rep = bialgebra_checks(end_object(a), 3);
  for (const IdentityCheck& it : rep.items) {
    INFO(it.name);
    CHECK(it.passed);
  }
  CHECK(rep.all_passed);
  // Counit entries: z[i,j] -> delta_{ij} e.
  LinearMap eps = counit_map(2, kQP.nvars());
  CHECK(eps.at(0, 0).is_one());
  CHECK(eps.at(0, 1).is_zero());
  CHECK(eps.at(0, 2).is_zero());
  CHECK(eps.at(0, 3).is_one());
}

TEST_CASE("cocomposition through a middle factor") {
  Presentation a = plane("q", "Aq");
  Presentation b = plane("p", "Bp");
  Presentation c = plane("q*p", "Cqp");
  CocompositionReport rep = cocomposition(b, c, a, 3);
  CHECK(rep.square_commutes);
  CHECK_FALSE(rep.failure.has_value());
  CHECK(rep.ok());
  // Through the free line: reduces to the coevaluation arrow pattern.
  CocompositionReport through_unit =
      cocomposition(b, Presentation::unit_free_line(kQP, 4), a, 3);
  CHECK(through_unit.ok());
}

TEST_CASE("marked coend of the quantum plane") {
  Presentation a = plane("q", "Aq");
  Presentation m = e_marked(a);
  CHECK(m.dim() == 4);
  CHECK(m.given_component(2).dim() == 6);
  CHECK(m.given_component(2).contains(
      end_object(a).pres.given_component(2)));
  CHECK(m.hilbert(1) == 4);
  CHECK(m.hilbert(2) == 10);

  Presentation f = Presentation::make(kQP, "F2", {"x", "y"}, {}, 3);
  Presentation mf = e_marked(f);
  CHECK(mf.hilbert(2) == 16);
  CHECK(mf.ideal_component(3).dim() == 0);
}

TEST_CASE("diagram specialization") {
  Presentation a = plane("q", "Aq");
  HomObject e = end_object(a);
  DiagramObject dg = initial_diagram(e, 3);
  CHECK(dg.verified);
  Presentation image = specialize_diagram(dg, 3);
  CHECK(presentations_equal(image, e.pres, 3));
  CHECK_FALSE(initial_factor_map(dg, 3).has_value());

  // Collapsed target: all coefficients zero, every word is a relation.
  Presentation u = Presentation::unit_truncated_line(kQP, 2, 4);
  std::vector<std::vector<Tensor>> zero(
      2, std::vector<Tensor>(2, Tensor(1, 1, kQP.nvars())));
  DiagramObject flat = make_diagram(a, a, u, zero, 3);
  CHECK(flat.verified);
  Presentation collapsed = specialize_diagram(flat, 3);
  CHECK(collapsed.hilbert(2) == 0);
  CHECK(collapsed.hilbert(3) == 0);
  CHECK_FALSE(initial_factor_map(flat, 3).has_value());
}

TEST_CASE("marked coend coacts and factors through the hom object") {
  Presentation a = plane("q", "Aq");
  Presentation m = e_marked(a);
  std::vector<std::vector<Tensor>> coords(2, std::vector<Tensor>(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      coords[i][j] = Tensor::basis(4, kQP.nvars(),
                                   MultiIndex::single(i * 2 + j));
  DiagramObject dg = make_diagram(a, a, m, coords, 3);
  CHECK(dg.verified);
  Presentation image = specialize_diagram(dg, 3);
  CHECK(presentations_equal(image, m, 3));
  CHECK(image.ideal_component(2).contains(
      end_object(a).pres.ideal_component(2)));
  CHECK_FALSE(initial_factor_map(dg, 3).has_value());

  // The transposed coefficients still coact on the marked coend: its
  // relations are symmetric in the two shuffle orders.
  std::vector<std::vector<Tensor>> transposed(2, std::vector<Tensor>(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      transposed[i][j] = Tensor::basis(4, kQP.nvars(),
                                       MultiIndex::single(j * 2 + i));
  CHECK(make_diagram(a, a, m, transposed, 3).verified);

  // The plain coend is one-sided, so the transpose fails there.
  DiagramObject bad = make_diagram(a, a, end_object(a).pres, transposed, 3);
  CHECK_FALSE(bad.verified);
  REQUIRE(bad.failure.has_value());
  CHECK(bad.failure->degree == 2);
  CHECK_THROWS_AS(specialize_diagram(bad, 3), precondition_error);
}

}  // namespace
}  // namespace qls
