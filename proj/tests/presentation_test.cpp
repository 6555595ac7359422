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

#include <doctest.h>

#include "qls/errors.hpp"
#include "qls/presentation.hpp"

using namespace qls;

namespace {

const FieldSpec kQP({"q", "p"});

Scalar S(const std::string& text) { return scalar_parse(text, kQP); }

FreeElement F(std::vector<std::pair<std::vector<int>, std::string>> terms) {
  FreeElement e;
  for (auto& [w, c] : terms) e.emplace_back(MultiIndex{w}, S(c));
  return free_normalize(std::move(e));
}

// k_q[x,y]: x y = q y x.
Presentation quantum_plane(int cap) {
  return Presentation::make(kQP, "Aq", {"x", "y"},
                            {F({{{0, 1}, "1"}, {{1, 0}, "-q"}})}, cap);
}

Tensor word(const Presentation& p, std::vector<int> w) {
  return Tensor::basis(p.dim(), p.nvars(), MultiIndex{std::move(w)});
}

}  // namespace

TEST_CASE("free element normalization") {
  FreeElement e = F({{{0, 1}, "q"}, {{0, 1}, "-q"}, {{1}, "2"}});
  REQUIRE(e.size() == 1);
  CHECK(e[0].first == MultiIndex{{1}});
  int d = -1;
  CHECK(free_is_homogeneous(F({{{0, 1}, "1"}, {{1, 0}, "-q"}}), &d));
  CHECK(d == 2);
  CHECK_FALSE(free_is_homogeneous(F({{{0, 0}, "1"}, {{1}, "-1"}}), &d));
}

TEST_CASE("quantum plane quotient data") {
  Presentation a = quantum_plane(4);
  CHECK(a.dim() == 2);
  CHECK(a.is_conic());

  SUBCASE("dimensions count commutative monomials") {
    CHECK(a.hilbert(0) == 1);
    CHECK(a.hilbert(1) == 2);
    CHECK(a.hilbert(2) == 3);
    CHECK(a.hilbert(3) == 4);
    CHECK(a.hilbert(4) == 5);
    CHECK(a.ideal_component(2).dim() == 1);
    CHECK(a.ideal_component(3).dim() == 4);
    CHECK(a.ideal_component(4).dim() == 11);
  }

  SUBCASE("ordered monomials survive as normal words") {
    auto nw = a.normal_words(3);
    REQUIRE(nw.size() == 4);
    CHECK(nw[0] == MultiIndex{{0, 0, 0}});  // x x x
    CHECK(nw[1] == MultiIndex{{1, 0, 0}});  // y x x
    CHECK(nw[2] == MultiIndex{{1, 1, 0}});
    CHECK(nw[3] == MultiIndex{{1, 1, 1}});
  }

  SUBCASE("normal forms and quotient products") {
    CHECK(a.normal_form(word(a, {0, 1})) == word(a, {1, 0}).scaled(S("q")));
    CHECK(a.quotient_product(word(a, {0}), word(a, {1})) ==
          word(a, {1, 0}).scaled(S("q")));
    CHECK(a.quotient_product(word(a, {0, 1}), word(a, {0})) ==
          word(a, {1, 0, 0}).scaled(S("q")));
    // x y x y -> q^3 y y x x
    CHECK(a.normal_form(word(a, {0, 1, 0, 1})) ==
          word(a, {1, 1, 0, 0}).scaled(S("q^3")));
  }

  SUBCASE("degree cap is enforced") {
    CHECK_THROWS_AS(a.hilbert(5), precondition_error);
    CHECK_THROWS_AS(a.ideal_component(-1), precondition_error);
  }
}

TEST_CASE("standard families of presentations") {
  SUBCASE("free algebra") {
    Presentation f = Presentation::make(kQP, "F", {"x", "y"}, {}, 4);
    for (int d = 1; d <= 4; ++d)
      CHECK(f.hilbert(d) == static_cast<int>(power_dim(2, d)));
  }

  SUBCASE("commutative and exterior relatives") {
    Presentation sym = Presentation::make(
        kQP, "S", {"x", "y"}, {F({{{0, 1}, "1"}, {{1, 0}, "-1"}})}, 4);
    Presentation qp = quantum_plane(4);
    for (int d = 0; d <= 4; ++d) CHECK(sym.hilbert(d) == qp.hilbert(d));

    Presentation ext = Presentation::make(
        kQP, "E", {"x", "y"},
        {F({{{0, 0}, "1"}}), F({{{1, 1}, "1"}}),
         F({{{0, 1}, "1"}, {{1, 0}, "q"}})},
        4);
    CHECK(ext.hilbert(1) == 2);
    CHECK(ext.hilbert(2) == 1);
    CHECK(ext.hilbert(3) == 0);
    CHECK(ext.hilbert(4) == 0);
  }

  SUBCASE("units") {
    Presentation one = Presentation::unit_trivial(kQP, 4);
    CHECK(one.dim() == 0);
    CHECK(one.is_degenerate());
    CHECK(one.hilbert(0) == 1);
    CHECK(one.hilbert(1) == 0);
    CHECK(one.hilbert(3) == 0);

    Presentation k = Presentation::unit_free_line(kQP, 4);
    for (int d = 0; d <= 4; ++d) CHECK(k.hilbert(d) == 1);

    Presentation u3 = Presentation::unit_truncated_line(kQP, 3, 5);
    CHECK(u3.hilbert(1) == 1);
    CHECK(u3.hilbert(2) == 1);
    CHECK(u3.hilbert(3) == 0);
    CHECK(u3.hilbert(4) == 0);
    CHECK(u3.hilbert(5) == 0);
    // Cap below the exponent: no visible relations.
    Presentation u9 = Presentation::unit_truncated_line(kQP, 9, 4);
    for (int d = 0; d <= 4; ++d) CHECK(u9.hilbert(d) == 1);
    CHECK_THROWS_AS(Presentation::unit_truncated_line(kQP, 1, 4),
                    precondition_error);
  }
}

TEST_CASE("inhomogeneous presentations refuse graded queries") {
  Presentation b = Presentation::make(
      kQP, "B", {"c"}, {F({{{0, 0}, "1"}, {{0}, "-1"}})}, 4);
  CHECK_FALSE(b.is_conic());
  CHECK(b.given_relations().size() == 1);
  CHECK_THROWS_AS(b.hilbert(2), precondition_error);
  CHECK_THROWS_AS(b.ideal_component(2), precondition_error);
}

TEST_CASE("morphism checks") {
  Presentation a = quantum_plane(4);

  SUBCASE("diagonal maps preserve the relation") {
    LinearMap phi(2, 2, kQP.nvars());
    phi.at(0, 0) = S("p");
    phi.at(1, 1) = S("1");
    CHECK_FALSE(morphism_failure(a, a, phi, 4).has_value());
    CHECK(is_stable_under(a, phi, 4));
  }

  SUBCASE("swapping the generators does not") {
    LinearMap swap(2, 2, kQP.nvars());
    swap.at(0, 1) = S("1");
    swap.at(1, 0) = S("1");
    auto w = morphism_failure(a, a, swap, 4);
    REQUIRE(w.has_value());
    CHECK(w->degree == 2);
    CHECK(a.ideal_component(2).contains(w->relation));
    CHECK_FALSE(a.ideal_component(2).contains(w->image));
  }

  SUBCASE("unipotent shear is unstable") {
    LinearMap u(2, 2, kQP.nvars());
    u.at(0, 0) = S("1");
    u.at(0, 1) = S("1");
    u.at(1, 1) = S("1");
    CHECK_FALSE(is_stable_under(a, u, 4));
  }

  SUBCASE("rectangular maps") {
    Presentation k = Presentation::unit_free_line(kQP, 4);
    LinearMap e_to_x(2, 1, kQP.nvars());
    e_to_x.at(0, 0) = S("1");
    CHECK_FALSE(morphism_failure(k, a, e_to_x, 4).has_value());

    // x, y -> e lands every relation in (e^2) only after the q-plane
    // relation collapses, which needs e e = 0: true in U_2, not in K.
    Presentation u2 = Presentation::unit_truncated_line(kQP, 2, 4);
    LinearMap collapse(1, 2, kQP.nvars());
    collapse.at(0, 0) = S("1");
    collapse.at(0, 1) = S("1");
    CHECK_FALSE(morphism_failure(a, u2, collapse, 4).has_value());
    CHECK(morphism_failure(a, k, collapse, 4).has_value());
  }

  SUBCASE("shape guard") {
    LinearMap bad(3, 1, kQP.nvars());
    CHECK_THROWS_AS(morphism_failure(a, a, bad, 2), precondition_error);
  }
}

TEST_CASE("presentation equality by ideal components") {
  Presentation a = quantum_plane(4);
  Presentation a2 = Presentation::make(
      kQP, "other", {"u", "v"},
      {F({{{0, 1}, "-1/q"}, {{1, 0}, "1"}})}, 4);  // same line, rescaled
  CHECK(presentations_equal(a, a2, 4));

  Presentation b = Presentation::make(
      kQP, "Ap", {"x", "y"}, {F({{{0, 1}, "1"}, {{1, 0}, "-p"}})}, 4);
  CHECK_FALSE(presentations_equal(a, b, 4));
  CHECK(presentations_equal(a, b, 1));  // no constraints yet at degree 1

  Presentation k = Presentation::unit_free_line(kQP, 4);
  CHECK_FALSE(presentations_equal(a, k, 4));
}
