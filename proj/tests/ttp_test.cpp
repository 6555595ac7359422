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

#include "qls/ttp.hpp"

#include <string>
#include <vector>

#include "doctest.h"
#include "qls/errors.hpp"

namespace qls {
namespace {

const FieldSpec kQP({"q", "p"});

Scalar S(const char* text) { return scalar_parse(text, kQP); }

Presentation plane(const char* c, const char* name, int cap = 4) {
  FreeElement r = free_normalize(
      {{MultiIndex{{0, 1}}, S("1")}, {MultiIndex{{1, 0}}, -S(c)}});
  return Presentation::make(kQP, name, {"x", "y"}, {r}, cap);
}

LinearMap diag2(const Scalar& a, const Scalar& b) {
  LinearMap m(2, 2, kQP.nvars());
  m.at(0, 0) = a;
  m.at(1, 1) = b;
  return m;
}

Tensor letter(int c) {
  return Tensor::basis(4, kQP.nvars(), MultiIndex::single(c));
}

Tensor unit_scalar() {
  return Tensor::from_terms(4, 0, kQP.nvars(),
                            {{MultiIndex::empty(), S("1")}});
}

TEST_CASE("flip twisting matches the plain product") {
  const int nv = kQP.nvars();
  Presentation a = plane("q", "Aq");
  Presentation b = plane("p", "Bp");
  Presentation circ = product(ProductKind::circ, a, b);
  TwistingMap t = flip_twisting(a, b, 4);
  CHECK(t.validated.ok());
  CHECK(t.validated.checked_up_to == 4);

  CHECK(tau_extend(t, 1, 1) == swap_transport(2, 2, nv));
  CHECK(tau_extend(t, 2, 2) == swap_transport(4, 4, nv));
  CHECK(tau_extend(t, 0, 2) == LinearMap::identity(4, nv));
  CHECK(tau_extend(t, 3, 0) == LinearMap::identity(8, nv));
  for (int r = 1; r <= 3; ++r)
    CHECK(gamma_matrix(t, r) ==
          LinearMap::identity(static_cast<int>(power_dim(4, r)), nv));

  for (int c1 = 0; c1 < 4; ++c1)
    for (int c2 = 0; c2 < 4; ++c2)
      CHECK(ttp_multiply(t, letter(c1), letter(c2)) ==
            circ.quotient_product(letter(c1), letter(c2)));

  Presentation tp = ttp_presentation(t);
  CHECK(tp.name() == "ttp(Aq,Bp)");
  CHECK(presentations_equal(tp, circ, 4));

  IdentityReport rep = structural_checks(t, 4);
  CHECK(rep.all_passed);
  CHECK(rep.items.size() >= 5);
}

TEST_CASE("scaling twist multiplies by the crossing factor") {
  const int nv = kQP.nvars();
  Presentation a = plane("q", "Aq");
  Presentation b = plane("p", "Bp");
  Presentation circ = product(ProductKind::circ, a, b);
  TwistingMap t = twisting_from_matrix(
      LinearMap::identity(4, nv).scaled(S("p")), a, b, 4);
  CHECK(t.validated.ok());

  // One crossing per letter pair: the product picks up one factor of p.
  for (int c1 = 0; c1 < 4; ++c1)
    for (int c2 = 0; c2 < 4; ++c2)
      CHECK(ttp_multiply(t, letter(c1), letter(c2)) ==
            circ.quotient_product(letter(c1), letter(c2)).scaled(S("p")));

  // Length-r words need r(r-1)/2 crossings.
  CHECK(gamma_matrix(t, 2) == LinearMap::identity(16, nv).scaled(S("p")));
  CHECK(gamma_matrix(t, 3) == LinearMap::identity(64, nv).scaled(S("p^3")));

  // Unit law: scalar operands do not twist.
  CHECK(ttp_multiply(t, unit_scalar(), letter(2)) == letter(2));
  CHECK(ttp_multiply(t, letter(2), unit_scalar()) == letter(2));

  Tensor deep = Tensor::basis(4, nv, MultiIndex{{0, 1, 2}});
  CHECK_THROWS_AS(ttp_multiply(t, deep, deep), precondition_error);
}

TEST_CASE("matrix twisting from slotwise symmetries") {
  const int nv = kQP.nvars();
  Presentation a = plane("q", "Aq");
  Presentation b = plane("p", "Bp");
  LinearMap alpha = diag2(S("1"), S("p"));
  LinearMap beta = diag2(S("p"), S("1"));
  LinearMap tau_hat = beta.kron(alpha);
  TwistingMap t = twisting_from_matrix(tau_hat, a, b, 4);
  CHECK(t.validated.ok());

  // The (1,1) extension is the twisting itself, flip-composed.
  CHECK(tau_extend(t, 1, 1) == swap_transport(2, 2, nv) * tau_hat);

  // Two elementary moves: the crossing slot picks the moving map squared,
  // each crossed slot once.
  CHECK(tau_extend(t, 2, 1) ==
        (alpha * alpha).kron(beta.kron(beta)) * swap_transport(4, 2, nv));
  CHECK(tau_extend(t, 1, 2) ==
        alpha.kron(alpha).kron(beta * beta) * swap_transport(2, 4, nv));

  // Move order does not matter: bubble the (2,2) extension in the other
  // legal order and compare.
  LinearMap blk = swap_transport(2, 2, nv) * tau_hat;
  LinearMap i2 = LinearMap::identity(2, nv);
  LinearMap i4 = LinearMap::identity(4, nv);
  LinearMap other = i2.kron(blk).kron(i2) * blk.kron(i4) * i4.kron(blk) *
                    i2.kron(blk).kron(i2);
  CHECK(tau_extend(t, 2, 2) == other);

  // Single crossing inside a length-2 word.
  CHECK(gamma_matrix(t, 2) == i2.kron(tau_hat).kron(i2));
  CHECK(gamma_matrix(t, 3).is_invertible());

  IdentityReport rep = structural_checks(t, 4);
  for (const IdentityCheck& c : rep.items) {
    INFO(c.name);
    CHECK(c.passed);
  }
}

TEST_CASE("incompatible twisting is rejected with a witness degree") {
  const int nv = kQP.nvars();
  Presentation a = plane("q", "Aq");
  Presentation b = plane("p", "Bp");

  LinearMap bad = LinearMap::identity(4, nv);
  bad.at(1, 2) = S("1");
  bool threw = false;
  try {
    twisting_from_matrix(bad, a, b, 4);
  } catch (const precondition_error& e) {
    threw = true;
    CHECK(std::string(e.what()).find("degree 3") != std::string::npos);
  }
  CHECK(threw);

  LinearMap zero_row = LinearMap::identity(4, nv);
  zero_row.at(2, 2) = S("0");
  CHECK_THROWS_AS(twisting_from_matrix(zero_row, a, b, 4),
                  precondition_error);
  CHECK_THROWS_AS(
      twisting_from_matrix(LinearMap::identity(3, nv), a, b, 4),
      precondition_error);
  Presentation unit = Presentation::unit_trivial(kQP, 4);
  CHECK_THROWS_AS(
      twisting_from_matrix(LinearMap::identity(0, nv), a, unit, 4),
      precondition_error);
}

TEST_CASE("opposite twisting inverts the crossing") {
  const int nv = kQP.nvars();
  Presentation a = plane("q", "Aq");
  Presentation b = plane("p", "Bp");

  TwistingMap f = flip_twisting(a, b, 3);
  CHECK(ttp_opposite(f).tau_hat == LinearMap::identity(4, nv));

  LinearMap alpha = diag2(S("1"), S("p"));
  LinearMap beta = diag2(S("p"), S("1"));
  TwistingMap t = twisting_from_matrix(beta.kron(alpha), a, b, 3);
  TwistingMap o = ttp_opposite(t);
  CHECK(o.tau_hat == alpha.inverse().kron(beta.inverse()));
  CHECK(o.A_pres.name() == "Bp");
  CHECK(o.B_pres.name() == "Aq");
  CHECK(o.validated.ok());

  TwistingMap back = ttp_opposite(o);
  CHECK(back.tau_hat == t.tau_hat);
  CHECK(back.A_pres.name() == "Aq");

  Presentation po = ttp_presentation(o);
  Presentation pt = ttp_presentation(t);
  for (int d = 0; d <= 3; ++d) CHECK(po.hilbert(d) == pt.hilbert(d));
}

TEST_CASE("twisted presentation shares the graded skeleton") {
  const int nv = kQP.nvars();
  Presentation a = plane("q", "Aq");
  Presentation b = plane("p", "Bp");
  Presentation circ = product(ProductKind::circ, a, b);
  LinearMap alpha = diag2(S("1"), S("p"));
  LinearMap beta = diag2(S("p"), S("1"));
  TwistingMap t = twisting_from_matrix(beta.kron(alpha), a, b, 4);
  Presentation tp = ttp_presentation(t);

  for (int d = 0; d <= 4; ++d) CHECK(tp.hilbert(d) == circ.hilbert(d));
  for (int d = 2; d <= 4; ++d)
    CHECK(tp.normal_words(d) == circ.normal_words(d));

  // The twist deforms the mixed relations: the (1,1),(2,1) pair now
  // q*p-commutes instead of q-commuting.
  Tensor deformed = Tensor::basis(4, nv, MultiIndex{{0, 2}}) -
                    Tensor::basis(4, nv, MultiIndex{{2, 0}}).scaled(S("q*p"));
  CHECK(tp.ideal_component(2).contains(deformed));
  CHECK_FALSE(circ.ideal_component(2).contains(deformed));
  CHECK_FALSE(presentations_equal(tp, circ, 4));
}

}  // namespace
}  // namespace qls
