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

#include "qls/twist.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
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

Presentation free_algebra(const char* name, std::vector<std::string> gens,
                          int cap) {
  return Presentation::make(kQP, name, std::move(gens), {}, cap);
}

LinearMap diag2(const Scalar& a, const Scalar& b) {
  LinearMap m(2, 2, kQP.nvars());
  m.at(0, 0) = a;
  m.at(1, 1) = b;
  return m;
}

LinearMap mat2(const Scalar& a, const Scalar& b, const Scalar& c,
               const Scalar& d) {
  return LinearMap::from_rows({{a, b}, {c, d}}, kQP.nvars());
}

// Unipotent shear: not an automorphism of the quantum plane for generic q.
LinearMap shear() { return mat2(S("1"), S("1"), S("0"), S("1")); }

bool components_equal(const Presentation& a, const Presentation& b,
                      int up_to) {
  for (int d = 2; d <= up_to; ++d)
    if (!(a.ideal_component(d) == b.ideal_component(d))) return false;
  return true;
}

TEST_CASE("sigma_deform rescales relations slot by slot") {
  const int nv = kQP.nvars();
  Presentation a = plane("q", "Aq");

  Presentation same =
      sigma_deform(a, LinearMap::identity(2, nv), DeformDirection::ascending);
  CHECK(same.name() == "deform+(Aq)");
  CHECK(presentations_equal(same, a, 4));

  Presentation def =
      sigma_deform(a, diag2(S("p"), S("1")), DeformDirection::ascending);
  Tensor want = Tensor::basis(2, nv, MultiIndex{{0, 1}}) -
                Tensor::basis(2, nv, MultiIndex{{1, 0}}).scaled(S("q*p"));
  CHECK(def.ideal_component(2) == Subspace::span(2, 2, nv, {want}));
  CHECK(def.hilbert(3) == a.hilbert(3));

  Presentation back =
      sigma_deform(def, diag2(S("p"), S("1")), DeformDirection::descending);
  CHECK(presentations_equal(back, a, 4));

  CHECK_THROWS_AS(sigma_deform(a, diag2(S("0"), S("1")),
                               DeformDirection::ascending),
                  precondition_error);
  CHECK_THROWS_AS(sigma_deform(a, LinearMap::identity(3, nv),
                               DeformDirection::ascending),
                  precondition_error);
}

TEST_CASE("shift_conjugation entries and group law") {
  const int nv = kQP.nvars();
  LinearMap sa = diag2(S("p"), S("1"));
  LinearMap sb = shear();
  for (int r : {-2, -1, 0, 1, 2}) {
    LinearMap k = shift_conjugation(sa, sb, r);
    REQUIRE(k.rows() == 4);
    LinearMap sar = sa.power(r);
    LinearMap sbr = sb.power(-r);
    for (int p0 = 0; p0 < 2; ++p0)
      for (int q0 = 0; q0 < 2; ++q0)
        for (int u = 0; u < 2; ++u)
          for (int v = 0; v < 2; ++v)
            CHECK(k.at(p0 * 2 + q0, u * 2 + v) ==
                  sar.at(p0, u) * sbr.at(v, q0));
  }
  CHECK(shift_conjugation(sa, sb, 0) == LinearMap::identity(4, nv));
  CHECK(shift_conjugation(sa, sa, 1) * shift_conjugation(sa, sa, 2) ==
        shift_conjugation(sa, sa, 3));
}

TEST_CASE("factorizable_tau_hat is b-diagonal with conjugated z block") {
  LinearMap sa = diag2(S("p"), S("1"));
  LinearMap sb = diag2(S("q"), S("1"));
  LinearMap tau = factorizable_tau_hat(FactorizableTwist{sa, sb});
  REQUIRE(tau.rows() == 8);
  LinearMap k1 = shift_conjugation(sa, sb, 1);
  for (int b2 = 0; b2 < 2; ++b2)
    for (int z2 = 0; z2 < 4; ++z2)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int z1 = 0; z1 < 4; ++z1) {
          const Scalar& got = tau.at(b2 * 4 + z2, b1 * 4 + z1);
          if (b1 == b2)
            CHECK(got == k1.at(z2, z1));
          else
            CHECK(got.is_zero());
        }
  CHECK_THROWS_AS(factorizable_tau_hat(
                      FactorizableTwist{diag2(S("0"), S("1")), sb}),
                  precondition_error);
}

TEST_CASE("hom_upsilon with identity twist is the plain hom object") {
  const int nv = kQP.nvars();
  Presentation a = plane("q", "Aq");
  Presentation b = plane("p", "Bp");
  FactorizableTwist tw{LinearMap::identity(2, nv), LinearMap::identity(2, nv)};
  HomObject h = hom_upsilon(b, a, tw, 4);
  CHECK(h.twisted);
  CHECK(h.pres.name() == "twhom(Bp,Aq)");
  CHECK(presentations_equal(h.source, b, 4));
  CHECK(presentations_equal(h.target, a, 4));
  HomObject plain = hom_object(b, a);
  CHECK(presentations_equal(h.pres, plain.pres, 4));
}

TEST_CASE("hom_upsilon stable path is the hom of the deformed pair") {
  Presentation a = plane("q", "Aq");
  Presentation b = plane("p", "Bp");
  LinearMap sa = diag2(S("p"), S("1"));
  LinearMap sb = diag2(S("q"), S("1"));
  FactorizableTwist tw{sa, sb};
  REQUIRE(is_stable_under(a, sa, 4));
  REQUIRE(is_stable_under(b, sb, 4));
  HomObject h = hom_upsilon(b, a, tw, 4);
  Presentation ad = sigma_deform(a, sa, DeformDirection::ascending);
  Presentation bd = sigma_deform(b, sb, DeformDirection::ascending);
  HomObject plaind = hom_object(bd, ad);
  CHECK(presentations_equal(h.pres, plaind.pres, 4));
}

TEST_CASE("shift family agrees with the stable path on stable input") {
  Presentation a = plane("q", "Aq");
  Presentation b = plane("p", "Bp");
  FactorizableTwist tw{diag2(S("p"), S("1")), diag2(S("q"), S("1"))};
  HomObject stable = hom_upsilon(b, a, tw, 3);
  HomObject family = hom_upsilon_shift_family(b, a, tw, 3, 0);
  CHECK(components_equal(stable.pres, family.pres, 3));
}

TEST_CASE("bialgebra structure survives the twist on end objects") {
  Presentation a = plane("q", "Aq");
  HomObject diag_end =
      hom_upsilon(a, a, FactorizableTwist{diag2(S("p"), S("1")),
                                          diag2(S("p"), S("1"))},
                  3);
  IdentityReport r1 = bialgebra_checks(diag_end, 3);
  CHECK(r1.all_passed);
  HomObject shear_end =
      hom_upsilon(a, a, FactorizableTwist{shear(), shear()}, 3);
  IdentityReport r2 = bialgebra_checks(shear_end, 3);
  CHECK(r2.all_passed);
}

TEST_CASE("saturation matches the closed form for factorizable twists") {
  Presentation a = plane("q", "Aq");
  Presentation b = plane("p", "Bp");

  SUBCASE("diagonal symmetries") {
    FactorizableTwist tw{diag2(S("p"), S("1")), diag2(S("q"), S("1"))};
    LinearMap tau = factorizable_tau_hat(tw);
    HomObject sat = saturate_hom_general(b, a, tau, 3);
    HomObject closed = hom_upsilon(b, a, tw, 3);
    CHECK(components_equal(sat.pres, closed.pres, 3));
    CHECK(sat.pres.name() == "sathom(Bp,Aq)");
  }

  SUBCASE("shear symmetry outside the stability locus") {
    const int nv = kQP.nvars();
    REQUIRE_FALSE(is_stable_under(a, shear(), 3));
    FactorizableTwist tw{shear(), LinearMap::identity(2, nv)};
    LinearMap tau = factorizable_tau_hat(tw);
    HomObject sat = saturate_hom_general(b, a, tau, 3);
    HomObject closed = hom_upsilon(b, a, tw, 3);
    CHECK(components_equal(sat.pres, closed.pres, 3));
  }

  SUBCASE("identity twist recovers the plain hom object") {
    const int nv = kQP.nvars();
    LinearMap tau = LinearMap::identity(8, nv);
    HomObject sat = saturate_hom_general(b, a, tau, 3);
    HomObject plain = hom_object(b, a);
    CHECK(components_equal(sat.pres, plain.pres, 3));
  }

  SUBCASE("free pair saturates to the free algebra") {
    Presentation fa = free_algebra("FA", {"x", "y"}, 4);
    Presentation fb = free_algebra("FB", {"u", "v"}, 4);
    LinearMap tau = factorizable_tau_hat(
        FactorizableTwist{diag2(S("p"), S("1")), diag2(S("q"), S("1"))});
    HomObject sat = saturate_hom_general(fb, fa, tau, 3);
    for (int d = 2; d <= 3; ++d)
      CHECK(sat.pres.ideal_component(d).dim() == 0);
  }
}

TEST_CASE("cocycle evaluation follows the inverse ladder") {
  const int nv = kQP.nvars();
  LinearMap sigma = diag2(S("p"), S("1"));
  Cocycle chi = make_cocycle(sigma);
  CHECK(chi.n == 2);
  CHECK(chi.orientation == CocycleOrientation::inverse_ladder);

  // chi(1 (x) z_i^j) is the counit delta.
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Scalar v = cocycle_eval(chi, MultiIndex::empty(),
                              MultiIndex::single(i * 2 + j));
      CHECK(v == (i == j ? S("1") : S("0")));
    }

  // Non-diagonal left words annihilate.
  CHECK(cocycle_eval(chi, MultiIndex{{1}}, MultiIndex{{0}}).is_zero());

  // Length-two diagonal left word: each right letter contributes a
  // sigma^{-2} entry; three diagonal letters give p^{-4}.
  MultiIndex left{{0, 0}};
  MultiIndex right{{0, 3, 0}};
  CHECK(cocycle_eval(chi, left, right) == S("p").pow(-4));
  CHECK(cocycle_inverse_eval(chi, left, right) == S("p").pow(4));
  // Off-diagonal right letter kills the diagonal ladder.
  CHECK(cocycle_eval(chi, left, MultiIndex{{1, 0, 0}}).is_zero());

  // Identity symmetry: the cocycle is the product of counits.
  Cocycle triv = make_cocycle(LinearMap::identity(2, nv));
  for (int d1 = 0; d1 <= 2; ++d1)
    for (int d2 = 0; d2 <= 2; ++d2)
      for (const MultiIndex& u : all_indices(4, d1))
        for (const MultiIndex& v : all_indices(4, d2)) {
          bool du = true, dv = true;
          for (int s : u.slots) du = du && (s / 2 == s % 2);
          for (int s : v.slots) dv = dv && (s / 2 == s % 2);
          Scalar want = (du && dv) ? S("1") : S("0");
          CHECK(cocycle_eval(triv, u, v) == want);
          CHECK(cocycle_inverse_eval(triv, u, v) == want);
        }

  CHECK_THROWS_AS(make_cocycle(diag2(S("0"), S("1"))), precondition_error);
}

TEST_CASE("the ladder orientation is fixed by the defining identities") {
  Presentation a = plane("q", "Aq");
  CHECK(resolve_cocycle_orientation(shear(), a) ==
        CocycleOrientation::inverse_ladder);
  CHECK(resolve_cocycle_orientation(diag2(S("p"), S("1")), a) ==
        CocycleOrientation::inverse_ladder);
  const int nv = kQP.nvars();
  CHECK(resolve_cocycle_orientation(LinearMap::identity(2, nv), a) ==
        CocycleOrientation::inverse_ladder);
}

TEST_CASE("mu_chi matches the shift conjugation closed form on free words") {
  const int nv = kQP.nvars();
  Presentation fa = free_algebra("F", {"x", "y"}, 4);
  HomObject fe = end_object(fa);
  for (const LinearMap& sigma : {diag2(S("p"), S("1")), shear()}) {
    Cocycle chi = make_cocycle(sigma);
    for (int r = 1; r <= 2; ++r)
      for (int s = 1; s <= 2; ++s) {
        LinearMap conj = shift_conjugation(sigma, sigma, -r);
        for (const MultiIndex& u : all_indices(4, r))
          for (const MultiIndex& v : all_indices(4, s)) {
            Tensor x = Tensor::basis(4, nv, u);
            Tensor y = Tensor::basis(4, nv, v);
            Tensor got = mu_chi(chi, fe, x, y);
            Tensor want =
                fe.pres.normal_form(x.concat(apply_all_slots(conj, y)));
            CHECK(got == want);
          }
      }
  }
}

TEST_CASE("mu_chi is unital and associative on the end object") {
  const int nv = kQP.nvars();
  Presentation a = plane("q", "Aq");
  HomObject e = end_object(a);
  Cocycle chi = make_cocycle(diag2(S("p"), S("1")));
  Tensor unit = Tensor::from_terms(4, 0, nv, {{MultiIndex::empty(), S("1")}});
  for (int z = 0; z < 4; ++z) {
    Tensor t = Tensor::basis(4, nv, MultiIndex::single(z));
    CHECK(mu_chi(chi, e, unit, t) == e.pres.normal_form(t));
    CHECK(mu_chi(chi, e, t, unit) == e.pres.normal_form(t));
  }
  for (int z1 = 0; z1 < 4; ++z1)
    for (int z2 = 0; z2 < 4; ++z2)
      for (int z3 = 0; z3 < 4; ++z3) {
        Tensor t1 = Tensor::basis(4, nv, MultiIndex::single(z1));
        Tensor t2 = Tensor::basis(4, nv, MultiIndex::single(z2));
        Tensor t3 = Tensor::basis(4, nv, MultiIndex::single(z3));
        CHECK(mu_chi(chi, e, mu_chi(chi, e, t1, t2), t3) ==
              mu_chi(chi, e, t1, mu_chi(chi, e, t2, t3)));
      }
}

TEST_CASE("m_chi collapses to a dressed product") {
  const int nv = kQP.nvars();
  Presentation a = plane("q", "Aq");
  LinearMap sigma = diag2(S("p"), S("1"));
  Cocycle chi = make_cocycle(sigma);
  LinearMap sm1 = sigma.power(-1);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Tensor x = Tensor::basis(2, nv, MultiIndex::single(i));
      Tensor y = Tensor::basis(2, nv, MultiIndex::single(j));
      CHECK(m_chi(chi, a, x, y) ==
            a.normal_form(x.concat(apply_all_slots(sm1, y))));
    }
  Cocycle triv = make_cocycle(LinearMap::identity(2, nv));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Tensor x = Tensor::basis(2, nv, MultiIndex::single(i));
      Tensor y = Tensor::basis(2, nv, MultiIndex::single(j));
      CHECK(m_chi(triv, a, x, y) == a.quotient_product(x, y));
    }
  // Associativity on generator triples.
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        Tensor x = Tensor::basis(2, nv, MultiIndex::single(i));
        Tensor y = Tensor::basis(2, nv, MultiIndex::single(j));
        Tensor z = Tensor::basis(2, nv, MultiIndex::single(k));
        CHECK(m_chi(chi, a, m_chi(chi, a, x, y), z) ==
              m_chi(chi, a, x, m_chi(chi, a, y, z)));
      }
}

TEST_CASE("cocycle_checks pass for a diagonal symmetry") {
  Presentation a = plane("q", "Aq");
  Cocycle chi = make_cocycle(diag2(S("p"), S("1")));
  IdentityReport rep = cocycle_checks(chi, a, 2);
  CHECK(rep.all_passed);
  CHECK(rep.items.size() == 4);

  const int nv = kQP.nvars();
  Cocycle triv = make_cocycle(LinearMap::identity(2, nv));
  CHECK(cocycle_checks(triv, a, 2).all_passed);
}

TEST_CASE("trivial cocycle reproduces the plain end and algebra") {
  const int nv = kQP.nvars();
  Presentation a = plane("q", "Aq");
  Cocycle triv = make_cocycle(LinearMap::identity(2, nv));
  Presentation ec = end_chi_presentation(triv, a, 3);
  HomObject e = end_object(a);
  CHECK(components_equal(ec, e.pres, 3));
  Presentation ac = algebra_chi(triv, a, 3);
  CHECK(presentations_equal(ac, a, 3));
}

TEST_CASE("twist equivalences hold for a stable diagonal symmetry") {
  Presentation a = plane("q", "Aq");
  LinearMap sigma = diag2(S("p"), S("1"));
  IdentityReport rep = twist_equivalences(a, sigma, 3);
  CHECK(rep.all_passed);
  CHECK(rep.items.size() == 3);
  CHECK_THROWS_AS(twist_equivalences(a, shear(), 3), precondition_error);
}

TEST_CASE("pair equivalence relates twisted hom to hom of twisted algebras") {
  Presentation a = plane("q", "Aq");
  Presentation b = plane("p", "Bp");
  IdentityReport rep = twist_equivalences_pair(b, diag2(S("q"), S("1")), a,
                                               diag2(S("p"), S("1")), 3);
  CHECK(rep.all_passed);
}

TEST_CASE("crossed product with the identity twisting has tensor dimensions") {
  const int nv = kQP.nvars();
  Presentation dz = plane("q", "Dq");
  Presentation b = plane("p", "Bp");
  Presentation c = crossed_product(dz, b, LinearMap::identity(4, nv), 4);
  CHECK(c.dim() == 4);
  for (int d = 0; d <= 4; ++d) {
    int want = 0;
    for (int i = 0; i <= d; ++i) want += dz.hilbert(i) * b.hilbert(d - i);
    CHECK(c.hilbert(d) == want);
  }
}

TEST_CASE("point checks on a crossed product ambient") {
  const int nv = kQP.nvars();
  Presentation a = plane("q", "Aq");
  Presentation b = plane("p", "Bp");
  FactorizableTwist tw{diag2(S("p"), S("1")), diag2(S("q"), S("1"))};
  LinearMap tau = factorizable_tau_hat(tw);
  HomObject sat = saturate_hom_general(b, a, tau, 2);
  // Rebuild the hom presentation with a cap wide enough for the ambient.
  std::map<int, std::vector<Tensor>> rels;
  rels[2] = sat.pres.ideal_component(2).basis();
  Presentation dz = Presentation::from_graded_relations(
      kQP, "Dz", sat.pres.gens(), rels, 4);
  Presentation c = crossed_product(dz, b, tau, 4);
  for (int d = 0; d <= 4; ++d) {
    int want = 0;
    for (int i = 0; i <= d; ++i) want += dz.hilbert(i) * b.hilbert(d - i);
    CHECK(c.hilbert(d) == want);
  }

  auto cletter = [&](int idx) {
    return Tensor::basis(c.dim(), nv, MultiIndex::single(idx));
  };
  std::vector<Tensor> b_imgs = {cletter(4), cletter(5)};
  std::vector<std::vector<Tensor>> h_imgs = {{cletter(0), cletter(1)},
                                             {cletter(2), cletter(3)}};

  SUBCASE("canonical images are a point and extend") {
    CPointReport rep = check_c_point(b, a, c, tau, b_imgs, h_imgs, 2);
    CHECK(rep.intertwines);
    CHECK(rep.extends_on_a);
    CHECK(rep.point_of_hom);
    CHECK(rep.equivalent);
  }

  SUBCASE("zero images are a trivial point") {
    Tensor z(c.dim(), 1, nv);
    std::vector<std::vector<Tensor>> zero_h = {{z, z}, {z, z}};
    CPointReport rep = check_c_point(b, a, c, tau, b_imgs, zero_h, 2);
    CHECK(rep.intertwines);
    CHECK(rep.extends_on_a);
    CHECK(rep.point_of_hom);
    CHECK(rep.equivalent);
  }

  SUBCASE("diagonal rescalings keep the equivalence") {
    std::vector<std::vector<Tensor>> scaled_h = {
        {cletter(0).scaled(S("q")), cletter(1).scaled(S("p"))},
        {cletter(2).scaled(S("p*q")), cletter(3).scaled(S("1/q"))}};
    CPointReport rep = check_c_point(b, a, c, tau, b_imgs, scaled_h, 2);
    CHECK(rep.intertwines);
    CHECK(rep.equivalent);
  }

  SUBCASE("random rescalings keep the equivalence") {
    // The four commutation scalars of this twisting are pairwise distinct,
    // so the admissible degree-one families are exactly the per-letter
    // rescalings; mixing letters is covered by the violation subcase.
    std::mt19937_64 rng(20260818u);
    std::uniform_int_distribution<int> pick(-2, 2);
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<std::vector<Tensor>> rand_h(2, std::vector<Tensor>());
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          rand_h[i].push_back(
              cletter(i * 2 + j).scaled(Scalar::from_int(pick(rng), nv)));
      CPointReport rep = check_c_point(b, a, c, tau, b_imgs, rand_h, 2);
      CHECK(rep.intertwines);
      CHECK(rep.equivalent);
    }
  }

  SUBCASE("images violating the crossing law throw") {
    std::vector<std::vector<Tensor>> bad_h = {{cletter(4), cletter(1)},
                                              {cletter(2), cletter(3)}};
    CHECK_THROWS_AS(check_c_point(b, a, c, tau, b_imgs, bad_h, 2),
                    precondition_error);
  }
}

TEST_CASE("semigroupoid laws hold for factorizable families") {
  const int nv = kQP.nvars();
  LinearMap s2 = diag2(S("p"), S("1"));
  LinearMap s3(3, 3, nv);
  s3.at(0, 0) = S("q");
  s3.at(1, 1) = S("1");
  s3.at(2, 2) = S("p");
  auto entry = [&](const LinearMap& sn, const LinearMap& sm, int m) {
    return LinearMap::identity(m, nv).kron(
        sn.kron(sm.inverse().transpose()));
  };
  GlobalCollectionSample g;
  g[{2, 2}] = entry(s2, s2, 2);
  g[{2, 3}] = entry(s2, s3, 3);
  g[{3, 2}] = entry(s3, s2, 2);
  g[{3, 3}] = entry(s3, s3, 3);
  IdentityReport rep = check_semigroupoid(g);
  CHECK(rep.all_passed);
  // Four shape items, four invertibility items, two counit items, and all
  // composable pairs with a present target.
  CHECK(rep.items.size() >= 14);

  GlobalCollectionSample ident;
  ident[{2, 2}] = LinearMap::identity(8, nv);
  CHECK(check_semigroupoid(ident).all_passed);

  GlobalCollectionSample broken;
  LinearMap t = entry(s2, s2, 2);
  t.at(3, 0) += S("1");
  broken[{2, 2}] = t;
  IdentityReport bad = check_semigroupoid(broken);
  CHECK_FALSE(bad.all_passed);
  bool witnessed = false;
  for (const IdentityCheck& item : bad.items)
    if (!item.passed && item.name.find("fails at") != std::string::npos)
      witnessed = true;
  CHECK(witnessed);
}

TEST_CASE("factor_tau recovers the symmetry from its pairing") {
  const int nv = kQP.nvars();

  SUBCASE("identity") {
    TauFactorization f = factor_tau(LinearMap::identity(8, nv), 2);
    REQUIRE(f.ok);
    CHECK(f.sigma == LinearMap::identity(2, nv));
    CHECK(f.sigma_bar == LinearMap::identity(2, nv));
  }

  SUBCASE("unipotent shear") {
    LinearMap sigma = shear();
    LinearMap tau = LinearMap::identity(2, nv).kron(
        sigma.kron(sigma.inverse().transpose()));
    TauFactorization f = factor_tau(tau, 2);
    REQUIRE(f.ok);
    CHECK(f.sigma == sigma);
    CHECK(f.sigma_bar == sigma.inverse());
  }

  SUBCASE("random round trips") {
    std::mt19937_64 rng(424242u);
    std::uniform_int_distribution<int> pick(-3, 3);
    auto random_invertible = [&](int n) {
      while (true) {
        LinearMap m(n, n, nv);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            m.at(i, j) = Scalar::from_int(pick(rng), nv);
        if (m.is_invertible()) return m;
      }
    };
    for (int trial = 0; trial < 20; ++trial) {
      LinearMap sigma = random_invertible(2);
      LinearMap tau = LinearMap::identity(2, nv).kron(
          sigma.kron(sigma.inverse().transpose()));
      TauFactorization f = factor_tau(tau, 2);
      REQUIRE(f.ok);
      CHECK(LinearMap::identity(2, nv).kron(
                f.sigma.kron(f.sigma_bar.transpose())) == tau);
    }
    for (int trial = 0; trial < 10; ++trial) {
      LinearMap sigma = random_invertible(3);
      LinearMap tau = LinearMap::identity(3, nv).kron(
          sigma.kron(sigma.inverse().transpose()));
      TauFactorization f = factor_tau(tau, 3);
      REQUIRE(f.ok);
      CHECK(LinearMap::identity(3, nv).kron(
                f.sigma.kron(f.sigma_bar.transpose())) == tau);
    }
    int rejected = 0;
    for (int trial = 0; trial < 20; ++trial) {
      LinearMap tau = random_invertible(8);
      TauFactorization f = factor_tau(tau, 2);
      if (!f.ok) ++rejected;
    }
    CHECK(rejected == 20);
  }

  SUBCASE("failure reasons name the broken stage") {
    CHECK(factor_tau(LinearMap::identity(7, nv), 2).reason == "wrong shape");
    LinearMap offdiag = LinearMap::identity(8, nv);
    offdiag.at(0, 4) = S("1");
    CHECK(factor_tau(offdiag, 2).reason == "tau is not b-diagonal");
    LinearMap sigma = diag2(S("p"), S("1"));
    LinearMap block = sigma.kron(sigma.inverse().transpose());
    LinearMap twoblocks(8, 8, nv);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        twoblocks.at(i, j) = block.at(i, j);
        twoblocks.at(4 + i, 4 + j) = block.at(i, j) * S("2");
      }
    CHECK(factor_tau(twoblocks, 2).reason == "theta depends on the b index");
  }
}

TEST_CASE("braid suite identities for the standard matrix") {
  FrtReport rep = frt_suite(kQP, LinearMap::identity(2, kQP.nvars()), 3);
  CHECK(rep.checks.all_passed);
  CHECK(rep.a_r.name() == "A_R");
  CHECK(rep.matrices.ideal_component(2).dim() == 6);
  // With the identity symmetry the conjugated plane is the plane itself.
  CHECK(presentations_equal(rep.a_r_phi, rep.a_r, 3));
}

TEST_CASE("braid suite with a diagonal symmetry yields the two-parameter plane") {
  const int nv = kQP.nvars();
  LinearMap phi = diag2(S("p"), S("1/p"));
  FrtReport rep = frt_suite(kQP, phi, 2);
  CHECK(rep.checks.all_passed);
  Tensor want = Tensor::basis(2, nv, MultiIndex{{0, 1}}) -
                Tensor::basis(2, nv, MultiIndex{{1, 0}}).scaled(S("q*p^2"));
  CHECK(rep.a_r_phi.ideal_component(2) ==
        Subspace::span(2, 2, nv, {want}));

  FieldSpec no_q({"t"});
  CHECK_THROWS_AS(frt_suite(no_q, LinearMap::identity(2, 1), 2),
                  precondition_error);
}

TEST_CASE("nongraded crossing probe detects the forced obstruction") {
  const int nv = kQP.nvars();
  LinearMap sp = diag2(S("p"), S("1"));
  LinearMap id = LinearMap::identity(2, nv);

  SUBCASE("one symmetry for the whole collection fails") {
    CollapseReport rep = nongraded_crossing_probe(S("1"), sp, sp, sp);
    CHECK(rep.forced_collapse);
    CHECK(rep.surviving_dim == 2);
    CHECK(rep.obstructed);
    CHECK(rep.failure_detected);
  }

  SUBCASE("vanishing constant keeps the grading and passes") {
    CollapseReport rep = nongraded_crossing_probe(S("0"), sp, sp, sp);
    CHECK_FALSE(rep.forced_collapse);
    CHECK(rep.surviving_dim == 4);
    CHECK_FALSE(rep.failure_detected);
  }

  SUBCASE("identity collection passes") {
    CollapseReport rep = nongraded_crossing_probe(S("1"), id, id, id);
    CHECK_FALSE(rep.forced_collapse);
    CHECK_FALSE(rep.failure_detected);
  }

  SUBCASE("a collapse with complementary support is not obstructed") {
    CollapseReport rep = nongraded_crossing_probe(S("1"), id, sp, id);
    CHECK(rep.forced_collapse);
    CHECK(rep.surviving_dim == 2);
    CHECK_FALSE(rep.obstructed);
    CHECK_FALSE(rep.failure_detected);
  }
}

}  // namespace
}  // namespace qls
