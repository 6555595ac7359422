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

#include "qls/scalar.hpp"

#include <doctest.h>

#include <random>

using namespace qls;

namespace {

const FieldSpec kQP({"q", "p"});

Scalar S(const std::string& text) { return scalar_parse(text, kQP); }

// Random nonzero-denominator scalar with small polynomial parts. Degree and
// coefficient ranges are kept tiny so that properties exercise the gcd and
// normalization paths rather than blow up.
Scalar random_scalar(std::mt19937& rng, bool nonzero = false) {
  std::uniform_int_distribution<int> coeff(-3, 3), e(0, 2), nterms(1, 3);
  auto random_poly = [&](bool force_nonzero) {
    Poly p(kQP.nvars());
    for (int t = nterms(rng); t > 0; --t) {
      Mono m = Mono::one(kQP.nvars());
      m.exp[0] = e(rng);
      m.exp[1] = e(rng);
      p += Poly::from_terms({{m, Rat(coeff(rng))}}, kQP.nvars());
    }
    if (force_nonzero && p.is_zero()) p = Poly::constant(1, kQP.nvars());
    return p;
  };
  Poly num = random_poly(nonzero);
  Poly den = random_poly(true);
  return Scalar(std::move(num), std::move(den));
}

}  // namespace

TEST_CASE("scalar parse normalizes to canonical form") {
  CHECK(S("(q^2-1)/(q-1)") == S("q+1"));
  CHECK(S("1/2 + 1/3") == S("5/6"));
  CHECK(S("(q+p)^2*(q-p)/((q+p)*(q-p))") == S("q+p"));
  CHECK(S("(q^2-1)/(q+1)") == S("q-1"));
  CHECK(S("q^0") == Scalar::one(2));
  CHECK(S("0") == Scalar::zero(2));
  CHECK(S("-q + q") == Scalar::zero(2));
  CHECK(S("q^-2") == S("1/q^2"));
  CHECK(S("2*q/(2*q^2)") == S("1/q"));
  // Denominator leading coefficient is normalized to 1.
  CHECK(S("1/(2*q-2)") == S("(1/2)/(q-1)"));
}

TEST_CASE("scalar parse reports errors with positions") {
  CHECK_THROWS_AS(S("1/(q-q)"), parse_error);
  CHECK_THROWS_AS(S("q +"), parse_error);
  CHECK_THROWS_AS(S("(q"), parse_error);
  CHECK_THROWS_AS(S("q r"), parse_error);
  CHECK_THROWS_AS(S("z+1"), parse_error);  // unknown parameter
  CHECK_THROWS_AS(S(""), parse_error);
  try {
    S("q + z");
    CHECK(false);
  } catch (const parse_error& e) {
    CHECK(e.pos == 4);
  }
}

TEST_CASE("scalar arithmetic matches field axioms on examples") {
  CHECK(S("q").inv() == S("1/q"));
  CHECK(S("q+1") * S("q-1") == S("q^2-1"));
  CHECK(S("q").pow(-2) == S("1/q^2"));
  CHECK(S("q/p") + S("p/q") == S("(q^2+p^2)/(q*p)"));
  CHECK(-S("q-1") == S("1-q"));
  CHECK_THROWS_AS(Scalar::zero(2).inv(), precondition_error);
  CHECK_THROWS_AS(S("1") / Scalar::zero(2), precondition_error);
}

TEST_CASE("random scalars satisfy ring and field identities") {
  std::mt19937 rng(20260818);
  for (int i = 0; i < 60; ++i) {
    Scalar a = random_scalar(rng);
    Scalar b = random_scalar(rng);
    Scalar c = random_scalar(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a + b == b + a);
    Scalar nz = random_scalar(rng, /*nonzero=*/true);
    CHECK(nz * nz.inv() == Scalar::one(2));
    CHECK(nz / nz == Scalar::one(2));
  }
}

TEST_CASE("format and parse round trip") {
  std::mt19937 rng(97);
  for (int i = 0; i < 80; ++i) {
    Scalar a = random_scalar(rng);
    CHECK(scalar_parse(scalar_format(a, kQP), kQP) == a);
  }
  CHECK(scalar_format(S("q+1"), kQP) == "q+1");
  CHECK(scalar_format(S("1/q^2"), kQP) == "1/q^2");
  CHECK(scalar_format(S("5/6"), kQP) == "5/6");
  CHECK(scalar_format(S("(q+1)/q"), kQP) == "(q+1)/q");
  CHECK(scalar_format(S("1/(q*p)"), kQP) == "1/(q*p)");
  CHECK(scalar_format(S("-q+1"), kQP) == "-q+1");
  CHECK(scalar_format(Scalar::zero(2), kQP) == "0");
  CHECK(scalar_format(S("q^2*p^3*2"), kQP) == "2*q^2*p^3");
}

TEST_CASE("polynomial gcd handles shared multivariate factors") {
  // (q*p + q) / (p + 1) = q.
  CHECK(S("(q*p+q)/(p+1)") == S("q"));
  // Content in one variable only.
  CHECK(S("(q^2*p^2 - q^2)/(q*p - q)") == S("q*p+q"));
  Poly a = S("(q+p)^2").num();
  Poly b = (S("q+p") * S("q-p")).num();
  Poly g = poly_gcd(a, b);
  // gcd is q+p up to a rational unit.
  CHECK(poly_divexact(a, g).degree() == 1);
  CHECK(poly_divexact(b, g).degree() == 1);
}
