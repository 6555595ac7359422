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

#ifndef QLS_SCALAR_HPP
#define QLS_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qls/errors.hpp"

namespace qls {

using Rat = boost::multiprecision::cpp_rational;

// The coefficient field of a session: the fraction field of Q[q, p, ...]
// with a fixed, ordered list of indeterminate names (empty list = plain Q).
// The list is fixed once per session; the lexicographic monomial order used
// everywhere follows the declared order.
struct FieldSpec {
  std::vector<std::string> indeterminates;

  FieldSpec() = default;
  explicit FieldSpec(std::vector<std::string> names);

  int nvars() const { return static_cast<int>(indeterminates.size()); }
  std::optional<int> index_of(const std::string& name) const;

  bool operator==(const FieldSpec&) const = default;
};

// Exponent vector of a monomial. Length equals the session's nvars; all
// entries non-negative.
struct Mono {
  std::vector<int32_t> exp;

  static Mono one(int nvars) { return Mono{std::vector<int32_t>(nvars, 0)}; }
  int degree() const;
  bool is_one() const;

  bool operator==(const Mono&) const = default;
};

// Lexicographic order on exponent vectors (declared indeterminate order).
bool mono_lex_less(const Mono& a, const Mono& b);
Mono mono_mul(const Mono& a, const Mono& b);
// Componentwise a-b; nullopt when b does not divide a.
std::optional<Mono> mono_div(const Mono& a, const Mono& b);

// Multivariate polynomial over Q. Terms are kept lex-descending (leading
// term first) with no zero coefficients; nvars is carried explicitly so the
// zero polynomial still knows its ambient ring.
class Poly {
 public:
  Poly() : nvars_(0) {}
  explicit Poly(int nvars) : nvars_(nvars) {}

  static Poly constant(const Rat& c, int nvars);
  static Poly variable(int index, int nvars);
  // From an arbitrary term list (need not be sorted or combined).
  static Poly from_terms(std::vector<std::pair<Mono, Rat>> terms, int nvars);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Total degree of the leading term; -1 for the zero polynomial.
  int degree() const;
  const std::vector<std::pair<Mono, Rat>>& terms() const { return terms_; }
  const Mono& leading_mono() const;
  const Rat& leading_coeff() const;

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly scaled(const Rat& c) const;
  Poly pow(int e) const;  // e >= 0

  bool operator==(const Poly&) const = default;

 private:
  int nvars_;
  std::vector<std::pair<Mono, Rat>> terms_;
};

// gcd up to a unit (nonzero rational) factor; gcd(0,0) = 0.
Poly poly_gcd(const Poly& a, const Poly& b);
// Exact quotient a/b; throws internal_check_error when b does not divide a.
Poly poly_divexact(const Poly& a, const Poly& b);

// Element of the fraction field in canonical form: num/den coprime, den
// nonzero with lex-leading coefficient 1 (so den == 1 exactly when the
// element is polynomial). Equality is plain structural comparison.
class Scalar {
 public:
  Scalar() : num_(0), den_(Poly::constant(1, 0)) {}
  explicit Scalar(int nvars)
      : num_(nvars), den_(Poly::constant(1, nvars)) {}
  Scalar(Poly num, Poly den);  // canonicalizes; throws on zero den

  static Scalar from_int(long v, int nvars);
  static Scalar from_rat(const Rat& v, int nvars);
  static Scalar from_poly(Poly p);
  static Scalar zero(int nvars) { return Scalar(nvars); }
  static Scalar one(int nvars) { return from_int(1, nvars); }
  static Scalar variable(int index, int nvars);

  int nvars() const { return num_.nvars(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;  // throws on zero divisor
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }
  Scalar inv() const;       // throws on zero
  Scalar pow(int e) const;  // negative e inverts first

  bool operator==(const Scalar&) const = default;

 private:
  // num/den already coprime; only normalizes the denominator's leading
  // coefficient. Keeps ring operations off the generic gcd path.
  static Scalar make_reduced(Poly num, Poly den);

  Poly num_, den_;
};

// Parses the scalar grammar
//   scalar := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' ['-'] int)?
//   atom   := int | name | '(' scalar ')'
// against the given field. Throws parse_error (with byte position) on
// malformed text or unknown names, and precondition_error on division by a
// scalar that simplifies to zero.
Scalar scalar_parse(const std::string& text, const FieldSpec& field);

// Canonical text form; scalar_parse(scalar_format(x)) == x.
std::string scalar_format(const Scalar& x, const FieldSpec& field);
std::string poly_format(const Poly& p, const FieldSpec& field);

}  // namespace qls

#endif  // QLS_SCALAR_HPP
