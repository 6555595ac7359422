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

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>
#include <sstream>

namespace qls {

FieldSpec::FieldSpec(std::vector<std::string> names)
    : indeterminates(std::move(names)) {
  for (std::size_t i = 0; i < indeterminates.size(); ++i)
    for (std::size_t j = i + 1; j < indeterminates.size(); ++j)
      if (indeterminates[i] == indeterminates[j])
        throw precondition_error("duplicate indeterminate '" +
                                 indeterminates[i] + "'");
}

std::optional<int> FieldSpec::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < indeterminates.size(); ++i)
    if (indeterminates[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

int Mono::degree() const {
  int d = 0;
  for (int32_t e : exp) d += e;
  return d;
}

bool Mono::is_one() const {
  return std::all_of(exp.begin(), exp.end(), [](int32_t e) { return e == 0; });
}

bool mono_lex_less(const Mono& a, const Mono& b) {
  assert(a.exp.size() == b.exp.size());
  for (std::size_t i = 0; i < a.exp.size(); ++i)
    if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i];
  return false;
}

Mono mono_mul(const Mono& a, const Mono& b) {
  assert(a.exp.size() == b.exp.size());
  Mono r = a;
  for (std::size_t i = 0; i < b.exp.size(); ++i) r.exp[i] += b.exp[i];
  return r;
}

std::optional<Mono> mono_div(const Mono& a, const Mono& b) {
  assert(a.exp.size() == b.exp.size());
  Mono r = a;
  for (std::size_t i = 0; i < b.exp.size(); ++i) {
    r.exp[i] -= b.exp[i];
    if (r.exp[i] < 0) return std::nullopt;
  }
  return r;
}

namespace {

// Sorts lex-descending and drops zero coefficients.
std::vector<std::pair<Mono, Rat>> normalize_terms(
    std::vector<std::pair<Mono, Rat>> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) {
              return mono_lex_less(b.first, a.first);
            });
  std::vector<std::pair<Mono, Rat>> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
      if (out.back().second == 0) out.pop_back();
    } else if (t.second != 0) {
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace

Poly Poly::constant(const Rat& c, int nvars) {
  Poly p(nvars);
  if (c != 0) p.terms_.emplace_back(Mono::one(nvars), c);
  return p;
}

Poly Poly::variable(int index, int nvars) {
  assert(index >= 0 && index < nvars);
  Mono m = Mono::one(nvars);
  m.exp[index] = 1;
  Poly p(nvars);
  p.terms_.emplace_back(std::move(m), Rat(1));
  return p;
}

Poly Poly::from_terms(std::vector<std::pair<Mono, Rat>> terms, int nvars) {
  Poly p(nvars);
  p.terms_ = normalize_terms(std::move(terms));
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one());
}

int Poly::degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.first.degree());
  return d;
}

const Mono& Poly::leading_mono() const {
  assert(!terms_.empty());
  return terms_.front().first;
}

const Rat& Poly::leading_coeff() const {
  assert(!terms_.empty());
  return terms_.front().second;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  assert(nvars_ == o.nvars_);
  // Merge of two lex-descending term lists.
  Poly r(nvars_);
  r.terms_.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() && j < o.terms_.size()) {
    if (terms_[i].first == o.terms_[j].first) {
      Rat c = terms_[i].second + o.terms_[j].second;
      if (c != 0) r.terms_.emplace_back(terms_[i].first, std::move(c));
      ++i, ++j;
    } else if (mono_lex_less(o.terms_[j].first, terms_[i].first)) {
      r.terms_.push_back(terms_[i++]);
    } else {
      r.terms_.push_back(o.terms_[j++]);
    }
  }
  for (; i < terms_.size(); ++i) r.terms_.push_back(terms_[i]);
  for (; j < o.terms_.size(); ++j) r.terms_.push_back(o.terms_[j]);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  assert(nvars_ == o.nvars_);
  std::vector<std::pair<Mono, Rat>> prod;
  prod.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : o.terms_)
      prod.emplace_back(mono_mul(a.first, b.first), a.second * b.second);
  return from_terms(std::move(prod), nvars_);
}

Poly Poly::scaled(const Rat& c) const {
  if (c == 0) return Poly(nvars_);
  Poly r = *this;
  for (auto& t : r.terms_) t.second *= c;
  return r;
}

Poly Poly::pow(int e) const {
  assert(e >= 0);
  Poly r = Poly::constant(1, nvars_);
  Poly base = *this;
  for (; e > 0; e >>= 1) {
    if (e & 1) r *= base;
    if (e > 1) base *= base;
  }
  return r;
}

Poly poly_divexact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw internal_check_error("exact division by zero");
  Poly rem = a;
  std::vector<std::pair<Mono, Rat>> q;
  while (!rem.is_zero()) {
    auto m = mono_div(rem.leading_mono(), b.leading_mono());
    if (!m)
      throw internal_check_error("inexact polynomial division");
    Rat c = rem.leading_coeff() / b.leading_coeff();
    q.emplace_back(*m, c);
    Poly t(a.nvars());
    t = Poly::from_terms({{*m, c}}, a.nvars());
    rem -= t * b;
  }
  return Poly::from_terms(std::move(q), a.nvars());
}

namespace {

// A polynomial viewed as univariate in variable `v` with Poly coefficients
// (the coefficients still live in the full ring but do not use `v`).
std::vector<Poly> univariate_in(const Poly& p, int v) {
  int deg = 0;
  for (const auto& t : p.terms()) deg = std::max(deg, (int)t.first.exp[v]);
  std::vector<std::vector<std::pair<Mono, Rat>>> buckets(deg + 1);
  for (const auto& t : p.terms()) {
    Mono m = t.first;
    int e = m.exp[v];
    m.exp[v] = 0;
    buckets[e].emplace_back(std::move(m), t.second);
  }
  std::vector<Poly> coeffs;
  coeffs.reserve(buckets.size());
  for (auto& b : buckets)
    coeffs.push_back(Poly::from_terms(std::move(b), p.nvars()));
  while (coeffs.size() > 1 && coeffs.back().is_zero()) coeffs.pop_back();
  return coeffs;
}

Poly from_univariate(const std::vector<Poly>& coeffs, int v, int nvars) {
  std::vector<std::pair<Mono, Rat>> terms;
  for (std::size_t e = 0; e < coeffs.size(); ++e)
    for (const auto& t : coeffs[e].terms()) {
      Mono m = t.first;
      m.exp[v] += static_cast<int32_t>(e);
      terms.emplace_back(std::move(m), t.second);
    }
  return Poly::from_terms(std::move(terms), nvars);
}

int uni_deg(const std::vector<Poly>& u) {
  return static_cast<int>(u.size()) - 1;
}

bool uni_is_zero(const std::vector<Poly>& u) {
  return u.size() == 1 && u[0].is_zero();
}

std::vector<Poly> uni_trim(std::vector<Poly> u) {
  while (u.size() > 1 && u.back().is_zero()) u.pop_back();
  return u;
}

std::vector<Poly> uni_scale(const std::vector<Poly>& u, const Poly& c) {
  std::vector<Poly> r;
  r.reserve(u.size());
  for (const auto& x : u) r.push_back(x * c);
  return uni_trim(std::move(r));
}

std::vector<Poly> uni_divexact_coeff(const std::vector<Poly>& u,
                                     const Poly& c) {
  std::vector<Poly> r;
  r.reserve(u.size());
  for (const auto& x : u)
    r.push_back(x.is_zero() ? x : poly_divexact(x, c));
  return r;
}

// Pseudo-remainder of A by B in one variable: lc(B)^(deg A - deg B + 1) * A
// reduced by B until deg < deg B. Coefficients stay in the polynomial ring.
std::vector<Poly> uni_prem(std::vector<Poly> A, const std::vector<Poly>& B,
                           int nvars) {
  int dB = uni_deg(B);
  const Poly& lcB = B.back();
  int steps = uni_deg(A) - dB + 1;
  while (!uni_is_zero(A) && uni_deg(A) >= dB) {
    int shift = uni_deg(A) - dB;
    Poly lcA = A.back();
    // A = lcB*A - lcA*x^shift*B
    std::vector<Poly> next(A.size(), Poly(nvars));
    for (std::size_t i = 0; i < A.size(); ++i) next[i] = A[i] * lcB;
    for (std::size_t i = 0; i < B.size(); ++i)
      next[i + shift] -= B[i] * lcA;
    A = uni_trim(std::move(next));
    --steps;
  }
  // Match the standard prem normalization even when leading terms cancelled
  // early, so the subresultant divisions below stay exact.
  for (; steps > 0; --steps) A = uni_scale(A, lcB);
  return A;
}

Poly content_of(const std::vector<Poly>& u) {
  Poly g(u.empty() ? 0 : u[0].nvars());
  for (const auto& c : u) g = poly_gcd(g, c);
  return g;
}

}  // namespace

// Subresultant PRS gcd, recursing on the number of variables that actually
// occur. Result is defined up to a nonzero rational factor.
Poly poly_gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const int nvars = a.nvars();
  assert(nvars == b.nvars());
  // Nonzero constants are units.
  if (a.is_constant() || b.is_constant()) return Poly::constant(1, nvars);
  // A monomial's gcd with f is the largest monomial dividing every term.
  if (a.terms().size() == 1 || b.terms().size() == 1) {
    const Poly& m = a.terms().size() == 1 ? a : b;
    const Poly& f = a.terms().size() == 1 ? b : a;
    Mono g = m.leading_mono();
    for (const auto& t : f.terms())
      for (int i = 0; i < nvars; ++i)
        g.exp[static_cast<std::size_t>(i)] =
            std::min(g.exp[static_cast<std::size_t>(i)],
                     t.first.exp[static_cast<std::size_t>(i)]);
    return Poly::from_terms({{g, Rat(1)}}, nvars);
  }
  // Main variable: first one occurring in either operand. None -> constants,
  // which are units over Q.
  int v = -1;
  for (int i = 0; i < nvars && v < 0; ++i) {
    for (const auto& t : a.terms())
      if (t.first.exp[i] > 0) { v = i; break; }
    if (v < 0)
      for (const auto& t : b.terms())
        if (t.first.exp[i] > 0) { v = i; break; }
  }
  if (v < 0) return Poly::constant(1, nvars);

  std::vector<Poly> A = univariate_in(a, v);
  std::vector<Poly> B = univariate_in(b, v);
  if (uni_deg(A) < uni_deg(B)) std::swap(A, B);

  Poly contA = content_of(A), contB = content_of(B);
  Poly cont_gcd = poly_gcd(contA, contB);
  A = uni_divexact_coeff(A, contA);
  B = uni_divexact_coeff(B, contB);

  Poly g = Poly::constant(1, nvars);
  Poly h = Poly::constant(1, nvars);
  while (true) {
    int delta = uni_deg(A) - uni_deg(B);
    std::vector<Poly> R = uni_prem(A, B, nvars);
    if (uni_is_zero(R)) break;
    if (uni_deg(R) == 0) {
      // Coprime primitive parts.
      B = {Poly::constant(1, nvars)};
      break;
    }
    A = std::move(B);
    Poly divisor = g * h.pow(delta);
    B = uni_divexact_coeff(R, divisor);
    g = A.back();
    if (delta > 0)
      h = delta == 1 ? g : poly_divexact(g.pow(delta), h.pow(delta - 1));
  }
  Poly pp = from_univariate(uni_divexact_coeff(B, content_of(B)), v, nvars);
  return cont_gcd * pp;
}

Scalar::Scalar(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw precondition_error("zero denominator");
  assert(num_.nvars() == den_.nvars());
  if (num_.is_zero()) {
    den_ = Poly::constant(1, den_.nvars());
    return;
  }
  // gcd is only needed when both sides are non-constant; a constant on
  // either side is a unit times the remaining normalization below.
  if (!num_.is_constant() && !den_.is_constant()) {
    Poly g = poly_gcd(num_, den_);
    if (!(g.terms().size() == 1 && g.leading_mono().is_one())) {
      num_ = poly_divexact(num_, g);
      den_ = poly_divexact(den_, g);
    }
  }
  const Rat& lc = den_.leading_coeff();
  if (lc != 1) {
    Rat inv_lc = Rat(1) / lc;
    num_ = num_.scaled(inv_lc);
    den_ = den_.scaled(inv_lc);
  }
}

Scalar Scalar::from_int(long v, int nvars) {
  return from_rat(Rat(v), nvars);
}

Scalar Scalar::from_rat(const Rat& v, int nvars) {
  Scalar s(nvars);
  s.num_ = Poly::constant(v, nvars);
  return s;
}

Scalar Scalar::from_poly(Poly p) {
  int nv = p.nvars();
  Scalar s(nv);
  s.num_ = std::move(p);
  return s;
}

Scalar Scalar::variable(int index, int nvars) {
  return from_poly(Poly::variable(index, nvars));
}

bool Scalar::is_one() const {
  return den_.is_constant() && !num_.is_zero() && num_.is_constant() &&
         num_.leading_coeff() == 1 && den_.leading_coeff() == 1;
}

Scalar Scalar::make_reduced(Poly num, Poly den) {
  Scalar s(num.nvars());
  if (num.is_zero()) return s;
  const Rat& lc = den.leading_coeff();
  if (lc != 1) {
    Rat inv_lc = Rat(1) / lc;
    num = num.scaled(inv_lc);
    den = den.scaled(inv_lc);
  }
  s.num_ = std::move(num);
  s.den_ = std::move(den);
  return s;
}

// Sum and product keep gcd calls on the small original components instead
// of their products (TAOCP 4.5.1); both operands are canonical, so the
// results below are already in lowest terms.
Scalar Scalar::operator+(const Scalar& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  Poly g0 = poly_gcd(den_, o.den_);
  if (g0.is_constant()) {
    Poly t = num_ * o.den_ + o.num_ * den_;
    if (t.is_zero()) return Scalar(nvars());
    return make_reduced(std::move(t), den_ * o.den_);
  }
  Poly d1p = poly_divexact(den_, g0);
  Poly d2p = poly_divexact(o.den_, g0);
  Poly t = num_ * d2p + o.num_ * d1p;
  if (t.is_zero()) return Scalar(nvars());
  Poly g1 = poly_gcd(t, g0);
  if (!g1.is_constant()) {
    t = poly_divexact(t, g1);
    g0 = poly_divexact(g0, g1);
  }
  return make_reduced(std::move(t), d1p * d2p * g0);
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
  if (is_zero() || o.is_zero()) return Scalar(nvars());
  Poly g1 = poly_gcd(num_, o.den_);
  Poly g2 = poly_gcd(o.num_, den_);
  bool u1 = g1.is_constant(), u2 = g2.is_constant();
  Poly n1 = u1 ? num_ : poly_divexact(num_, g1);
  Poly d2 = u1 ? o.den_ : poly_divexact(o.den_, g1);
  Poly n2 = u2 ? o.num_ : poly_divexact(o.num_, g2);
  Poly d1 = u2 ? den_ : poly_divexact(den_, g2);
  return make_reduced(n1 * n2, d1 * d2);
}

Scalar Scalar::operator/(const Scalar& o) const {
  if (o.is_zero()) throw precondition_error("division by zero scalar");
  if (is_zero()) return Scalar(nvars());
  return *this * o.inv();
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.num_ = -r.num_;
  return r;
}

Scalar Scalar::inv() const {
  if (is_zero()) throw precondition_error("inversion of zero scalar");
  return make_reduced(den_, num_);  // swap preserves coprimality
}

Scalar Scalar::pow(int e) const {
  if (e < 0) return inv().pow(-e);
  Scalar r = Scalar::one(nvars());
  Scalar base = *this;
  for (; e > 0; e >>= 1) {
    if (e & 1) r *= base;
    if (e > 1) base *= base;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct ScalarParser {
  const std::string& s;
  const FieldSpec& field;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw parse_error(msg + " at position " + std::to_string(pos), pos);
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) { ++pos; return true; }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  long parse_int_literal() {
    skip_ws();
    bool neg = false;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
      neg = s[pos] == '-';
      ++pos;
    }
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      fail("expected integer");
    long v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + (s[pos] - '0');
      if (v > 1000000000L) fail("integer literal too large");
      ++pos;
    }
    return neg ? -v : v;
  }

  Scalar parse_atom() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      Scalar v = parse_scalar();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return Scalar::from_int(parse_int_literal(), field.nvars());
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) ||
              s[pos] == '_'))
        ++pos;
      std::string name = s.substr(start, pos - start);
      auto idx = field.index_of(name);
      if (!idx) {
        pos = start;
        fail("unknown parameter '" + name + "'");
      }
      return Scalar::variable(*idx, field.nvars());
    }
    fail("unexpected character");
  }

  Scalar parse_factor() {
    Scalar base = parse_atom();
    if (eat('^')) {
      long e = parse_int_literal();
      if (e < -64 || e > 64) fail("exponent out of range");
      return base.pow(static_cast<int>(e));
    }
    return base;
  }

  Scalar parse_term() {
    Scalar v = parse_factor();
    while (true) {
      if (eat('*')) {
        v *= parse_factor();
      } else if (peek() == '/') {
        ++pos;
        Scalar d = parse_factor();
        if (d.is_zero()) fail("division by zero scalar");
        v /= d;
      } else {
        return v;
      }
    }
  }

  Scalar parse_scalar() {
    skip_ws();
    bool neg = false;
    if (peek() == '-') { ++pos; neg = true; }
    else if (peek() == '+') { ++pos; }
    Scalar v = parse_term();
    if (neg) v = -v;
    while (true) {
      char c = peek();
      if (c == '+') { ++pos; v += parse_term(); }
      else if (c == '-') { ++pos; v -= parse_term(); }
      else return v;
    }
  }
};

std::string rat_format(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

std::string mono_format(const Mono& m, const FieldSpec& field) {
  std::string out;
  for (std::size_t i = 0; i < m.exp.size(); ++i) {
    if (m.exp[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += field.indeterminates[i];
    if (m.exp[i] != 1) out += "^" + std::to_string(m.exp[i]);
  }
  return out;
}

}  // namespace

Scalar scalar_parse(const std::string& text, const FieldSpec& field) {
  ScalarParser p{text, field};
  Scalar v = p.parse_scalar();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return v;
}

std::string poly_format(const Poly& p, const FieldSpec& field) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rat a = c < 0 ? Rat(-c) : c;
    if (first) {
      if (c < 0) out += "-";
      first = false;
    } else {
      out += c < 0 ? "-" : "+";
    }
    std::string ms = mono_format(m, field);
    if (ms.empty()) {
      out += rat_format(a);
    } else {
      if (a != 1) out += rat_format(a) + "*";
      out += ms;
    }
  }
  return out;
}

std::string scalar_format(const Scalar& x, const FieldSpec& field) {
  std::string n = poly_format(x.num(), field);
  if (x.den().is_constant()) return n;
  if (x.num().terms().size() > 1) n = "(" + n + ")";
  // A denominator is safe unparenthesized only as a pure power of a single
  // indeterminate (its canonical leading coefficient is 1).
  const auto& dterms = x.den().terms();
  bool atomic = dterms.size() == 1;
  if (atomic) {
    int nonzero = 0;
    for (int32_t e : dterms[0].first.exp)
      if (e != 0) ++nonzero;
    atomic = nonzero == 1 && dterms[0].second == 1;
  }
  std::string d = poly_format(x.den(), field);
  if (!atomic) d = "(" + d + ")";
  return n + "/" + d;
}

}  // namespace qls
