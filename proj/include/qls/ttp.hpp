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

#ifndef QLS_TTP_HPP
#define QLS_TTP_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>

#include "qls/presentation.hpp"
#include "qls/products.hpp"

namespace qls {

// Outcome of the degreewise compatibility check on a twisting matrix.
struct TwistValidation {
  bool invertible = false;
  // Largest total degree p+q the extension checks covered.
  int checked_up_to = 0;
  // First total degree at which an extension failed to carry an ideal
  // component into the matching side, when any did.
  std::optional<int> failure_degree;

  bool ok() const { return invertible && !failure_degree; }
};

// A symmetric twisting between two graded presentations, determined by an
// invertible matrix on the degree-one slots.  The underlying map sends
// B1 (x) A1 to A1 (x) B1; tau_hat is its flip-composed square form on
// B1 (x) A1 with flat index b_digit * dim(A1) + a_digit.
struct TwistingMap {
  Presentation B_pres;
  Presentation A_pres;
  LinearMap tau_hat;
  TwistValidation validated;

  // Memoized extension and word-conversion matrices plus the untwisted
  // product presentation used for canonical representatives.
  struct Cache;
  std::shared_ptr<Cache> cache;
};

// Builds and validates a twisting from its degree-one matrix.  Checks, for
// every split p + q <= up_to, that the extension carries ideal (x) full into
// full-major copies of the same ideal on the swapped side, which is what
// makes the twisted product well defined on the quotients.  Throws
// precondition_error on a singular matrix, wrong shape, mismatched fields,
// or a compatibility failure (the message names the witness degree).
TwistingMap twisting_from_matrix(const LinearMap& tau_hat,
                                 const Presentation& a, const Presentation& b,
                                 int up_to);

// The flip twisting (tau_hat = identity) on the same pair.
TwistingMap flip_twisting(const Presentation& a, const Presentation& b,
                          int up_to);

// Extension of the twisting to B1^{(x)p} (x) A1^{(x)q} -> A1^{(x)q} (x)
// B1^{(x)p}, both sides flattened big-endian in slot order.  Built from
// adjacent moves, each A slot bubbled left past the B slots, A slots taken
// left to right; any move order agrees.  Memoized per (p, q).
LinearMap tau_extend(const TwistingMap& t, int p, int q);

// Product in the twisted algebra.  Operands are elements of the composite
// space over base dim(A1)*dim(B1) (pair digit a*dim(B1)+b) of homogeneous
// degrees d1 and d2; the result has degree d1+d2 and is returned as the
// canonical representative modulo the untwisted product ideal.  Throws
// precondition_error when d1+d2 exceeds the common truncation cap.
Tensor ttp_multiply(const TwistingMap& t, const Tensor& x, const Tensor& y);

// The invertible matrix on (A1 (x) B1)^{(x)r} relating length-r twisted
// generator words to untwisted ones: the twisted product of r pair letters
// equals the untwisted evaluation of gamma_matrix applied to the word.
LinearMap gamma_matrix(const TwistingMap& t, int r);

// The presentation of the twisted product on the pair generators: relations
// in degree d are the preimage under gamma_matrix of the untwisted product
// ideal component.
Presentation ttp_presentation(const TwistingMap& t);

// The inverse twisting with the factors swapped; the canonical swap map is
// verified to be an isomorphism of the two twisted products up to the
// validated degree.
TwistingMap ttp_opposite(const TwistingMap& t);

// Structural report: extensions preserve ideal components, the twisted
// product is associative on generator triples, the flip twisting reproduces
// the untwisted product, and the graded components agree with it.
IdentityReport structural_checks(const TwistingMap& t, int up_to);

}  // namespace qls

#endif  // QLS_TTP_HPP
