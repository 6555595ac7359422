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

#ifndef QLS_PRODUCTS_HPP
#define QLS_PRODUCTS_HPP

#include <string>
#include <vector>

#include "qls/presentation.hpp"

namespace qls {

// Monoidal products on graded presentations. Composite generators are
// indexed first-factor-major: p[i,j] sits at slot (i-1)*dim(B) + (j-1).
//   circ:     relations at degree d are I_d (x) B-words + A-words (x) J_d.
//   odot:     relations at degree d are the pair span I_d (x) J_d.
//   bullet:   single relation block I_m (x) J_m; both factors must have all
//             their relations concentrated in degree m.
enum class ProductKind { circ, odot, bullet };

// One-sided and two-sided dualized products. The undualized factor is the
// major index; for `right` the generators are written z[i,j] with i running
// over the second factor, matching the hom-object convention.
//   right:   X |> Y, relations perp(I_d of X) interleaved over J_d of Y.
//   left:    X <| Y, relations I_d of X against perp(J_d of Y).
//   diamond: X <> Y, relations perp(I_d of X) against perp(J_d of Y).
enum class MixKind { right, left, diamond };

// Distinguished unit presentations: the flagged degenerate quotient, the
// free line, and the truncated lines k[e]/(e^m).
enum class UnitKind { trivial, free_line, truncated_line };

// True when the ideal of p is generated by its degree-m component alone,
// i.e. the closure of I_m reproduces every ideal component up to the cap.
// This is membership in the m-th subclass (m = 2: quadratic), checked
// semantically so that presentations carrying redundant higher-degree
// relation generators still qualify.
bool generated_in_degree(const Presentation& p, int m);

// The binary products. Products with the degenerate unit shortcut to the
// partner (circ) or collapse back to the unit (odot, bullet). The result
// cap is the smaller factor cap. `m` is the bullet relation degree.
Presentation product(ProductKind kind, const Presentation& a,
                     const Presentation& b, int m = 2);

// Dual presentation on the dual generators: relation generators at degree d
// are the annihilators of the full ideal components, then closed again.
Presentation bang(const Presentation& a);

Presentation mix(MixKind kind, const Presentation& a, const Presentation& b);

Presentation unit_object(UnitKind kind, const FieldSpec& field, int cap,
                         int m = 2);

// Permutation on a composite generator space sending index i*q + j to
// j*p + i (0 <= i < p, 0 <= j < q): the transport between the two flatten
// orders of a two-factor generator basis.
LinearMap swap_transport(int p, int q, int nvars);

struct IdentityCheck {
  std::string name;
  bool passed = false;
};

struct IdentityReport {
  std::vector<IdentityCheck> items;
  bool all_passed = true;
  void add(std::string name, bool ok);
};

// Degreewise checks of the product/dual compatibilities on the pair (a, b):
// double dual, duals of circ/bullet/odot, unit duals, the mixed-product
// descriptions of hom objects, and the unit laws. Quadratic-only items are
// skipped unless both inputs have all relations in degree 2.
IdentityReport verify_identities(const Presentation& a, const Presentation& b,
                                 int up_to);

}  // namespace qls

#endif  // QLS_PRODUCTS_HPP
