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

#ifndef QLS_COHOM_HPP
#define QLS_COHOM_HPP

#include <optional>
#include <vector>

#include "qls/products.hpp"

namespace qls {

// Universal coHom object on generators z[i,j] = b^j (x) a_i: the initial
// target of algebra maps A -> H (x) B. The presentation is the right mixed
// product of the factors; `twisted` marks the sigma-deformed variants.
struct HomObject {
  Presentation pres;
  Presentation source;  // B
  Presentation target;  // A
  bool twisted = false;
};

HomObject hom_object(const Presentation& b, const Presentation& a);
HomObject end_object(const Presentation& a);

// Membership of v in I_d(A) (x) full + full (x) J_d(B) over the composite
// base (slot = a_slot * dim B + b_slot), decided factorwise: reduce the
// A-side per fixed B-word, then the B-side of what is left. Avoids ever
// echelonizing the composite-degree space.
bool in_circ_ideal(const Presentation& a, const Presentation& b,
                   const Tensor& v);

// First failure of f: src_1 -> A_1 (x) B_1 extending to src -> A o B.
std::optional<MorphismWitness> circ_morphism_failure(const Presentation& src,
                                                     const Presentation& a,
                                                     const Presentation& b,
                                                     const LinearMap& f,
                                                     int up_to);

// Structure maps on the z-generators, as matrices on the flattened index
// (i over the target/lower factor is the major digit).
//   coevaluation a_i -> z_i^j (x) b_j           (n = dim A_1, m = dim B_1)
//   cocomposition z_i^j -> w_i^k (x) v_k^j      (c = dim C_1 in the middle)
//   counit z_i^j -> delta_i^j e
LinearMap coevaluation_map(int n, int m, int nvars);
LinearMap cocomposition_map(int n, int c, int m, int nvars);
LinearMap counit_map(int n, int nvars);

// Verifies a_i -> z_i^j (x) b_j as a morphism A -> hom[B,A] o B degreewise
// and returns its matrix. A failure here is an implementation bug, so it
// surfaces as internal_check_error.
LinearMap coevaluation_check(const HomObject& h, int up_to);

// Bialgebra structure on a coEnd object: comultiplication and counit
// well-defined, coassociativity and counit laws on generators, and the
// coaction making the target a comodule.
IdentityReport bialgebra_checks(const HomObject& e, int up_to);

struct CocompositionReport {
  std::optional<MorphismWitness> failure;
  bool square_commutes = false;
  bool ok() const { return !failure.has_value() && square_commutes; }
};

// hom[B,A] -> hom[C,A] o hom[B,C] on z_i^j -> w_i^k (x) v_k^j, plus the
// compatibility square against the two coevaluation routes.
CocompositionReport cocomposition(const Presentation& b, const Presentation& c,
                                  const Presentation& a, int up_to);

// The coEnd quotient remembering the marked basis: relations couple the
// coaction on the algebra and the dual coaction on its dual, degree by
// degree. For the quantum plane this reproduces the standard 2x2 quantum
// matrix bialgebra.
Presentation e_marked(const Presentation& a);

// A pair (phi, H): phi(a_i) = sum_j h[i][j] (x) b_j with h[i][j] degree-one
// elements of H. `verified` records whether phi extends to a morphism
// A -> H o B up to the cap; `failure` keeps the first witness otherwise.
struct DiagramObject {
  Presentation source;    // A
  Presentation cofactor;  // B
  Presentation target_h;  // H
  std::vector<std::vector<Tensor>> h;
  bool verified = false;
  std::optional<MorphismWitness> failure;
};

DiagramObject make_diagram(const Presentation& a, const Presentation& b,
                           const Presentation& h_alg,
                           std::vector<std::vector<Tensor>> h, int up_to);

// The canonical diagram: H = hom[B,A] itself with h_i^j = z_i^j.
DiagramObject initial_diagram(const HomObject& h, int up_to);

// Subalgebra of H generated by the h_i^j, presented on z[i,j]: degree-d
// relations are the kernel of the evaluation z-word -> normal form of the
// corresponding h-word in H.
Presentation specialize_diagram(const DiagramObject& dg, int up_to);

// The factorization hom[B,A] ->> H^phi of the initial property, checked as
// z_i^j -> z_i^j on the specialized presentation. nullopt means it factors.
std::optional<MorphismWitness> initial_factor_map(const DiagramObject& dg,
                                                  int up_to);

}  // namespace qls

#endif  // QLS_COHOM_HPP
