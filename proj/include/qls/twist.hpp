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

#ifndef QLS_TWIST_HPP
#define QLS_TWIST_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qls/cohom.hpp"
#include "qls/presentation.hpp"
#include "qls/products.hpp"
#include "qls/ttp.hpp"

namespace qls {

// ---------------------------------------------------------------------------
// Slotwise deformation by a degree-one symmetry.

enum class DeformDirection { ascending, descending };

// Replaces each relation component I_d by its image under
// (id (x) phi (x) phi^2 (x) ... (x) phi^{d-1}); descending uses inverse
// powers. phi must be invertible of size dim(p); throws precondition_error
// otherwise. Deforming twice with opposite directions of the same phi
// restores the original components degreewise.
Presentation sigma_deform(const Presentation& p, const LinearMap& phi,
                          DeformDirection dir);

// ---------------------------------------------------------------------------
// Factorizable twists and twisted hom objects.

// Degree-one symmetries of the two factors of a hom object: sigma_a acts on
// the target generators (dimension n), sigma_b on the source generators
// (dimension m).
struct FactorizableTwist {
  LinearMap sigma_a;
  LinearMap sigma_b;
};

// Conjugation of the z coordinate space (flat index i*m + j, i over the
// target, j over the source) by the r-th shift:
//   z[u,v] -> sum_{p,q} sigma_a^r[p][u] * sigma_b^{-r}[v][q] * z[p,q],
// i.e. kron(sigma_a^r, transpose(sigma_b^{-r})). Shift 0 is the identity;
// negative shifts invert both powers.
LinearMap shift_conjugation(const LinearMap& sigma_a, const LinearMap& sigma_b,
                            int r);

// Square crossing form on B_1 (x) E_1 (E_1 the z space, flat b*dim(E_1)+z)
// that leaves the B letter alone and conjugates the z letter by one shift:
// kron(I_m, shift_conjugation(sigma_a, sigma_b, 1)).
LinearMap factorizable_tau_hat(const FactorizableTwist& tw);

// Twisted internal hom on generators z[i,j]. When both symmetries preserve
// their ideals this is the right mixed product of the two deformed factors,
// and the returned source and target are those deformed presentations (they
// are what the object coacts on). Otherwise the relations are generated by
// the shifted conjugates of the untwisted hom relations: for each shift s and
// degree d, the degree-d base vectors dressed slotwise with
// (K_{s-1}, ..., K_{s+d-2}) where K_r is the r-th shift conjugation, and the
// source and target stay as given. The shift range is up_to times the largest
// given relation degree of a. Result is marked twisted = true.
HomObject hom_upsilon(const Presentation& b, const Presentation& a,
                      const FactorizableTwist& tw, int up_to);

// The shift-family construction above, usable on any inputs; shift_cap = 0
// picks the default range. Exposed so the two constructions can be compared
// on ideal-preserving inputs.
HomObject hom_upsilon_shift_family(const Presentation& b,
                                   const Presentation& a,
                                   const FactorizableTwist& tw, int up_to,
                                   int shift_cap = 0);

// ---------------------------------------------------------------------------
// Saturation for a general crossing matrix.

// Twisted hom object computed by saturating relation candidates to a fixed
// point: seeds are the twisted coevaluation images of the relations of a
// (B side reduced against the ideal of b, complement coordinates kept per
// z-word), then B-relation crossing moves, single-letter closure moves and
// two-sided padding are swept in deglex order until the per-degree spans
// stop growing. tau_hat is the square form on B_1 (x) E_1 with flat index
// b*dim(E_1) + z. A forced degree-one relation means the crossing does not
// present a conic object; that raises precondition_error.
HomObject saturate_hom_general(const Presentation& b, const Presentation& a,
                               const LinearMap& tau_hat, int up_to);

// ---------------------------------------------------------------------------
// Points of the twisted hom object.

struct CPointReport {
  bool intertwines = false;    // crossing law for the images holds in c
  bool extends_on_a = false;   // a_j -> sum_k h[j][k] b_k kills I(a)
  bool point_of_hom = false;   // z[i,j] -> h[i][j] kills the twisted hom ideal
  bool equivalent = false;     // the two statements above agree
};

// Tests the defining property of the twisted hom object on one candidate
// point: degree-one images b_images[k] of the b generators and h_images[i][j]
// of the z generators inside an algebra c whose cap is at least 2*up_to.
// The twisted hom object is computed from tau_hat by saturation. The
// crossing law is the precondition of the statement being tested: when it
// fails for the given images this throws precondition_error.
CPointReport check_c_point(const Presentation& b, const Presentation& a,
                           const Presentation& c, const LinearMap& tau_hat,
                           const std::vector<Tensor>& b_images,
                           const std::vector<std::vector<Tensor>>& h_images,
                           int up_to);

// The algebra generated by the generators of dz (the z side) followed by
// those of b, subject to both ideals and the degree-2 straightening
// b_i * z = tau_hat applied to (b_i (x) z). tau_hat is the square form on
// B_1 (x) dz_1. A b generator whose name collides with an earlier one gains
// primes until unique. Used as the canonical ambient for check_c_point.
Presentation crossed_product(const Presentation& dz, const Presentation& b,
                             const LinearMap& tau_hat, int cap);

// ---------------------------------------------------------------------------
// Global collections: semigroupoid laws and factorization.

// Candidate crossing maps indexed by the dimension pair (n, m): the entry at
// (n, m) acts on the pair space k^m (x) Z with Z the n*m-dimensional z
// coordinate space, flat index b*(n*m) + i*m + j (i over the target side, j
// over the source side); square entries have n == m.
using GlobalCollectionSample = std::map<std::pair<int, int>, LinearMap>;

// Coassociativity of each square entry, the counit contraction, and the
// mixed composition law on every composable key triple present in the
// sample. Failing items carry the first witness index tuple in their name.
IdentityReport check_semigroupoid(const GlobalCollectionSample& g);

struct TauFactorization {
  bool ok = false;
  std::string reason;  // first failed condition when !ok
  LinearMap sigma;     // normalized: first nonzero entry (row-major) is 1
  LinearMap sigma_bar;
};

// Splits a square collection entry (pair space k^n (x) Z, n == m) into
// kron(I_n, kron(sigma, transpose(sigma_bar))) with sigma_bar = sigma^{-1}.
// Checks, in order: the block is independent of the b index, tau is
// b-diagonal, the contracted block over n is a trace-one idempotent, the
// block is a rank-one pairing, the two factors are mutually inverse, and
// the re-assembled product reproduces tau exactly.
TauFactorization factor_tau(const LinearMap& tau, int n);

// ---------------------------------------------------------------------------
// The convolution cocycle on the matrix coalgebra.

// Sign and placement of the per-letter ladder entry; resolved once by
// resolve_cocycle_orientation and pinned by a unit test.
enum class CocycleOrientation {
  inverse_ladder,          // factor for letter z[k,l]: sigma^{-r}[l][k]
  inverse_ladder_flipped,  // sigma^{-r}[k][l]
  direct_ladder,           // sigma^{+r}[l][k]
  direct_ladder_flipped,   // sigma^{+r}[k][l]
};

struct Cocycle {
  LinearMap sigma;  // invertible on the degree-one space
  int n = 0;        // generator count; the z alphabet has n*n letters
  CocycleOrientation orientation = CocycleOrientation::inverse_ladder;
};

// The adopted convention (inverse_ladder). Throws precondition_error when
// sigma is singular or not square.
Cocycle make_cocycle(const LinearMap& sigma);

// chi on a pair of words in the z alphabet (flat letters i*n + j). A word
// pair with an off-diagonal letter on the left evaluates to zero; an empty
// side falls back to the counit of the other. The value on (left, right)
// with left of degree r is counit(left) * prod over right letters of the
// orientation's sigma^{+-r} entry.
Scalar cocycle_eval(const Cocycle& chi, const MultiIndex& left,
                    const MultiIndex& right);
// The convolution inverse: same placement, opposite power sign.
Scalar cocycle_inverse_eval(const Cocycle& chi, const MultiIndex& left,
                            const MultiIndex& right);

// Picks the unique orientation for which (a) the twisted product of two
// algebra generators contracts the right factor with sigma^{-1}, and (b)
// the twisted product of two z generators is the plain product against the
// shift minus-one conjugate of the right one. Returns the first orientation
// satisfying both on the free algebra over a's generators; throws
// internal_check_error if none does.
CocycleOrientation resolve_cocycle_orientation(const LinearMap& sigma,
                                               const Presentation& a);

// Counitality, the cocycle identity on word triples, the two-sided
// convolution inverse law, and descent to the quotient by the ideal of
// end(a), all at degrees up to up_to. Failures are reported, not thrown.
IdentityReport cocycle_checks(const Cocycle& chi, const Presentation& a,
                              int up_to);

// Twisted product chi * mu * chi^{-1} on the matrix bialgebra e, computed
// through the coproduct splittings of both arguments; the result is in
// normal form for e.pres. Inputs live on the z alphabet.
Tensor mu_chi(const Cocycle& chi, const HomObject& e, const Tensor& x,
              const Tensor& y);

// Presentation of end(a) under the twisted product: the degree-d relations
// are the kernel of the left-associated twisted evaluation of z words.
Presentation end_chi_presentation(const Cocycle& chi, const Presentation& a,
                                  int up_to);

// Twisted product on the algebra itself: for x homogeneous of degree r the
// product is x times sigma^{-r} applied to every slot of y (the convolution
// composite collapses to this exactly).
Tensor m_chi(const Cocycle& chi, const Presentation& a, const Tensor& x,
             const Tensor& y);

// Presentation of a under the twisted product, on the original generators.
Presentation algebra_chi(const Cocycle& chi, const Presentation& a,
                         int up_to);

// ---------------------------------------------------------------------------
// Equivalence of the two twists.

// For sigma preserving the ideal of a: (1) the twisted end relations equal
// the convolution-twisted end relations degreewise, (2) the slotwise
// deformation of a equals the convolution twist of a, (3) the twisted hom
// from the one-generator free line recovers the deformation. Throws
// precondition_error when sigma does not preserve the ideal.
IdentityReport twist_equivalences(const Presentation& a,
                                  const LinearMap& sigma, int up_to);

// Pair form: the twisted hom object of (b, a) equals the plain hom object
// of the two convolution-twisted algebras.
IdentityReport twist_equivalences_pair(const Presentation& b,
                                       const LinearMap& sigma_b,
                                       const Presentation& a,
                                       const LinearMap& sigma_a, int up_to);

// ---------------------------------------------------------------------------
// The R-matrix suite.

// The 4x4 braid solution whose degree-2 relation line cuts out the plane
// x y - q y x, on flat indices (k,l) -> k*2 + l. Requires an indeterminate
// named q in the field.
LinearMap frt_r_matrix(const FieldSpec& field);

struct FrtReport {
  Presentation a_r;       // plane cut out by the braid relation line
  Presentation matrices;  // quadratic matrix algebra from the R relations
  Presentation a_r_phi;   // plane of the phi-conjugated braid matrix
  IdentityReport checks;
};

// Validates the braid matrix, builds the plane and its quadratic matrix
// algebra, checks that end(a_r) maps onto it and that the marked variant
// equals it, then compares the twisted end for (phi, phi) against the end
// of the phi-conjugated plane. phi must be invertible 2x2 and commute with
// the braid matrix slotwise (checked, reported).
FrtReport frt_suite(const FieldSpec& field, const LinearMap& phi, int up_to);

// ---------------------------------------------------------------------------
// Crossing a non-graded relation: the collapse probe.

struct CollapseReport {
  bool forced_collapse = false;   // crossing forces relations on the symbols
  int surviving_dim = 0;          // dimension the crossing symbols drop to
  bool obstructed = false;        // the composite crossing is inconsistent
  bool failure_detected = false;  // forced_collapse && obstructed
};

// Crosses the non-graded element c_1 + lambda (a degree-one generator plus a
// constant) past free hom symbols for the tower of three two-generator free
// algebras with degree-one symmetries sigma_a, sigma_b, sigma_c. A nonzero
// lambda forces the symbols between c and b to collapse along
// I - K_1(sigma_b, sigma_c); the composite crossing past the a symbols is
// then obstructed unless the remaining conjugation acts trivially on the
// surviving coordinates. lambda = 0, or identity symmetries, pass; one
// non-identity symmetry used for all three factors (a single collection)
// is the standard failing input.
CollapseReport nongraded_crossing_probe(const Scalar& lambda,
                                        const LinearMap& sigma_a,
                                        const LinearMap& sigma_b,
                                        const LinearMap& sigma_c);

}  // namespace qls

#endif  // QLS_TWIST_HPP
