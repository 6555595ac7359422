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

#ifndef QLS_PRESENTATION_HPP
#define QLS_PRESENTATION_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qls/subspace.hpp"

namespace qls {

// Element of the free algebra on the generators: words with coefficients,
// possibly of mixed degree. Kept deglex-sorted with no zero terms.
using FreeElement = std::vector<std::pair<MultiIndex, Scalar>>;

FreeElement free_normalize(FreeElement e);
bool free_is_homogeneous(const FreeElement& e, int* degree_out = nullptr);

// Algebra presented by generators and relations, with everything tracked
// degree by degree up to a fixed cap. Graded ("conic") presentations give
// access to ideal components, dimensions and normal forms; inhomogeneous
// presentations are carried around for the filtered checks but refuse the
// graded queries.
class Presentation {
 public:
  Presentation() = default;
  // Relations for graded use must be homogeneous of degree in [2, cap].
  static Presentation make(FieldSpec field, std::string name,
                           std::vector<std::string> gens,
                           std::vector<FreeElement> relations, int cap);
  static Presentation from_graded_relations(
      FieldSpec field, std::string name, std::vector<std::string> gens,
      const std::map<int, std::vector<Tensor>>& relations, int cap);

  // Units for the three products: the trivial quotient with no degree-one
  // part, the free line, and the truncated line.
  static Presentation unit_trivial(FieldSpec field, int cap);
  static Presentation unit_free_line(FieldSpec field, int cap);
  static Presentation unit_truncated_line(FieldSpec field, int m, int cap);

  const FieldSpec& field() const { return field_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  const std::vector<std::string>& gens() const { return gens_; }
  int dim() const { return degenerate_ ? 0 : static_cast<int>(gens_.size()); }
  int cap() const { return cap_; }
  bool is_conic() const { return conic_; }
  bool is_degenerate() const { return degenerate_; }
  int nvars() const { return field_.nvars(); }
  const std::vector<FreeElement>& given_relations() const { return given_; }

  // Span of the given relations in degree d (generators of the ideal there).
  const Subspace& given_component(int d) const;
  // Degree-d component of the two-sided ideal:
  //   I_d = V (x) I_{d-1} + I_{d-1} (x) V + G_d, I_0 = I_1 = 0.
  const Subspace& ideal_component(int d) const;
  int hilbert(int d) const;
  std::vector<MultiIndex> normal_words(int d) const;
  Tensor normal_form(const Tensor& v) const;
  // Product of quotient classes, already in normal form.
  Tensor quotient_product(const Tensor& a, const Tensor& b) const;

 private:
  void require_conic(const char* what) const;

  FieldSpec field_;
  std::string name_;
  std::vector<std::string> gens_;
  int cap_ = 0;
  bool conic_ = true;
  bool degenerate_ = false;
  std::vector<FreeElement> given_;
  std::map<int, std::vector<Tensor>> graded_rels_;
  mutable std::vector<std::optional<Subspace>> given_cache_;
  mutable std::vector<std::optional<Subspace>> ideal_cache_;
};

struct MorphismWitness {
  int degree;
  Tensor relation;  // source ideal element whose image escapes the ideal
  Tensor image;
};

// Does the degree-one map f (dst.dim x src.dim, f(src_j) = sum_i f[i][j]
// dst_i) send each source ideal component into the destination one, for
// 2 <= d <= up_to? Returns the first failure, or nullopt when f presents an
// algebra morphism up to that degree.
std::optional<MorphismWitness> morphism_failure(const Presentation& src,
                                                const Presentation& dst,
                                                const LinearMap& f, int up_to);

// Stability of the defining ideal under a degree-one automorphism.
bool is_stable_under(const Presentation& a, const LinearMap& sigma, int up_to);

// When sigma^{(x)d}(I_d) = I_d for all 2 <= d <= up_to, returns for each
// such d the change-of-basis matrix C_d with sigma^{(x)d}(b_j) =
// sum_k C_d[k][j] b_k over the echelon basis of I_d (index d-2). Returns
// nullopt at the first unstable degree. Throws on singular sigma.
std::optional<std::vector<LinearMap>> sigma_stability(const Presentation& a,
                                                      const LinearMap& sigma,
                                                      int up_to);

// Same generator space and the same ideal components for all d <= up_to.
bool presentations_equal(const Presentation& a, const Presentation& b,
                         int up_to);

// Equality under a degree-one identification: ident^{(x)d} carries each
// ideal component of a onto the one of b. Throws on singular ident.
bool presentations_equal(const Presentation& a, const Presentation& b,
                         const LinearMap& ident, int up_to);

}  // namespace qls

#endif  // QLS_PRESENTATION_HPP
