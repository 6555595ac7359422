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

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qls/errors.hpp"

namespace qls {

namespace {

struct DeglexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    return deglex_less(a, b);
  }
};

std::vector<std::string> z_symbol_names(int n, int m) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n) * m);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= m; ++j)
      out.push_back("z[" + std::to_string(i) + "," + std::to_string(j) + "]");
  return out;
}

// Odometer over chains in {0..base-1}^len; returns false after wrapping.
bool next_chain(std::vector<int>& c, int base) {
  for (std::size_t t = c.size(); t-- > 0;) {
    if (++c[t] < base) return true;
    c[t] = 0;
  }
  return false;
}

bool word_diagonal(int n, const MultiIndex& w) {
  for (int letter : w.slots) {
    if (letter < 0 || letter >= n * n)
      throw precondition_error("letter outside the z alphabet");
    if (letter / n != letter % n) return false;
  }
  return true;
}

// Evaluates the ladder functional and its convolution inverse; the sigma
// powers are cached so repeated calls share the inversions.
class LadderCache {
 public:
  explicit LadderCache(const Cocycle& chi)
      : chi_(chi), nv_(chi.sigma.nvars()) {
    if (chi.sigma.rows() != chi.n || chi.sigma.cols() != chi.n || chi.n < 1)
      throw precondition_error("cocycle matrix does not match its dimension");
  }

  Scalar eval(const MultiIndex& left, const MultiIndex& right, bool inverse) {
    const int n = chi_.n;
    if (left.degree() == 0)
      return word_diagonal(n, right) ? Scalar::one(nv_) : Scalar::zero(nv_);
    if (right.degree() == 0)
      return word_diagonal(n, left) ? Scalar::one(nv_) : Scalar::zero(nv_);
    if (!word_diagonal(n, left)) return Scalar::zero(nv_);
    Scalar out = Scalar::one(nv_);
    const int r = left.degree();
    for (int letter : right.slots) {
      out = out * entry(r, letter / n, letter % n, inverse);
      if (out.is_zero()) return out;
    }
    return out;
  }

  Scalar entry(int r, int k, int l, bool inverse) {
    const bool direct =
        chi_.orientation == CocycleOrientation::direct_ladder ||
        chi_.orientation == CocycleOrientation::direct_ladder_flipped;
    const bool flipped =
        chi_.orientation == CocycleOrientation::inverse_ladder_flipped ||
        chi_.orientation == CocycleOrientation::direct_ladder_flipped;
    int s = direct ? r : -r;
    if (inverse) s = -s;
    const LinearMap& p = power(s);
    return flipped ? p.at(k, l) : p.at(l, k);
  }

 private:
  const LinearMap& power(int s) {
    auto it = pow_.find(s);
    if (it == pow_.end()) it = pow_.emplace(s, chi_.sigma.power(s)).first;
    return it->second;
  }

  const Cocycle& chi_;
  int nv_;
  std::map<int, LinearMap> pow_;
};

// Slot map collapsing a length-r left factor out of the convolution product;
// applied to every slot of the right operand of m_chi.
LinearMap collapse_map(const Cocycle& chi, int r) {
  const bool direct =
      chi.orientation == CocycleOrientation::direct_ladder ||
      chi.orientation == CocycleOrientation::direct_ladder_flipped;
  const bool flipped =
      chi.orientation == CocycleOrientation::inverse_ladder_flipped ||
      chi.orientation == CocycleOrientation::direct_ladder_flipped;
  LinearMap p = chi.sigma.power(direct ? r : -r);
  return flipped ? p.transpose() : p;
}

void validate_twisted_pair(const Presentation& b, const Presentation& a,
                           const FactorizableTwist& tw, int up_to) {
  if (!(a.field() == b.field()))
    throw precondition_error("twisted hom needs presentations over one field");
  if (!a.is_conic() || !b.is_conic() || a.is_degenerate() || b.is_degenerate())
    throw precondition_error(
        "twisted hom needs conic non-degenerate presentations");
  const int n = a.dim(), m = b.dim(), nv = a.nvars();
  if (tw.sigma_a.rows() != n || tw.sigma_a.cols() != n ||
      tw.sigma_a.nvars() != nv || tw.sigma_b.rows() != m ||
      tw.sigma_b.cols() != m || tw.sigma_b.nvars() != nv)
    throw precondition_error("twist matrices must act on the generator slots");
  if (!tw.sigma_a.is_invertible() || !tw.sigma_b.is_invertible())
    throw precondition_error("twist matrices must be invertible");
  if (up_to < 2 || up_to > a.cap() || up_to > b.cap())
    throw precondition_error("degree bound out of range");
}

int max_given_degree(const Presentation& a) {
  int md = 0;
  for (int d = 2; d <= a.cap(); ++d)
    if (a.given_component(d).dim() > 0) md = d;
  return md == 0 ? 2 : md;
}

// Degree-one pair letter sum_j z[i,j] (x) b_j over the composite alphabet
// with pair digit z * m + b.
Tensor delta_letter(int i, int e, int m, int nv) {
  std::vector<std::pair<MultiIndex, Scalar>> ts;
  ts.reserve(m);
  for (int j = 0; j < m; ++j)
    ts.push_back({MultiIndex::single((i * m + j) * m + j), Scalar::one(nv)});
  return Tensor::from_terms(e * m, 1, nv, ts);
}

// Reduces the b side of a pair tensor modulo the relations of b and returns
// one z-side tensor per surviving complement coordinate.
std::vector<Tensor> extract_pairs(const Tensor& x, const Presentation& b,
                                  int e) {
  const int m = b.dim();
  const int nv = x.nvars();
  const int d = x.degree();
  std::map<MultiIndex, std::vector<std::pair<MultiIndex, Scalar>>, DeglexLess>
      by_z;
  for (const auto& [mi, c] : x.terms()) {
    auto [zw, bw] = split_pair(mi, m);
    by_z[zw].push_back({bw, c});
  }
  std::map<MultiIndex, std::vector<std::pair<MultiIndex, Scalar>>, DeglexLess>
      by_comp;
  for (auto& [zw, terms] : by_z) {
    Tensor bt = Tensor::from_terms(m, d, nv, terms);
    auto dec = b.ideal_component(d).decompose(bt);
    for (const auto& [cw, cc] : dec.first)
      if (!cc.is_zero()) by_comp[cw].push_back({zw, cc});
  }
  std::vector<Tensor> out;
  for (auto& [cw, zrows] : by_comp) {
    Tensor t = Tensor::from_terms(e, d, nv, zrows);
    if (!t.is_zero()) out.push_back(t);
  }
  return out;
}

// Sparse column combination: the image of sum coeff * e_col under t, kept as
// a row -> value map with exact zeros dropped.
std::map<int, Scalar> apply_columns(
    const LinearMap& t, const std::vector<std::pair<int, Scalar>>& cols) {
  std::map<int, Scalar> out;
  for (const auto& [c, coeff] : cols) {
    if (coeff.is_zero()) continue;
    for (int r = 0; r < t.rows(); ++r) {
      const Scalar& v = t.at(r, c);
      if (v.is_zero()) continue;
      auto it = out.find(r);
      if (it == out.end()) {
        out.emplace(r, v * coeff);
      } else {
        it->second += v * coeff;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  }
  return out;
}

// Relations in each degree are the kernel of the word evaluation map; rows
// are indexed by the output coordinates, relations by input words.
Presentation kernel_presentation(
    const FieldSpec& field, const std::string& name,
    const std::vector<std::string>& gens, int base, int up_to,
    const std::function<Tensor(const MultiIndex&)>& eval) {
  const int nv = field.nvars();
  std::map<int, std::vector<Tensor>> rels;
  for (int d = 2; d <= up_to; ++d) {
    std::vector<MultiIndex> words = all_indices(base, d);
    std::map<std::size_t, std::vector<std::pair<MultiIndex, Scalar>>> rows;
    for (const MultiIndex& w : words) {
      Tensor ev = eval(w);
      for (const auto& [nw, c] : ev.terms())
        rows[mi_rank(nw, base)].push_back({w, c});
    }
    std::vector<Tensor> rowts;
    rowts.reserve(rows.size());
    for (auto& [rk, terms] : rows)
      rowts.push_back(Tensor::from_terms(base, d, nv, terms));
    Subspace rowspace = Subspace::span(base, d, nv, rowts);
    Subspace ker = rowspace.perp();
    if (ker.dim() > 0) rels[d] = ker.basis();
  }
  return Presentation::from_graded_relations(field, name, gens, rels, up_to);
}

}  // namespace

Presentation sigma_deform(const Presentation& a, const LinearMap& phi,
                          DeformDirection dir) {
  const int n = a.dim(), nv = a.nvars();
  if (phi.rows() != n || phi.cols() != n || phi.nvars() != nv)
    throw precondition_error(
        "the deformation matrix must act on the generator slots");
  if (!phi.is_invertible())
    throw precondition_error("the deformation matrix must be invertible");
  const LinearMap step =
      dir == DeformDirection::ascending ? phi : phi.inverse();
  std::map<int, std::vector<Tensor>> rels;
  for (int d = 2; d <= a.cap(); ++d) {
    const Subspace& comp = a.ideal_component(d);
    if (comp.dim() == 0) continue;
    std::vector<LinearMap> slots;
    slots.reserve(d);
    LinearMap cur = LinearMap::identity(n, nv);
    for (int t = 0; t < d; ++t) {
      slots.push_back(cur);
      cur = cur * step;
    }
    std::vector<Tensor> out;
    out.reserve(comp.basis().size());
    for (const Tensor& v : comp.basis()) out.push_back(apply_slotwise(slots, v));
    rels[d] = out;
  }
  const std::string name =
      (dir == DeformDirection::ascending ? "deform+(" : "deform-(") +
      a.name() + ")";
  return Presentation::from_graded_relations(a.field(), name, a.gens(), rels,
                                             a.cap());
}

LinearMap shift_conjugation(const LinearMap& sigma_a, const LinearMap& sigma_b,
                            int r) {
  if (sigma_a.nvars() != sigma_b.nvars())
    throw precondition_error("shift conjugation needs one scalar field");
  if (sigma_a.rows() != sigma_a.cols() || sigma_b.rows() != sigma_b.cols())
    throw precondition_error("shift conjugation needs square matrices");
  return sigma_a.power(r).kron(sigma_b.power(-r).transpose());
}

LinearMap factorizable_tau_hat(const FactorizableTwist& tw) {
  if (tw.sigma_a.nvars() != tw.sigma_b.nvars())
    throw precondition_error("factorizable twist needs one scalar field");
  if (tw.sigma_a.rows() != tw.sigma_a.cols() ||
      tw.sigma_b.rows() != tw.sigma_b.cols())
    throw precondition_error("factorizable twist needs square matrices");
  if (!tw.sigma_a.is_invertible() || !tw.sigma_b.is_invertible())
    throw precondition_error("factorizable twist needs invertible matrices");
  const int m = tw.sigma_b.rows();
  const int nv = tw.sigma_a.nvars();
  return LinearMap::identity(m, nv).kron(
      shift_conjugation(tw.sigma_a, tw.sigma_b, 1));
}

HomObject hom_upsilon(const Presentation& b, const Presentation& a,
                      const FactorizableTwist& tw, int up_to) {
  validate_twisted_pair(b, a, tw, up_to);
  if (is_stable_under(a, tw.sigma_a, up_to) &&
      is_stable_under(b, tw.sigma_b, up_to)) {
    Presentation bd = sigma_deform(b, tw.sigma_b, DeformDirection::ascending);
    Presentation ad = sigma_deform(a, tw.sigma_a, DeformDirection::ascending);
    // The object coacts on the deformed pair, so those are its source and
    // target; the coaction laws are checked against them, not the inputs.
    HomObject h{mix(MixKind::right, bd, ad), bd, ad, true};
    h.pres.set_name("twhom(" + b.name() + "," + a.name() + ")");
    return h;
  }
  return hom_upsilon_shift_family(b, a, tw, up_to, 0);
}

HomObject hom_upsilon_shift_family(const Presentation& b,
                                   const Presentation& a,
                                   const FactorizableTwist& tw, int up_to,
                                   int shift_cap) {
  validate_twisted_pair(b, a, tw, up_to);
  if (shift_cap < 0) throw precondition_error("negative shift bound");
  if (shift_cap == 0)
    shift_cap = up_to * std::max(max_given_degree(a), max_given_degree(b));
  const int n = a.dim(), m = b.dim();
  std::map<int, std::vector<Tensor>> rels;
  for (int d = 2; d <= up_to; ++d) {
    const Subspace& ia = a.ideal_component(d);
    Subspace jperp = b.ideal_component(d).perp();
    if (ia.dim() == 0 || jperp.dim() == 0) continue;
    std::vector<Tensor> base;
    base.reserve(ia.basis().size() * jperp.basis().size());
    for (const Tensor& r : ia.basis())
      for (const Tensor& w : jperp.basis()) base.push_back(shuffle_pair(r, w));
    std::vector<Tensor> out;
    for (int s = 1; s <= shift_cap; ++s) {
      std::vector<LinearMap> slots;
      slots.reserve(d);
      for (int t = 0; t < d; ++t)
        slots.push_back(shift_conjugation(tw.sigma_a, tw.sigma_b, s - 1 + t));
      for (const Tensor& v : base) out.push_back(apply_slotwise(slots, v));
    }
    rels[d] = out;
  }
  Presentation pres = Presentation::from_graded_relations(
      a.field(), "twhom(" + b.name() + "," + a.name() + ")",
      z_symbol_names(n, m), rels, up_to);
  return HomObject{pres, b, a, true};
}

HomObject saturate_hom_general(const Presentation& b, const Presentation& a,
                               const LinearMap& tau_hat, int up_to) {
  if (!(a.field() == b.field()))
    throw precondition_error("saturation needs presentations over one field");
  if (!a.is_conic() || !b.is_conic() || a.is_degenerate() || b.is_degenerate())
    throw precondition_error(
        "saturation needs conic non-degenerate presentations");
  const int n = a.dim(), m = b.dim(), nv = a.nvars();
  const int e = n * m;
  if (up_to < 2 || up_to > a.cap() || up_to > b.cap())
    throw precondition_error("degree bound out of range");
  if (tau_hat.rows() != m * e || tau_hat.cols() != m * e ||
      tau_hat.nvars() != nv)
    throw precondition_error("the twisting matrix must act on b (x) z letters");
  const FieldSpec& field = a.field();
  const int free_cap = std::max(up_to, 2);
  Presentation fe = Presentation::make(field, "FZ", z_symbol_names(n, m),
                                       std::vector<FreeElement>{}, free_cap);
  Presentation fb = Presentation::make(field, "FB", b.gens(),
                                       std::vector<FreeElement>{}, free_cap);
  TwistingMap ft = twisting_from_matrix(tau_hat, fe, fb, up_to);

  std::vector<Tensor> deltas;
  deltas.reserve(n);
  for (int i = 0; i < n; ++i) deltas.push_back(delta_letter(i, e, m, nv));

  std::vector<Subspace> span;
  span.reserve(up_to + 1);
  for (int k = 0; k <= up_to; ++k)
    span.push_back(Subspace::span(e, std::max(k, 1), nv, {}));

  bool changed = false;
  auto add_candidate = [&](int k, const Tensor& t) {
    if (k < 1 || k > up_to || t.is_zero()) return;
    if (span[k].contains(t)) return;
    span[k] = span[k].sum(Subspace::span(e, k, nv, {t}));
    changed = true;
  };

  // Seeds: the relations of a pushed through the coaction letters.
  for (int d = 2; d <= up_to; ++d) {
    const Subspace& ia = a.ideal_component(d);
    for (const Tensor& r : ia.basis()) {
      Tensor x(e * m, d, nv);
      for (const auto& [w, c] : r.terms()) {
        Tensor cur = deltas[w.slots[0]];
        for (int t = 1; t < d; ++t) cur = ttp_multiply(ft, cur, deltas[w.slots[t]]);
        x = x + cur.scaled(c);
      }
      for (const Tensor& cand : extract_pairs(x, b, e)) add_candidate(d, cand);
    }
  }

  // Sweeps to a fixed point: relations of b crossed past z words, known
  // relations crossed past b letters, and letter padding on both sides.
  bool sweep = true;
  while (sweep) {
    changed = false;
    for (int db = 2; db <= b.cap(); ++db) {
      const Subspace& jb = b.given_component(db);
      if (jb.dim() == 0) continue;
      for (int k = 1; k <= up_to; ++k) {
        LinearMap t = tau_extend(ft, db, k);
        const std::size_t ez = power_dim(e, k);
        const std::size_t mb = power_dim(m, db);
        for (const Tensor& j : jb.basis()) {
          for (std::size_t zr = 0; zr < ez; ++zr) {
            std::vector<std::pair<int, Scalar>> cols;
            for (const auto& [bw, c] : j.terms())
              cols.push_back({static_cast<int>(mi_rank(bw, m) * ez + zr), c});
            std::map<int, Scalar> rows = apply_columns(t, cols);
            std::map<std::size_t,
                     std::vector<std::pair<MultiIndex, Scalar>>>
                by_z;
            for (const auto& [row, v] : rows)
              by_z[static_cast<std::size_t>(row) / mb].push_back(
                  {mi_from_rank(static_cast<std::size_t>(row) % mb, m, db),
                   v});
            std::map<MultiIndex, std::vector<std::pair<MultiIndex, Scalar>>,
                     DeglexLess>
                by_comp;
            for (auto& [zr2, terms] : by_z) {
              Tensor bt = Tensor::from_terms(m, db, nv, terms);
              auto dec = b.ideal_component(db).decompose(bt);
              MultiIndex zw = mi_from_rank(zr2, e, k);
              for (const auto& [cw, cc] : dec.first)
                if (!cc.is_zero()) by_comp[cw].push_back({zw, cc});
            }
            for (auto& [cw, zterms] : by_comp)
              add_candidate(k, Tensor::from_terms(e, k, nv, zterms));
          }
        }
      }
    }
    for (int k = 1; k <= up_to; ++k) {
      if (span[k].dim() == 0) continue;
      LinearMap t = tau_extend(ft, 1, k);
      const std::size_t ez = power_dim(e, k);
      std::vector<Tensor> basis_copy = span[k].basis();
      for (const Tensor& l : basis_copy) {
        for (int i = 0; i < m; ++i) {
          std::vector<std::pair<int, Scalar>> cols;
          for (const auto& [zw, c] : l.terms())
            cols.push_back(
                {static_cast<int>(i * ez + mi_rank(zw, e)), c});
          std::map<int, Scalar> rows = apply_columns(t, cols);
          std::map<int, std::vector<std::pair<MultiIndex, Scalar>>> by_b;
          for (const auto& [row, v] : rows)
            by_b[row % m].push_back({mi_from_rank(row / m, e, k), v});
          for (auto& [b2, terms] : by_b)
            add_candidate(k, Tensor::from_terms(e, k, nv, terms));
        }
      }
    }
    for (int k = 1; k + 1 <= up_to; ++k) {
      if (span[k].dim() == 0) continue;
      std::vector<Tensor> basis_copy = span[k].basis();
      for (const Tensor& l : basis_copy) {
        for (int z = 0; z < e; ++z) {
          Tensor letter = Tensor::basis(e, nv, MultiIndex::single(z));
          add_candidate(k + 1, letter.concat(l));
          add_candidate(k + 1, l.concat(letter));
        }
      }
    }
    sweep = changed;
  }

  if (span[1].dim() > 0)
    throw precondition_error(
        "saturation forced a degree-one relation; the twisted hom does not "
        "exist at this truncation");
  std::map<int, std::vector<Tensor>> rels;
  for (int k = 2; k <= up_to; ++k)
    if (span[k].dim() > 0) rels[k] = span[k].basis();
  Presentation pres = Presentation::from_graded_relations(
      field, "sathom(" + b.name() + "," + a.name() + ")", z_symbol_names(n, m),
      rels, up_to);
  return HomObject{pres, b, a, true};
}

Presentation crossed_product(const Presentation& dz, const Presentation& b,
                             const LinearMap& tau_hat, int cap) {
  if (!(dz.field() == b.field()))
    throw precondition_error(
        "crossed product needs presentations over one field");
  const int e = dz.dim(), m = b.dim(), nv = dz.nvars();
  if (tau_hat.rows() != m * e || tau_hat.cols() != m * e ||
      tau_hat.nvars() != nv)
    throw precondition_error("the twisting matrix must act on b (x) z letters");
  if (!tau_hat.is_invertible())
    throw precondition_error("the twisting matrix must be invertible");
  if (cap < 2 || cap > dz.cap() || cap > b.cap())
    throw precondition_error("degree bound out of range");
  const int big = e + m;
  std::vector<std::string> gens = dz.gens();
  for (const std::string& g : b.gens()) {
    std::string name = g;
    while (std::find(gens.begin(), gens.end(), name) != gens.end())
      name += "'";
    gens.push_back(name);
  }
  auto embed = [&](const Tensor& t, int off) {
    std::vector<std::pair<MultiIndex, Scalar>> ts;
    ts.reserve(t.terms().size());
    for (const auto& [w, c] : t.terms()) {
      MultiIndex w2 = w;
      for (int& s : w2.slots) s += off;
      ts.push_back({w2, c});
    }
    return Tensor::from_terms(big, t.degree(), nv, ts);
  };
  std::map<int, std::vector<Tensor>> rels;
  for (int d = 2; d <= cap; ++d) {
    std::vector<Tensor> out;
    const Subspace& iz = dz.ideal_component(d);
    for (const Tensor& r : iz.basis()) out.push_back(embed(r, 0));
    const Subspace& jb = b.ideal_component(d);
    for (const Tensor& r : jb.basis()) out.push_back(embed(r, e));
    if (!out.empty()) rels[d] = out;
  }
  std::vector<Tensor>& r2 = rels[2];
  for (int i = 0; i < m; ++i) {
    for (int f = 0; f < e; ++f) {
      std::vector<std::pair<MultiIndex, Scalar>> ts;
      ts.push_back({MultiIndex{{e + i, f}}, Scalar::one(nv)});
      for (int row = 0; row < m * e; ++row) {
        const Scalar& v = tau_hat.at(row, i * e + f);
        if (v.is_zero()) continue;
        ts.push_back({MultiIndex{{row % e, e + row / e}}, -v});
      }
      Tensor t = Tensor::from_terms(big, 2, nv, ts);
      if (!t.is_zero()) r2.push_back(t);
    }
  }
  return Presentation::from_graded_relations(
      dz.field(), "crossed(" + dz.name() + "," + b.name() + ")", gens, rels,
      cap);
}

CPointReport check_c_point(const Presentation& b, const Presentation& a,
                           const Presentation& c, const LinearMap& tau_hat,
                           const std::vector<Tensor>& b_images,
                           const std::vector<std::vector<Tensor>>& h_images,
                           int up_to) {
  const int n = a.dim(), m = b.dim(), nv = a.nvars();
  const int e = n * m;
  if (!(a.field() == b.field()) || !(a.field() == c.field()))
    throw precondition_error("the point check needs one scalar field");
  if (up_to < 2 || up_to > a.cap() || up_to > b.cap())
    throw precondition_error("degree bound out of range");
  if (c.cap() < 2 * up_to)
    throw precondition_error(
        "the ambient cap must cover doubled degrees for the extension check");
  if (tau_hat.rows() != m * e || tau_hat.cols() != m * e ||
      tau_hat.nvars() != nv)
    throw precondition_error("the twisting matrix must act on b (x) z letters");
  if (static_cast<int>(b_images.size()) != m)
    throw precondition_error("expected one image per generator of b");
  if (static_cast<int>(h_images.size()) != n)
    throw precondition_error("expected one image row per generator of a");
  for (const auto& row : h_images)
    if (static_cast<int>(row.size()) != m)
      throw precondition_error("expected one image per z symbol");
  auto check_img = [&](const Tensor& t) {
    if (t.base_dim() != c.dim() || t.degree() != 1 || t.nvars() != nv)
      throw precondition_error("images must be degree-one elements of c");
  };
  for (const Tensor& t : b_images) check_img(t);
  for (const auto& row : h_images)
    for (const Tensor& t : row) check_img(t);

  CPointReport rep;
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < m; ++l) {
        Tensor lhs = c.quotient_product(b_images[i], h_images[k][l]);
        Tensor rhs(c.dim(), 2, nv);
        const int col = i * e + (k * m + l);
        for (int row = 0; row < m * e; ++row) {
          const Scalar& v = tau_hat.at(row, col);
          if (v.is_zero()) continue;
          const int zf = row % e, bj = row / e;
          rhs = rhs + c.quotient_product(h_images[zf / m][zf % m],
                                         b_images[bj])
                          .scaled(v);
        }
        if (!(lhs - rhs).is_zero())
          throw precondition_error(
              "the images do not intertwine the crossing law");
      }
    }
  }
  rep.intertwines = true;

  std::vector<Tensor> abar;
  abar.reserve(n);
  for (int i = 0; i < n; ++i) {
    Tensor s(c.dim(), 2, nv);
    for (int k = 0; k < m; ++k)
      s = s + c.quotient_product(h_images[i][k], b_images[k]);
    abar.push_back(s);
  }
  auto relations_vanish = [&](const Subspace& comp,
                              const std::vector<Tensor>& imgs) {
    for (const Tensor& rel : comp.basis()) {
      const int d = rel.degree();
      const int dl = imgs.empty() ? 1 : imgs[0].degree();
      Tensor val(c.dim(), d * dl, nv);
      for (const auto& [w, coeff] : rel.terms()) {
        Tensor cur = imgs[w.slots[0]];
        for (int t = 1; t < d; ++t)
          cur = c.quotient_product(cur, imgs[w.slots[t]]);
        val = val + cur.scaled(coeff);
      }
      if (!val.is_zero()) return false;
    }
    return true;
  };
  bool ext = true;
  for (int d = 2; d <= up_to; ++d)
    ext = ext && relations_vanish(a.ideal_component(d), abar);
  rep.extends_on_a = ext;

  HomObject hom = saturate_hom_general(b, a, tau_hat, up_to);
  std::vector<Tensor> himg_flat;
  himg_flat.reserve(e);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) himg_flat.push_back(h_images[i][j]);
  bool pt = true;
  for (int d = 2; d <= up_to; ++d)
    pt = pt && relations_vanish(hom.pres.ideal_component(d), himg_flat);
  rep.point_of_hom = pt;
  rep.equivalent = (ext == pt);
  return rep;
}

IdentityReport check_semigroupoid(const GlobalCollectionSample& g) {
  IdentityReport rep;
  auto tag = [](int n, int m) {
    return "(" + std::to_string(n) + "," + std::to_string(m) + ")";
  };
  auto shape_ok = [](const std::pair<int, int>& key, const LinearMap& t) {
    const int n = key.first, m = key.second;
    return n >= 1 && m >= 1 && t.rows() == m * n * m && t.cols() == m * n * m;
  };
  for (const auto& [key, t] : g) {
    const bool ok = shape_ok(key, t);
    rep.add("entry " + tag(key.first, key.second) + " has the pair-space size",
            ok);
    if (ok)
      rep.add("entry " + tag(key.first, key.second) + " is invertible",
              t.is_invertible());
  }
  for (const auto& [key, t] : g) {
    if (key.first != key.second || !shape_ok(key, t)) continue;
    const int n = key.first;
    const int nv = t.nvars();
    const Scalar one = Scalar::one(nv), zero = Scalar::zero(nv);
    bool ok = true;
    std::string wit;
    for (int i = 0; i < n && ok; ++i)
      for (int be = 0; be < n && ok; ++be)
        for (int k = 0; k < n && ok; ++k)
          for (int l = 0; l < n && ok; ++l) {
            Scalar sum = zero;
            for (int al = 0; al < n; ++al)
              sum += t.at(k * n * n + al * n + al, i * n * n + be * n + l);
            const Scalar want = (i == k && be == l) ? one : zero;
            if (sum != want) {
              ok = false;
              wit = " fails at i=" + std::to_string(i) +
                    " beta=" + std::to_string(be) + " k=" + std::to_string(k) +
                    " l=" + std::to_string(l);
            }
          }
    rep.add("counit law on entry " + tag(n, n) + wit, ok);
  }
  for (const auto& [k1, t1] : g) {
    if (!shape_ok(k1, t1)) continue;
    for (const auto& [k2, t2] : g) {
      if (!shape_ok(k2, t2) || k1.second != k2.first) continue;
      auto it3 = g.find({k1.first, k2.second});
      if (it3 == g.end() || !shape_ok(it3->first, it3->second)) continue;
      const LinearMap& t3 = it3->second;
      const int n = k1.first, m = k1.second, p = k2.second;
      const int nv = t1.nvars();
      const Scalar zero = Scalar::zero(nv);
      bool ok = true;
      std::string wit;
      for (int k = 0; k < m && ok; ++k)
        for (int s = 0; s < m && ok; ++s)
          for (int y = 0; y < m && ok; ++y)
            for (int q = 0; q < m && ok; ++q)
              for (int j = 0; j < n && ok; ++j)
                for (int x = 0; x < n && ok; ++x)
                  for (int al = 0; al < p && ok; ++al)
                    for (int r = 0; r < p && ok; ++r)
                      for (int be = 0; be < p && ok; ++be)
                        for (int pt = 0; pt < p && ok; ++pt) {
                          Scalar sum = zero;
                          for (int l = 0; l < m; ++l)
                            sum += t1.at(s * (n * m) + x * m + y,
                                         k * (n * m) + j * m + l) *
                                   t2.at(r * (m * p) + q * p + pt,
                                         al * (m * p) + l * p + be);
                          Scalar want = zero;
                          if (k == s && y == q)
                            want = t3.at(r * (n * p) + x * p + pt,
                                         al * (n * p) + j * p + be);
                          if (sum != want) {
                            ok = false;
                            wit = " fails at k=" + std::to_string(k) +
                                  " s=" + std::to_string(s) +
                                  " y=" + std::to_string(y) +
                                  " q=" + std::to_string(q) +
                                  " j=" + std::to_string(j) +
                                  " x=" + std::to_string(x) +
                                  " alpha=" + std::to_string(al) +
                                  " r=" + std::to_string(r) +
                                  " beta=" + std::to_string(be) +
                                  " ptilde=" + std::to_string(pt);
                          }
                        }
      rep.add("composition law on " + tag(n, m) + tag(m, p) + wit, ok);
    }
  }
  return rep;
}

TauFactorization factor_tau(const LinearMap& tau, int n) {
  TauFactorization f;
  const int nv = tau.nvars();
  auto fail = [&](const std::string& why) {
    f.ok = false;
    f.reason = why;
    return f;
  };
  if (n < 1 || tau.rows() != n * n * n || tau.cols() != n * n * n)
    return fail("wrong shape");
  const Scalar one = Scalar::one(nv), zero = Scalar::zero(nv);
  auto at = [&](int b2, int x, int y, int b1, int j, int l) -> const Scalar& {
    return tau.at(b2 * n * n + x * n + y, b1 * n * n + j * n + l);
  };
  for (int b2 = 0; b2 < n; ++b2)
    for (int b1 = 0; b1 < n; ++b1) {
      if (b1 == b2) continue;
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
              if (!at(b2, x, y, b1, j, l).is_zero())
                return fail("tau is not b-diagonal");
    }
  for (int r = 1; r < n; ++r)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l)
            if (at(r, x, y, r, j, l) != at(0, x, y, 0, j, l))
              return fail("theta depends on the b index");
  auto theta = [&](int j, int y, int x, int l) -> const Scalar& {
    return at(0, x, y, 0, j, l);
  };
  const Scalar ninv = Scalar::from_int(n, nv).inv();
  for (int l = 0; l < n; ++l)
    for (int y = 0; y < n; ++y)
      for (int j = 0; j < n; ++j)
        for (int x = 0; x < n; ++x) {
          Scalar sum = zero;
          for (int a2 = 0; a2 < n; ++a2)
            for (int b2 = 0; b2 < n; ++b2)
              sum += theta(a2, y, b2, l) * ninv * theta(j, b2, x, a2) * ninv;
          if (sum != theta(j, y, x, l) * ninv)
            return fail("eta is not idempotent");
        }
  Scalar tr = zero;
  for (int l = 0; l < n; ++l)
    for (int y = 0; y < n; ++y) tr += theta(l, y, y, l) * ninv;
  if (tr != one) return fail("eta trace is not one");
  int r0x = -1, r0j = 0, c0l = 0, c0y = 0;
  for (int x = 0; x < n && r0x < 0; ++x)
    for (int j = 0; j < n && r0x < 0; ++j)
      for (int l = 0; l < n && r0x < 0; ++l)
        for (int y = 0; y < n && r0x < 0; ++y)
          if (!theta(j, y, x, l).is_zero()) {
            r0x = x;
            r0j = j;
            c0l = l;
            c0y = y;
          }
  if (r0x < 0) return fail("the reduced block is not a rank-one pairing");
  const Scalar pivot = theta(r0j, c0y, r0x, c0l);
  std::vector<std::vector<Scalar>> u(n, std::vector<Scalar>(n, zero));
  std::vector<std::vector<Scalar>> v(n, std::vector<Scalar>(n, zero));
  for (int x = 0; x < n; ++x)
    for (int j = 0; j < n; ++j) u[x][j] = theta(j, c0y, x, c0l);
  for (int l = 0; l < n; ++l)
    for (int y = 0; y < n; ++y) v[l][y] = theta(r0j, y, r0x, l) / pivot;
  for (int x = 0; x < n; ++x)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int y = 0; y < n; ++y)
          if (theta(j, y, x, l) != u[x][j] * v[l][y])
            return fail("the reduced block is not a rank-one pairing");
  Scalar s0 = zero;
  for (int x = 0; x < n && s0.is_zero(); ++x)
    for (int j = 0; j < n && s0.is_zero(); ++j)
      if (!u[x][j].is_zero()) s0 = u[x][j];
  for (int x = 0; x < n; ++x)
    for (int j = 0; j < n; ++j) u[x][j] /= s0;
  for (int l = 0; l < n; ++l)
    for (int y = 0; y < n; ++y) v[l][y] *= s0;
  LinearMap sigma = LinearMap::from_rows(u, nv);
  LinearMap sigma_bar = LinearMap::from_rows(v, nv);
  if (!sigma.is_invertible() || !(sigma_bar == sigma.inverse()))
    return fail("the factors are not mutually inverse");
  LinearMap rebuilt = LinearMap::identity(n, nv).kron(
      sigma.kron(sigma_bar.transpose()));
  if (!(rebuilt == tau)) return fail("the factors do not reassemble tau");
  f.ok = true;
  f.sigma = sigma;
  f.sigma_bar = sigma_bar;
  return f;
}

Cocycle make_cocycle(const LinearMap& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() < 1)
    throw precondition_error("a cocycle needs a square matrix");
  if (!sigma.is_invertible())
    throw precondition_error("a cocycle needs an invertible matrix");
  return Cocycle{sigma, sigma.rows(), CocycleOrientation::inverse_ladder};
}

Scalar cocycle_eval(const Cocycle& chi, const MultiIndex& left,
                    const MultiIndex& right) {
  LadderCache lad(chi);
  return lad.eval(left, right, false);
}

Scalar cocycle_inverse_eval(const Cocycle& chi, const MultiIndex& left,
                            const MultiIndex& right) {
  LadderCache lad(chi);
  return lad.eval(left, right, true);
}

CocycleOrientation resolve_cocycle_orientation(const LinearMap& sigma,
                                               const Presentation& a) {
  const int n = a.dim(), nv = a.nvars();
  if (sigma.rows() != n || sigma.cols() != n || sigma.nvars() != nv)
    throw precondition_error("the symmetry must act on the generator slots");
  if (!sigma.is_invertible())
    throw precondition_error("the symmetry must be invertible");
  Presentation fa = Presentation::make(a.field(), "free", a.gens(),
                                       std::vector<FreeElement>{}, 2);
  HomObject fe = end_object(fa);
  const LinearMap sm1 = sigma.power(-1);
  const LinearMap conj = shift_conjugation(sigma, sigma, -1);
  const int ed = n * n;
  for (CocycleOrientation o :
       {CocycleOrientation::inverse_ladder,
        CocycleOrientation::inverse_ladder_flipped,
        CocycleOrientation::direct_ladder,
        CocycleOrientation::direct_ladder_flipped}) {
    Cocycle chi{sigma, n, o};
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j) {
        Tensor ei = Tensor::basis(n, nv, MultiIndex::single(i));
        Tensor ej = Tensor::basis(n, nv, MultiIndex::single(j));
        Tensor lhs = m_chi(chi, fa, ei, ej);
        Tensor rhs = fa.normal_form(ei.concat(apply_all_slots(sm1, ej)));
        if (!(lhs - rhs).is_zero()) ok = false;
      }
    for (int z1 = 0; z1 < ed && ok; ++z1)
      for (int z2 = 0; z2 < ed && ok; ++z2) {
        Tensor t1 = Tensor::basis(ed, nv, MultiIndex::single(z1));
        Tensor t2 = Tensor::basis(ed, nv, MultiIndex::single(z2));
        Tensor lhs = mu_chi(chi, fe, t1, t2);
        Tensor rhs = fe.pres.normal_form(t1.concat(apply_all_slots(conj, t2)));
        if (!(lhs - rhs).is_zero()) ok = false;
      }
    if (ok) return o;
  }
  throw internal_check_error(
      "no ladder orientation satisfies the defining identities");
}

IdentityReport cocycle_checks(const Cocycle& chi, const Presentation& a,
                              int up_to) {
  const int n = chi.n;
  const int ed = n * n;
  const int nv = chi.sigma.nvars();
  if (a.dim() != n || a.nvars() != nv)
    throw precondition_error("cocycle dimension must match the algebra");
  if (up_to < 1 || up_to > a.cap())
    throw precondition_error("degree bound out of range");
  IdentityReport rep;
  LadderCache lad(chi);
  std::vector<std::vector<MultiIndex>> words(up_to + 1);
  words[0] = {MultiIndex::empty()};
  for (int d = 1; d <= up_to; ++d) words[d] = all_indices(ed, d);
  const Scalar one = Scalar::one(nv), zero = Scalar::zero(nv);
  auto eps = [&](const MultiIndex& w) {
    return word_diagonal(n, w) ? one : zero;
  };

  {
    bool ok = true;
    for (int d = 0; d <= up_to && ok; ++d)
      for (const MultiIndex& w : words[d]) {
        const Scalar e0 = eps(w);
        if (lad.eval(MultiIndex::empty(), w, false) != e0 ||
            lad.eval(w, MultiIndex::empty(), false) != e0 ||
            lad.eval(MultiIndex::empty(), w, true) != e0 ||
            lad.eval(w, MultiIndex::empty(), true) != e0) {
          ok = false;
          break;
        }
      }
    rep.add("counital on both sides", ok);
  }

  // Splits a word along a middle chain: word(upper -> chain) and
  // word(chain -> lower).
  auto split_upper = [&](const MultiIndex& w, const std::vector<int>& ch) {
    MultiIndex out = MultiIndex::empty();
    out.slots.reserve(w.slots.size());
    for (std::size_t t = 0; t < w.slots.size(); ++t)
      out.slots.push_back((w.slots[t] / n) * n + ch[t]);
    return out;
  };
  auto split_lower = [&](const MultiIndex& w, const std::vector<int>& ch) {
    MultiIndex out = MultiIndex::empty();
    out.slots.reserve(w.slots.size());
    for (std::size_t t = 0; t < w.slots.size(); ++t)
      out.slots.push_back(ch[t] * n + (w.slots[t] % n));
    return out;
  };

  {
    bool ok = true;
    std::string wit;
    for (int r = 1; r <= up_to && ok; ++r)
      for (int s = 1; s <= up_to && ok; ++s)
        for (int t = 1; t <= up_to && ok; ++t)
          for (const MultiIndex& u : words[r]) {
            if (!ok) break;
            for (const MultiIndex& v : words[s]) {
              if (!ok) break;
              for (const MultiIndex& w : words[t]) {
                Scalar lhs = zero;
                {
                  std::vector<int> al(r, 0);
                  do {
                    MultiIndex u1 = split_upper(u, al);
                    MultiIndex u2 = split_lower(u, al);
                    std::vector<int> be(s, 0);
                    do {
                      Scalar f1 = lad.eval(u1, split_upper(v, be), false);
                      if (!f1.is_zero())
                        lhs += f1 * lad.eval(u2.concat(split_lower(v, be)), w,
                                             false);
                    } while (next_chain(be, n));
                  } while (next_chain(al, n));
                }
                Scalar rhs = zero;
                {
                  std::vector<int> be(s, 0);
                  do {
                    MultiIndex v1 = split_upper(v, be);
                    MultiIndex v2 = split_lower(v, be);
                    std::vector<int> ga(t, 0);
                    do {
                      Scalar f1 = lad.eval(v1, split_upper(w, ga), false);
                      if (!f1.is_zero())
                        rhs += f1 * lad.eval(u, v2.concat(split_lower(w, ga)),
                                             false);
                    } while (next_chain(ga, n));
                  } while (next_chain(be, n));
                }
                if (lhs != rhs) {
                  ok = false;
                  wit = " first failure at degrees (" + std::to_string(r) +
                        "," + std::to_string(s) + "," + std::to_string(t) +
                        ")";
                  break;
                }
              }
            }
          }
    rep.add("two-cocycle identity on monomial triples" + wit, ok);
  }

  {
    bool ok = true;
    std::string wit;
    for (int r = 0; r <= up_to && ok; ++r)
      for (int s = 0; s <= up_to && ok; ++s)
        for (const MultiIndex& u : words[r]) {
          if (!ok) break;
          for (const MultiIndex& v : words[s]) {
            const Scalar want = eps(u) * eps(v);
            for (bool inv_first : {false, true}) {
              Scalar got = zero;
              std::vector<int> al(r, 0);
              do {
                MultiIndex u1 = split_upper(u, al);
                MultiIndex u2 = split_lower(u, al);
                std::vector<int> be(s, 0);
                do {
                  Scalar f1 =
                      lad.eval(u1, split_upper(v, be), inv_first);
                  if (!f1.is_zero())
                    got += f1 * lad.eval(u2, split_lower(v, be), !inv_first);
                } while (next_chain(be, n));
              } while (next_chain(al, n));
              if (got != want) {
                ok = false;
                wit = " first failure at degrees (" + std::to_string(r) + "," +
                      std::to_string(s) + ")";
                break;
              }
            }
            if (!ok) break;
          }
        }
    rep.add("convolution inverse on both sides" + wit, ok);
  }

  {
    HomObject e = end_object(a);
    bool ok = true;
    for (int d = 2; d <= up_to && ok; ++d) {
      const Subspace& comp = e.pres.ideal_component(d);
      for (const Tensor& rel : comp.basis()) {
        Scalar e0 = zero;
        for (const auto& [w, c] : rel.terms()) e0 += c * eps(w);
        if (!e0.is_zero()) {
          ok = false;
          break;
        }
        for (int r = 1; r <= up_to && ok; ++r) {
          MultiIndex diag = MultiIndex::empty();
          for (int t = 0; t < r; ++t) diag.slots.push_back(0);
          Scalar s1 = zero, s2 = zero;
          for (const auto& [w, c] : rel.terms()) {
            s1 += c * lad.eval(diag, w, false);
            s2 += c * lad.eval(diag, w, true);
          }
          if (!s1.is_zero() || !s2.is_zero()) ok = false;
        }
        if (!ok) break;
      }
    }
    rep.add("descends to the internal end object", ok);
  }
  return rep;
}

Tensor mu_chi(const Cocycle& chi, const HomObject& e, const Tensor& x,
              const Tensor& y) {
  const int n = chi.n;
  const int ed = n * n;
  const Presentation& ep = e.pres;
  const int nv = ep.nvars();
  if (ep.dim() != ed || chi.sigma.nvars() != nv)
    throw precondition_error("cocycle dimension must match the end object");
  if (x.base_dim() != ed || y.base_dim() != ed || x.nvars() != nv ||
      y.nvars() != nv)
    throw precondition_error("mu_chi operands must live on the z letters");
  const int r = x.degree(), s = y.degree();
  if (r + s > ep.cap())
    throw precondition_error("mu_chi exceeds the truncation cap");
  if (r == 0)
    return ep.normal_form(y.scaled(x.coefficient(MultiIndex::empty())));
  if (s == 0)
    return ep.normal_form(x.scaled(y.coefficient(MultiIndex::empty())));
  LadderCache lad(chi);
  std::vector<std::pair<MultiIndex, Scalar>> acc;
  for (const auto& [u, cu] : x.terms()) {
    MultiIndex udi = MultiIndex::empty(), udj = MultiIndex::empty();
    udi.slots.reserve(r);
    udj.slots.reserve(r);
    for (int letter : u.slots) {
      udi.slots.push_back((letter / n) * (n + 1));
      udj.slots.push_back((letter % n) * (n + 1));
    }
    for (const auto& [v, cv] : y.terms()) {
      std::vector<int> c(s, 0);
      do {
        MultiIndex vkc = MultiIndex::empty();
        vkc.slots.reserve(s);
        for (int t = 0; t < s; ++t)
          vkc.slots.push_back((v.slots[t] / n) * n + c[t]);
        Scalar lhs = lad.eval(udi, vkc, false);
        if (lhs.is_zero()) continue;
        std::vector<int> d(s, 0);
        do {
          MultiIndex vcd = MultiIndex::empty(), vdl = MultiIndex::empty();
          vcd.slots.reserve(s);
          vdl.slots.reserve(s);
          for (int t = 0; t < s; ++t) {
            vcd.slots.push_back(c[t] * n + d[t]);
            vdl.slots.push_back(d[t] * n + (v.slots[t] % n));
          }
          Scalar rhs = lad.eval(udj, vdl, true);
          if (!rhs.is_zero())
            acc.push_back({u.concat(vcd), cu * cv * lhs * rhs});
        } while (next_chain(d, n));
      } while (next_chain(c, n));
    }
  }
  Tensor t = Tensor::from_terms(ed, r + s, nv, acc);
  return ep.normal_form(t);
}

Presentation end_chi_presentation(const Cocycle& chi, const Presentation& a,
                                  int up_to) {
  const int n = a.dim();
  const int ed = n * n;
  const int nv = a.nvars();
  if (chi.n != n || chi.sigma.nvars() != nv)
    throw precondition_error("cocycle dimension must match the algebra");
  if (up_to < 2 || up_to > a.cap())
    throw precondition_error("degree bound out of range");
  HomObject e = end_object(a);
  auto eval = [&](const MultiIndex& w) {
    Tensor cur = Tensor::basis(ed, nv, MultiIndex::single(w.slots[0]));
    for (std::size_t t = 1; t < w.slots.size(); ++t)
      cur = mu_chi(chi, e, cur,
                   Tensor::basis(ed, nv, MultiIndex::single(w.slots[t])));
    return cur;
  };
  return kernel_presentation(a.field(), "end_chi(" + a.name() + ")",
                             z_symbol_names(n, n), ed, up_to, eval);
}

Tensor m_chi(const Cocycle& chi, const Presentation& a, const Tensor& x,
             const Tensor& y) {
  const int n = a.dim(), nv = a.nvars();
  if (chi.n != n || chi.sigma.nvars() != nv)
    throw precondition_error("cocycle dimension must match the algebra");
  if (x.base_dim() != n || y.base_dim() != n || x.nvars() != nv ||
      y.nvars() != nv)
    throw precondition_error("m_chi operands must live on the generators");
  const int r = x.degree(), s = y.degree();
  if (r + s > a.cap())
    throw precondition_error("m_chi exceeds the truncation cap");
  if (r == 0)
    return a.normal_form(y.scaled(x.coefficient(MultiIndex::empty())));
  if (s == 0)
    return a.normal_form(x.scaled(y.coefficient(MultiIndex::empty())));
  return a.quotient_product(x, apply_all_slots(collapse_map(chi, r), y));
}

Presentation algebra_chi(const Cocycle& chi, const Presentation& a,
                         int up_to) {
  const int n = a.dim(), nv = a.nvars();
  if (chi.n != n || chi.sigma.nvars() != nv)
    throw precondition_error("cocycle dimension must match the algebra");
  if (up_to < 2 || up_to > a.cap())
    throw precondition_error("degree bound out of range");
  auto eval = [&](const MultiIndex& w) {
    Tensor cur = Tensor::basis(n, nv, MultiIndex::single(w.slots[0]));
    for (std::size_t t = 1; t < w.slots.size(); ++t)
      cur = m_chi(chi, a, cur,
                  Tensor::basis(n, nv, MultiIndex::single(w.slots[t])));
    return cur;
  };
  return kernel_presentation(a.field(), "algebra_chi(" + a.name() + ")",
                             a.gens(), n, up_to, eval);
}

IdentityReport twist_equivalences(const Presentation& a,
                                  const LinearMap& sigma, int up_to) {
  const int n = a.dim(), nv = a.nvars();
  if (sigma.rows() != n || sigma.cols() != n || sigma.nvars() != nv)
    throw precondition_error("the symmetry must act on the generator slots");
  if (!sigma.is_invertible())
    throw precondition_error("the symmetry must be invertible");
  if (up_to < 2 || up_to > a.cap())
    throw precondition_error("degree bound out of range");
  if (!is_stable_under(a, sigma, up_to))
    throw precondition_error("the symmetry must preserve the relation ideal");
  IdentityReport rep;
  Cocycle chi = make_cocycle(sigma);
  chi.orientation = resolve_cocycle_orientation(sigma, a);
  HomObject tw = hom_upsilon(a, a, FactorizableTwist{sigma, sigma}, up_to);
  Presentation ec = end_chi_presentation(chi, a, up_to);
  bool ok = true;
  for (int d = 2; d <= up_to; ++d)
    ok = ok && tw.pres.ideal_component(d) == ec.ideal_component(d);
  rep.add("the twisted end relations match the convolution twist degreewise",
          ok);
  Presentation def = sigma_deform(a, sigma, DeformDirection::ascending);
  Presentation ac = algebra_chi(chi, a, up_to);
  rep.add("the deformed algebra equals the convolution-twisted algebra",
          presentations_equal(def, ac, up_to));
  Presentation line = unit_object(UnitKind::free_line, a.field(), a.cap());
  HomObject lt = hom_upsilon(
      line, a, FactorizableTwist{sigma, LinearMap::identity(1, nv)}, up_to);
  rep.add("the twisted hom from the line recovers the deformation",
          presentations_equal(lt.pres, def, up_to));
  return rep;
}

IdentityReport twist_equivalences_pair(const Presentation& b,
                                       const LinearMap& sigma_b,
                                       const Presentation& a,
                                       const LinearMap& sigma_a, int up_to) {
  validate_twisted_pair(b, a, FactorizableTwist{sigma_a, sigma_b}, up_to);
  if (!is_stable_under(a, sigma_a, up_to) ||
      !is_stable_under(b, sigma_b, up_to))
    throw precondition_error(
        "both symmetries must preserve their relation ideals");
  IdentityReport rep;
  Cocycle cb = make_cocycle(sigma_b);
  cb.orientation = resolve_cocycle_orientation(sigma_b, b);
  Cocycle ca = make_cocycle(sigma_a);
  ca.orientation = resolve_cocycle_orientation(sigma_a, a);
  HomObject tw = hom_upsilon(b, a, FactorizableTwist{sigma_a, sigma_b}, up_to);
  Presentation bc = algebra_chi(cb, b, up_to);
  Presentation ac = algebra_chi(ca, a, up_to);
  HomObject plain = hom_object(bc, ac);
  rep.add("the twisted hom equals the hom of the twisted algebras",
          presentations_equal(tw.pres, plain.pres, up_to));
  return rep;
}

LinearMap frt_r_matrix(const FieldSpec& field) {
  auto qi = field.index_of("q");
  if (!qi) throw precondition_error("the braid matrix needs a field with q");
  const int nv = field.nvars();
  const Scalar q = Scalar::variable(*qi, nv);
  const Scalar one = Scalar::one(nv), zero = Scalar::zero(nv);
  const Scalar qinv = q.inv();
  std::vector<std::vector<Scalar>> rows(4, std::vector<Scalar>(4, zero));
  rows[0][0] = one;
  rows[3][3] = one;
  rows[1][1] = qinv;
  rows[2][2] = qinv;
  rows[1][2] = one - qinv * qinv;
  return LinearMap::from_rows(rows, nv);
}

FrtReport frt_suite(const FieldSpec& field, const LinearMap& phi, int up_to) {
  if (up_to < 2) throw precondition_error("degree bound must be at least 2");
  const int nv = field.nvars();
  if (phi.rows() != 2 || phi.cols() != 2 || phi.nvars() != nv)
    throw precondition_error("the symmetry must be 2x2 over the field");
  if (!phi.is_invertible())
    throw precondition_error("the symmetry must be invertible");
  const LinearMap r = frt_r_matrix(field);
  IdentityReport checks;
  const LinearMap i2 = LinearMap::identity(2, nv);
  const LinearMap r12 = r.kron(i2);
  const LinearMap r23 = i2.kron(r);
  const LinearMap s23 = i2.kron(swap_transport(2, 2, nv));
  const LinearMap r13 = s23 * r12 * s23;
  checks.add("braid matrix satisfies the quantum Yang-Baxter equation",
             r12 * r13 * r23 == r23 * r13 * r12);
  const LinearMap p = swap_transport(2, 2, nv);
  const Scalar minus_one = Scalar::from_int(-1, nv);
  auto column_span = [&](const LinearMap& mat) {
    std::vector<Tensor> cols;
    for (int c = 0; c < 4; ++c) {
      std::vector<std::pair<MultiIndex, Scalar>> ts;
      for (int row = 0; row < 4; ++row)
        if (!mat.at(row, c).is_zero())
          ts.push_back({mi_from_rank(row, 2, 2), mat.at(row, c)});
      Tensor t = Tensor::from_terms(2, 2, nv, ts);
      if (!t.is_zero()) cols.push_back(t);
    }
    return Subspace::span(2, 2, nv, cols);
  };
  Subspace relspan = column_span(r + p.scaled(minus_one));
  const Scalar q = Scalar::variable(*field.index_of("q"), nv);
  Tensor qrel = Tensor::basis(2, nv, MultiIndex{{0, 1}}) -
                Tensor::basis(2, nv, MultiIndex{{1, 0}}).scaled(q);
  Subspace qspan = Subspace::span(2, 2, nv, {qrel});
  checks.add("braid relation line is the quantum plane relation",
             relspan.dim() == 1 && relspan == qspan);
  const int cap0 = std::max(up_to, 2);
  std::map<int, std::vector<Tensor>> arel;
  arel[2] = relspan.basis();
  Presentation a_r = Presentation::from_graded_relations(
      field, "A_R", {"x", "y"}, arel, cap0);
  auto flat = [](int i, int j) { return i * 2 + j; };
  std::vector<Tensor> mrels;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int n0 = 0; n0 < 2; ++n0)
        for (int m0 = 0; m0 < 2; ++m0) {
          std::vector<std::pair<MultiIndex, Scalar>> ts;
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
              const Scalar& c1 = r.at(flat(k, l), flat(i, j));
              if (!c1.is_zero())
                ts.push_back({MultiIndex{{flat(k, n0), flat(l, m0)}}, c1});
              const Scalar& c2 = r.at(flat(n0, m0), flat(k, l));
              if (!c2.is_zero())
                ts.push_back({MultiIndex{{flat(j, l), flat(i, k)}}, -c2});
            }
          Tensor t = Tensor::from_terms(4, 2, nv, ts);
          if (!t.is_zero()) mrels.push_back(t);
        }
  std::map<int, std::vector<Tensor>> mm;
  mm[2] = mrels;
  Presentation frt = Presentation::from_graded_relations(
      field, "M_R", z_symbol_names(2, 2), mm, cap0);
  checks.add("matrix relation space has dimension six",
             frt.ideal_component(2).dim() == 6);
  HomObject er = end_object(a_r);
  checks.add("end object maps onto the matrix bialgebra",
             !morphism_failure(er.pres, frt, LinearMap::identity(4, nv), up_to)
                  .has_value());
  checks.add("matrix relations strictly contain the end relations",
             frt.ideal_component(2).contains(er.pres.ideal_component(2)) &&
                 frt.ideal_component(2).dim() >
                     er.pres.ideal_component(2).dim());
  Presentation em = e_marked(a_r);
  checks.add("marked end object equals the matrix bialgebra",
             presentations_equal(em, frt, up_to));
  const LinearMap pp = phi.kron(phi);
  checks.add("the symmetry commutes with the braid matrix",
             r * pp == pp * r);
  checks.add("the symmetry preserves the plane relations",
             is_stable_under(a_r, phi, up_to));
  const LinearMap rphi = phi.inverse().kron(i2) * r * i2.kron(phi);
  Subspace relspan2 = column_span(rphi + p.scaled(minus_one));
  std::map<int, std::vector<Tensor>> arel2;
  arel2[2] = relspan2.basis();
  Presentation a_r_phi = Presentation::from_graded_relations(
      field, "A_Rphi", {"x", "y"}, arel2, cap0);
  HomObject hu = hom_upsilon(a_r, a_r, FactorizableTwist{phi, phi}, up_to);
  checks.add("twisted end equals the end of the conjugated plane",
             presentations_equal(hu.pres, end_object(a_r_phi).pres, up_to));
  return FrtReport{a_r, frt, a_r_phi, checks};
}

CollapseReport nongraded_crossing_probe(const Scalar& lambda,
                                        const LinearMap& sigma_a,
                                        const LinearMap& sigma_b,
                                        const LinearMap& sigma_c) {
  const int nv = lambda.nvars();
  for (const LinearMap* s : {&sigma_a, &sigma_b, &sigma_c})
    if (s->rows() != 2 || s->cols() != 2 || s->nvars() != nv ||
        !s->is_invertible())
      throw precondition_error(
          "the probe needs invertible 2x2 symmetries over the field of "
          "lambda");
  CollapseReport rep;
  rep.surviving_dim = 4;
  if (lambda.is_zero()) return rep;
  const Scalar one = Scalar::one(nv);
  const LinearMap kg = shift_conjugation(sigma_b, sigma_c, 1);
  std::vector<Tensor> forced;
  for (int c = 0; c < 4; ++c) {
    std::vector<std::pair<MultiIndex, Scalar>> ts;
    for (int row = 0; row < 4; ++row) {
      Scalar v = (row == c ? one : Scalar::zero(nv)) - kg.at(row, c);
      if (!v.is_zero()) ts.push_back({MultiIndex::single(row), v});
    }
    Tensor t = Tensor::from_terms(4, 1, nv, ts);
    if (!t.is_zero()) forced.push_back(t);
  }
  Subspace s = Subspace::span(4, 1, nv, forced);
  rep.forced_collapse = s.dim() > 0;
  rep.surviving_dim = 4 - s.dim();
  if (!rep.forced_collapse) return rep;
  const LinearMap kh = shift_conjugation(sigma_a, sigma_b, 1);
  std::vector<MultiIndex> ys = s.complement();
  bool obstructed = false;
  for (int n0 = 0; n0 < 2 && !obstructed; ++n0)
    for (int l = 0; l < 2 && !obstructed; ++l)
      for (std::size_t mu = 0; mu < ys.size() && !obstructed; ++mu) {
        std::vector<Scalar> w(4, Scalar::zero(nv));
        for (int j = 0; j < 2; ++j) {
          Tensor red = s.reduce(Tensor::basis(4, nv, MultiIndex::single(j * 2 + l)));
          Scalar alpha = red.coefficient(ys[mu]);
          if (alpha.is_zero()) continue;
          const int col = n0 * 2 + j;
          for (int row = 0; row < 4; ++row) {
            Scalar v = (row == col ? one : Scalar::zero(nv)) - kh.at(row, col);
            w[row] += alpha * v;
          }
        }
        for (const Scalar& x : w)
          if (!x.is_zero()) obstructed = true;
      }
  rep.obstructed = obstructed;
  rep.failure_detected = rep.forced_collapse && rep.obstructed;
  return rep;
}

}  // namespace qls
