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

#include "qls/ttp.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "qls/errors.hpp"
#include "qls/subspace.hpp"

namespace qls {

struct TwistingMap::Cache {
  std::mutex mu;
  std::map<std::pair<int, int>, LinearMap> extensions;
  std::map<int, LinearMap> gammas;
  std::optional<Presentation> plain;
};

namespace {

// Adjacent move carrying a (B, A) slot pair to (A, B): domain flat index
// b*n + a, codomain flat a*m + b.
LinearMap move_block(const TwistingMap& t) {
  const int n = t.A_pres.dim(), m = t.B_pres.dim();
  return swap_transport(m, n, t.tau_hat.nvars()) * t.tau_hat;
}

// Sorts a mixed slot layout (tag 0 = A slot of dim n, tag 1 = B slot of dim
// m) into all-A-then-all-B form by bubbling each A slot left past the B
// slots before it, taking A slots left to right; block is the adjacent
// (B,A)->(A,B) move. Returns the matrix from the tagged layout, flattened
// big-endian, to the sorted one.
LinearMap sort_moves(const std::vector<int>& tags, const LinearMap& block,
                     int n, int m, int nvars) {
  long long total = 1;
  for (int tg : tags) total *= (tg == 0 ? n : m);
  LinearMap acc = LinearMap::identity(static_cast<int>(total), nvars);
  std::vector<int> lay = tags;
  for (int i = 1; i < static_cast<int>(lay.size()); ++i) {
    if (lay[i] != 0) continue;
    int p = i;
    while (p > 0 && lay[p - 1] == 1) {
      long long pre = 1, post = 1;
      for (int s = 0; s < p - 1; ++s) pre *= (lay[s] == 0 ? n : m);
      for (int s = p + 1; s < static_cast<int>(lay.size()); ++s)
        post *= (lay[s] == 0 ? n : m);
      acc = LinearMap::identity(static_cast<int>(pre), nvars)
                .kron(block)
                .kron(LinearMap::identity(static_cast<int>(post), nvars)) *
            acc;
      std::swap(lay[p - 1], lay[p]);
      --p;
    }
  }
  return acc;
}

// Permutation matrix reordering slot digits: output slot s reads input slot
// src[s]; in_radices describes the input layout, flattened big-endian.
LinearMap reorder_slots(const std::vector<int>& in_radices,
                        const std::vector<int>& src, int nvars) {
  long long total = 1;
  for (int r : in_radices) total *= r;
  LinearMap out(static_cast<int>(total), static_cast<int>(total), nvars);
  std::vector<int> dig(in_radices.size());
  for (long long idx = 0; idx < total; ++idx) {
    long long tmp = idx;
    for (int s = static_cast<int>(in_radices.size()) - 1; s >= 0; --s) {
      dig[s] = static_cast<int>(tmp % in_radices[s]);
      tmp /= in_radices[s];
    }
    long long o = 0;
    for (int sl : src) o = o * in_radices[sl] + dig[sl];
    out.at(static_cast<int>(o), static_cast<int>(idx)) = Scalar::one(nvars);
  }
  return out;
}

const Presentation& plain_product(const TwistingMap& t) {
  std::lock_guard<std::mutex> g(t.cache->mu);
  if (!t.cache->plain)
    t.cache->plain = product(ProductKind::circ, t.A_pres, t.B_pres);
  return *t.cache->plain;
}

// Whether both extension conditions hold at the given total degree: for
// every split p+q = total, the extension carries J_p (x) A-full into A-full
// (x) J_p and B-full (x) I_q into I_q (x) B-full.
bool compatible_at(const TwistingMap& t, int total) {
  const int n = t.A_pres.dim(), m = t.B_pres.dim();
  const int nv = t.tau_hat.nvars();
  for (int p = 1; p < total; ++p) {
    const int q = total - p;
    const std::size_t np = power_dim(m, p), nq = power_dim(n, q);
    const Subspace& jp = t.B_pres.ideal_component(p);
    const Subspace& iq = t.A_pres.ideal_component(q);
    if (jp.dim() == 0 && iq.dim() == 0) continue;
    const LinearMap e = tau_extend(t, p, q);
    for (const Tensor& v : jp.basis()) {
      std::vector<Scalar> coeff(np, Scalar::zero(nv));
      for (const auto& [mi, c] : v.terms()) coeff[mi_rank(mi, m)] = c;
      for (std::size_t u = 0; u < nq; ++u) {
        std::vector<Scalar> dom(np * nq, Scalar::zero(nv));
        for (std::size_t w = 0; w < np; ++w) dom[w * nq + u] = coeff[w];
        const std::vector<Scalar> img = e.apply(dom);
        for (std::size_t r = 0; r < nq; ++r) {
          std::vector<Scalar> slice(img.begin() + r * np,
                                    img.begin() + (r + 1) * np);
          if (!jp.contains(Tensor::from_dense(m, p, nv, slice))) return false;
        }
      }
    }
    for (const Tensor& v : iq.basis()) {
      std::vector<Scalar> coeff(nq, Scalar::zero(nv));
      for (const auto& [mi, c] : v.terms()) coeff[mi_rank(mi, n)] = c;
      for (std::size_t w = 0; w < np; ++w) {
        std::vector<Scalar> dom(np * nq, Scalar::zero(nv));
        for (std::size_t u = 0; u < nq; ++u) dom[w * nq + u] = coeff[u];
        const std::vector<Scalar> img = e.apply(dom);
        for (std::size_t wb = 0; wb < np; ++wb) {
          std::vector<Scalar> slice(nq, Scalar::zero(nv));
          for (std::size_t r = 0; r < nq; ++r) slice[r] = img[r * np + wb];
          if (!iq.contains(Tensor::from_dense(n, q, nv, slice))) return false;
        }
      }
    }
  }
  return true;
}

// The canonical swap isomorphism on degree-d components, in pair
// coordinates: re-sort the opposite's (B,A) pairs, apply the (d,d)
// extension, and re-interleave into (A,B) pairs.
LinearMap swap_iso_degree(const TwistingMap& t, int d) {
  const int n = t.A_pres.dim(), m = t.B_pres.dim();
  const int nv = t.tau_hat.nvars();
  std::vector<int> in_rad, mid_rad, src_in(2 * d), src_out(2 * d);
  for (int s = 0; s < d; ++s) {
    in_rad.push_back(m);
    in_rad.push_back(n);
  }
  for (int s = 0; s < d; ++s) mid_rad.push_back(n);
  for (int s = 0; s < d; ++s) mid_rad.push_back(m);
  for (int s = 0; s < d; ++s) {
    src_in[s] = 2 * s;
    src_in[d + s] = 2 * s + 1;
    src_out[2 * s] = s;
    src_out[2 * s + 1] = d + s;
  }
  return reorder_slots(mid_rad, src_out, nv) * tau_extend(t, d, d) *
         reorder_slots(in_rad, src_in, nv);
}

}  // namespace

TwistingMap twisting_from_matrix(const LinearMap& tau_hat,
                                 const Presentation& a, const Presentation& b,
                                 int up_to) {
  if (a.field().indeterminates != b.field().indeterminates)
    throw precondition_error("factors live over different fields");
  if (a.is_degenerate() || b.is_degenerate())
    throw precondition_error("twisting requires non-degenerate factors");
  const int n = a.dim(), m = b.dim();
  if (tau_hat.rows() != m * n || tau_hat.cols() != m * n)
    throw precondition_error("twisting matrix has wrong shape");
  if (!tau_hat.is_invertible())
    throw precondition_error("twisting matrix is singular");

  TwistingMap t;
  t.B_pres = b;
  t.A_pres = a;
  t.tau_hat = tau_hat;
  t.cache = std::make_shared<TwistingMap::Cache>();
  t.validated.invertible = true;

  const int cap = std::min({up_to, a.cap(), b.cap()});
  for (int total = 3; total <= cap; ++total) {
    if (!compatible_at(t, total)) {
      t.validated.failure_degree = total;
      throw precondition_error(
          "twisting is incompatible with the relations at degree " +
          std::to_string(total));
    }
  }
  t.validated.checked_up_to = cap;
  return t;
}

TwistingMap flip_twisting(const Presentation& a, const Presentation& b,
                          int up_to) {
  return twisting_from_matrix(
      LinearMap::identity(a.dim() * b.dim(), a.field().nvars()), a, b, up_to);
}

LinearMap tau_extend(const TwistingMap& t, int p, int q) {
  if (p < 0 || q < 0) throw precondition_error("negative extension degree");
  {
    std::lock_guard<std::mutex> g(t.cache->mu);
    auto it = t.cache->extensions.find({p, q});
    if (it != t.cache->extensions.end()) return it->second;
  }
  const int n = t.A_pres.dim(), m = t.B_pres.dim();
  std::vector<int> tags(p, 1);
  tags.insert(tags.end(), q, 0);
  LinearMap e = sort_moves(tags, move_block(t), n, m, t.tau_hat.nvars());
  std::lock_guard<std::mutex> g(t.cache->mu);
  return t.cache->extensions.emplace(std::make_pair(p, q), std::move(e))
      .first->second;
}

Tensor ttp_multiply(const TwistingMap& t, const Tensor& x, const Tensor& y) {
  const int n = t.A_pres.dim(), m = t.B_pres.dim();
  const int nv = t.tau_hat.nvars();
  const int nm = n * m;
  if (x.base_dim() != nm || y.base_dim() != nm)
    throw precondition_error("operand is not over the pair space");
  const Presentation& plain = plain_product(t);
  const int d1 = x.degree(), d2 = y.degree();
  if (d1 + d2 > plain.cap())
    throw precondition_error("product degree exceeds the truncation cap");
  if (x.is_zero() || y.is_zero()) return Tensor(nm, d1 + d2, nv);
  if (d1 == 0)
    return plain.normal_form(y.scaled(x.coefficient(MultiIndex::empty())));
  if (d2 == 0)
    return plain.normal_form(x.scaled(y.coefficient(MultiIndex::empty())));
  const LinearMap e = tau_extend(t, d1, d2);
  const std::size_t rows = power_dim(n, d2) * power_dim(m, d1);
  std::vector<std::pair<MultiIndex, Scalar>> acc;
  for (const auto& [mx, cx] : x.terms()) {
    std::vector<int> ux(d1), wx(d1);
    for (int s = 0; s < d1; ++s) {
      ux[s] = mx.slots[s] / m;
      wx[s] = mx.slots[s] % m;
    }
    for (const auto& [my, cy] : y.terms()) {
      const Scalar cxy = cx * cy;
      long long col = 0;
      for (int s = 0; s < d1; ++s) col = col * m + wx[s];
      for (int s = 0; s < d2; ++s) col = col * n + my.slots[s] / m;
      for (std::size_t r = 0; r < rows; ++r) {
        const Scalar& c = e.at(static_cast<int>(r), static_cast<int>(col));
        if (c.is_zero()) continue;
        std::vector<int> slots(d1 + d2);
        std::size_t tmp = r;
        for (int s = d1 - 1; s >= 0; --s) {
          slots[s] = ux[s] * m + static_cast<int>(tmp % m);
          tmp /= m;
        }
        for (int s = d2 - 1; s >= 0; --s) {
          slots[d1 + s] = static_cast<int>(tmp % n) * m + my.slots[s] % m;
          tmp /= n;
        }
        acc.push_back({MultiIndex{std::move(slots)}, cxy * c});
      }
    }
  }
  return plain.normal_form(Tensor::from_terms(nm, d1 + d2, nv, std::move(acc)));
}

LinearMap gamma_matrix(const TwistingMap& t, int r) {
  if (r < 1) throw precondition_error("word length must be at least 1");
  {
    std::lock_guard<std::mutex> g(t.cache->mu);
    auto it = t.cache->gammas.find(r);
    if (it != t.cache->gammas.end()) return it->second;
  }
  const int n = t.A_pres.dim(), m = t.B_pres.dim();
  const int nv = t.tau_hat.nvars();
  std::vector<int> tags;
  for (int i = 0; i < r; ++i) {
    tags.push_back(0);
    tags.push_back(1);
  }
  const LinearMap s_tau = sort_moves(tags, move_block(t), n, m, nv);
  const LinearMap s_plain = sort_moves(tags, swap_transport(m, n, nv), n, m, nv);
  LinearMap g = s_plain.inverse() * s_tau;
  std::lock_guard<std::mutex> lk(t.cache->mu);
  return t.cache->gammas.emplace(r, std::move(g)).first->second;
}

Presentation ttp_presentation(const TwistingMap& t) {
  const Presentation& plain = plain_product(t);
  const int nm = t.A_pres.dim() * t.B_pres.dim();
  const int nv = t.tau_hat.nvars();
  const int cap = plain.cap();
  std::map<int, std::vector<Tensor>> rels;
  for (int d = 2; d <= cap; ++d) {
    const Subspace& comp = plain.ideal_component(d);
    if (comp.dim() == 0) continue;
    const LinearMap ginv = gamma_matrix(t, d).inverse();
    std::vector<Tensor> rows;
    for (const Tensor& v : comp.basis())
      rows.push_back(Tensor::from_dense(nm, d, nv, ginv.apply(v.dense())));
    rels[d] = std::move(rows);
  }
  return Presentation::from_graded_relations(
      t.A_pres.field(),
      "ttp(" + t.A_pres.name() + "," + t.B_pres.name() + ")", plain.gens(),
      rels, cap);
}

TwistingMap ttp_opposite(const TwistingMap& t) {
  const int n = t.A_pres.dim(), m = t.B_pres.dim();
  const int nv = t.tau_hat.nvars();
  const int nm = n * m;
  const int cap = t.validated.checked_up_to;
  const LinearMap op_hat = swap_transport(m, n, nv) * t.tau_hat.inverse() *
                           swap_transport(n, m, nv);
  TwistingMap o = twisting_from_matrix(op_hat, t.B_pres, t.A_pres, cap);

  // The swap map is the original twisting itself on pair generators; it must
  // intertwine the two products and carry the relations across.
  const Presentation& plain = plain_product(t);
  const LinearMap phi1 = swap_transport(m, n, nv) * t.tau_hat;
  if (cap >= 2) {
    for (int c1 = 0; c1 < nm; ++c1)
      for (int c2 = 0; c2 < nm; ++c2) {
        const Tensor x = Tensor::basis(nm, nv, MultiIndex::single(c1));
        const Tensor y = Tensor::basis(nm, nv, MultiIndex::single(c2));
        const Tensor prod_o = ttp_multiply(o, x, y);
        const Tensor lhs = plain.normal_form(Tensor::from_dense(
            nm, 2, nv, swap_iso_degree(t, 2).apply(prod_o.dense())));
        const Tensor rhs = ttp_multiply(t, apply_all_slots(phi1, x),
                                        apply_all_slots(phi1, y));
        if (lhs != rhs)
          throw internal_check_error(
              "opposite twisting does not intertwine generator products");
      }
  }
  const Presentation pt = ttp_presentation(t);
  const Presentation po = ttp_presentation(o);
  for (int d = 2; d <= cap; ++d) {
    const LinearMap phid = swap_iso_degree(t, d);
    std::vector<Tensor> img;
    for (const Tensor& v : po.ideal_component(d).basis())
      img.push_back(Tensor::from_dense(nm, d, nv, phid.apply(v.dense())));
    if (!(Subspace::span(nm, d, nv, img) == pt.ideal_component(d)))
      throw internal_check_error(
          "opposite twisting does not carry the relations");
  }
  return o;
}

IdentityReport structural_checks(const TwistingMap& t, int up_to) {
  IdentityReport rep;
  const int cap = std::min({up_to, t.A_pres.cap(), t.B_pres.cap()});
  for (int total = 3; total <= cap; ++total)
    rep.add("extensions preserve relation components at degree " +
                std::to_string(total),
            compatible_at(t, total));
  const Presentation& plain = plain_product(t);
  if (cap >= 3) {
    const int nm = t.A_pres.dim() * t.B_pres.dim();
    const int nv = t.tau_hat.nvars();
    bool ok = true;
    for (int c1 = 0; c1 < nm && ok; ++c1)
      for (int c2 = 0; c2 < nm && ok; ++c2)
        for (int c3 = 0; c3 < nm && ok; ++c3) {
          const Tensor x = Tensor::basis(nm, nv, MultiIndex::single(c1));
          const Tensor y = Tensor::basis(nm, nv, MultiIndex::single(c2));
          const Tensor z = Tensor::basis(nm, nv, MultiIndex::single(c3));
          ok = ttp_multiply(t, ttp_multiply(t, x, y), z) ==
               ttp_multiply(t, x, ttp_multiply(t, y, z));
        }
    rep.add("twisted product is associative on generator triples", ok);
  }
  TwistingMap f = flip_twisting(t.A_pres, t.B_pres, cap);
  rep.add("flip twisting reproduces the plain product",
          presentations_equal(ttp_presentation(f), plain, cap));
  const Presentation tp = ttp_presentation(t);
  bool dims = true, words = true;
  for (int d = 0; d <= cap; ++d) dims = dims && tp.hilbert(d) == plain.hilbert(d);
  for (int d = 2; d <= cap; ++d)
    words = words && tp.normal_words(d) == plain.normal_words(d);
  rep.add("graded dimensions match the plain product", dims);
  rep.add("normal words match the plain product", words);
  return rep;
}

}  // namespace qls
