#include "derham.hpp"

#include <algorithm>
#include <map>

#include "errors.hpp"

namespace lspace {

namespace {

bool podd(int x) { return ((x % 2) + 2) % 2 == 1; }

// insertion sort of (letter, sdeg) pairs by letter; the sign collects a -1 for
// every transposition of two odd letters
int koszul_sort(std::vector<std::pair<std::size_t, int>>& items) {
  int sign = 1;
  for (std::size_t i = 1; i < items.size(); ++i)
    for (std::size_t j = i; j > 0 && items[j - 1].first > items[j].first; --j) {
      if (podd(items[j - 1].second) && podd(items[j].second)) sign = -sign;
      std::swap(items[j - 1], items[j]);
    }
  return sign;
}

bool repeated_odd(const std::vector<std::pair<std::size_t, int>>& items) {
  for (std::size_t i = 1; i < items.size(); ++i)
    if (items[i].first == items[i - 1].first && podd(items[i].second)) return true;
  return false;
}

std::map<Word, std::size_t> index_words(const std::vector<Word>& words) {
  std::map<Word, std::size_t> m;
  for (std::size_t i = 0; i < words.size(); ++i) m[words[i]] = i;
  return m;
}

}  // namespace

unsigned DeRhamComplex::form_weight(std::size_t word_index) const {
  unsigned k = 0;
  for (auto m : ce.words[word_index])
    if (m >= rank_g) ++k;
  return k;
}

DeRhamComplex de_rham_of_Bg(const LInfty& g, unsigned cap) {
  g.check_shape();
  DeRhamComplex dr;
  dr.rank_g = g.rank();
  dr.total = adjoint_module(g, 1).total;
  dr.cap = cap;
  dr.ce = ce_cochains(dr.total, cap);
  const std::size_t dim = dr.ce.complex.dim();
  const std::size_t bd = dr.ce.base_dim;
  const LInfty& t = dr.total;
  auto widx = index_words(dr.ce.words);

  dr.d_dr = QMatrix(dim, dim);
  for (std::size_t wi = 0; wi < dr.ce.words.size(); ++wi) {
    const Word& w = dr.ce.words[wi];
    for (std::size_t b = 0; b < bd; ++b) {
      const std::size_t col = dr.ce.index(wi, b);
      int base_sign = podd(t.base.module.degrees[b]) ? -1 : 1;
      int pre = 0;  // parity of the dual degrees before the current slot
      for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k] < dr.rank_g) {
          std::vector<std::pair<std::size_t, int>> items;
          for (std::size_t i = 0; i < w.size(); ++i)
            items.push_back({i == k ? w[i] + dr.rank_g : w[i], 0});
          for (auto& [m, s] : items) s = t.gen_sdeg(m);
          int ss = koszul_sort(items);
          if (!repeated_odd(items)) {
            Word nw;
            for (const auto& [m, s] : items) nw.push_back(m);
            auto it = widx.find(nw);
            if (it == widx.end())
              throw InputError("de_rham: derivation image missing from the basis");
            int sgn = base_sign * (podd(pre) ? -1 : 1) * ss;
            dr.d_dr.at(dr.ce.index(it->second, b), col) += Rat(sgn);
          }
        }
        pre += podd(t.gen_sdeg(w[k])) ? 1 : 0;
      }
    }
  }

  dr.complex.module = dr.ce.complex.module;
  dr.complex.d = dr.ce.complex.d + dr.d_dr;
  return dr;
}

std::vector<std::size_t> form_weight_indices(const DeRhamComplex& dr, unsigned k) {
  std::vector<std::size_t> out;
  for (std::size_t wi = 0; wi < dr.ce.words.size(); ++wi)
    if (dr.form_weight(wi) == k)
      for (std::size_t b = 0; b < dr.ce.base_dim; ++b) out.push_back(dr.ce.index(wi, b));
  return out;
}

CochainComplex form_weight_piece(const DeRhamComplex& dr, unsigned k) {
  auto idx = form_weight_indices(dr, k);
  std::vector<std::size_t> pos(dr.dim(), SIZE_MAX);
  for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = i;
  CochainComplex c;
  for (auto i : idx) {
    c.module.labels.push_back(dr.complex.module.labels[i]);
    c.module.degrees.push_back(dr.complex.module.degrees[i]);
  }
  c.d = QMatrix(idx.size(), idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (std::size_t r = 0; r < dr.dim(); ++r) {
      const Rat& v = dr.ce.complex.d.at(r, idx[j]);
      if (is_zero(v)) continue;
      if (pos[r] == SIZE_MAX)
        throw InputError("de_rham: the internal differential mixes form weights");
      c.d.at(pos[r], j) = v;
    }
  return c;
}

QVec dr_contract(const DeRhamComplex& dr, std::size_t a, const QVec& x) {
  if (a >= dr.rank_g) throw InputError("de_rham: contraction index out of range");
  if (x.size() != dr.dim()) throw InputError("de_rham: contraction dimension mismatch");
  const LInfty& t = dr.total;
  const std::size_t bd = dr.ce.base_dim;
  auto widx = index_words(dr.ce.words);
  bool qa = podd(t.gen_sdeg(dr.rank_g + a));
  QVec out = zero_vec(dr.dim());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (is_zero(x[i])) continue;
    std::size_t wi = i / bd, b = i % bd;
    const Word& w = dr.ce.words[wi];
    int sign_b = (qa && podd(t.base.module.degrees[b])) ? -1 : 1;
    int pre = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (w[k] == dr.rank_g + a) {
        Word nw;
        for (std::size_t j = 0; j < w.size(); ++j)
          if (j != k) nw.push_back(w[j]);
        auto it = widx.find(nw);
        if (it == widx.end())
          throw InputError("de_rham: contracted word missing from the basis");
        int sgn = sign_b * ((qa && podd(pre)) ? -1 : 1);
        out[dr.ce.index(it->second, b)] += Rat(sgn) * x[i];
      }
      pre += podd(t.gen_sdeg(w[k])) ? 1 : 0;
    }
  }
  return out;
}

SymplecticCertificate symplectic_check(const LInfty& g, const DeRhamComplex& dr,
                                       const QVec& omega, unsigned section_cap) {
  if (omega.size() != dr.dim()) throw InputError("symplectic: two-form dimension mismatch");
  SymplecticCertificate cert;
  cert.cap = section_cap;
  const std::size_t bd = dr.ce.base_dim;
  const std::size_t r = dr.rank_g;

  bool any = false, homog = true;
  int deg = 0;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (is_zero(omega[i])) continue;
    if (dr.form_weight(i / bd) != 2) {
      homog = false;
      cert.witness = "support outside form weight 2";
      break;
    }
    int di = dr.complex.module.degrees[i];
    if (!any) {
      deg = di;
      any = true;
    } else if (di != deg) {
      homog = false;
      cert.witness = "two-form is not homogeneous";
      break;
    }
  }
  cert.homogeneous = homog;
  cert.shift = any ? deg - 2 : 0;
  if (!homog) return cert;

  QVec dv = dr.complex.d.apply(omega);
  cert.closed = true;
  for (const auto& c : dv)
    if (!is_zero(c)) {
      cert.closed = false;
      cert.witness = "two-form is not d_dr-closed";
      break;
    }

  // skewness of the double contraction on every generator pair
  cert.skew = true;
  for (std::size_t a = 0; a < r && cert.skew; ++a)
    for (std::size_t b2 = 0; b2 < r && cert.skew; ++b2) {
      bool qa = podd(dr.total.gen_sdeg(r + a));
      bool qb = podd(dr.total.gen_sdeg(r + b2));
      QVec ab = dr_contract(dr, b2, dr_contract(dr, a, omega));
      QVec ba = dr_contract(dr, a, dr_contract(dr, b2, omega));
      // iota_a iota_b = (-1)^{p_a p_b} iota_b iota_a in the symmetric encoding;
      // graded skewness of the unshifted pairing is the decalage of this identity
      int s = (qa && qb) ? -1 : 1;
      for (std::size_t i = 0; i < ab.size(); ++i)
        if (ab[i] != Rat(s) * ba[i]) {
          cert.skew = false;
          cert.witness = "double contraction is not graded-skew";
          break;
        }
    }

  const int n = cert.shift;
  auto cot_m = adjoint_module(g, 1);
  CEComplex tgt = module_sections_ce(g, cot_m, section_cap);
  auto tan_m = coadjoint_module(g, n - 1);
  CEComplex src = module_sections_ce(g, tan_m, section_cap);
  cert.tangent_sections = src.complex;
  cert.cotangent_sections = tgt.complex;

  auto tgt_widx = index_words(tgt.words);
  QMatrix M(tgt.complex.dim(), src.complex.dim());
  std::vector<QVec> contracted(r);
  for (std::size_t a = 0; a < r; ++a) contracted[a] = dr_contract(dr, a, omega);

  for (std::size_t wsi = 0; wsi < src.words.size(); ++wsi) {
    const Word& ws = src.words[wsi];
    std::size_t a = ws.back() - r;
    Word u(ws.begin(), ws.end() - 1);
    int par_u = 0;
    for (auto m : u) par_u += podd(g.gens.degrees[m] - 1) ? 1 : 0;
    for (std::size_t b = 0; b < src.base_dim; ++b) {
      const std::size_t col = src.index(wsi, b);
      const QVec& c1 = contracted[a];
      for (std::size_t j = 0; j < c1.size(); ++j) {
        if (is_zero(c1[j])) continue;
        std::size_t wvi = j / bd, cbase = j % bd;
        const Word& wv = dr.ce.words[wvi];
        int cross = (podd(dr.total.base.module.degrees[cbase]) && podd(par_u)) ? -1 : 1;
        std::vector<std::pair<std::size_t, int>> items;
        for (auto m : u) items.push_back({m, dr.total.gen_sdeg(m)});
        for (auto m : wv) items.push_back({m, dr.total.gen_sdeg(m)});
        int ss = koszul_sort(items);
        if (repeated_odd(items)) continue;
        Word nw;
        for (const auto& [m, s] : items) nw.push_back(m);
        SparseVec bb = g.base.mul_basis(b, cbase);
        if (bb.empty()) continue;
        auto it = tgt_widx.find(nw);
        if (it == tgt_widx.end())
          throw CapOverflowError("symplectic: contraction leaves word cap " +
                                 std::to_string(section_cap));
        for (const auto& [bk, bc] : bb)
          M.at(tgt.index(it->second, bk), col) += Rat(cross * ss) * c1[j] * bc;
      }
    }
  }
  cert.contraction = M;
  ChainMap f{&cert.tangent_sections, &cert.cotangent_sections, std::move(M)};
  cert.contraction = f.matrix;
  cert.nondegeneracy = try_quasi_iso_check(f);
  if (!cert.nondegeneracy.is_chain_map && cert.witness.empty())
    cert.witness = cert.nondegeneracy.chain_map_witness;
  return cert;
}

ShiftedCotangent shifted_cotangent(const LInfty& g, int n, unsigned dr_cap) {
  if (dr_cap < 2) throw InputError("shifted_cotangent: word cap must be at least 2");
  ShiftedCotangent out;
  out.shift = n;
  out.total = coadjoint_module(g, n - 2).total;
  out.dr = de_rham_of_Bg(out.total, dr_cap);
  const std::size_t r = g.rank();
  const std::size_t R = out.total.rank();  // 2r
  out.canonical = zero_vec(out.dr.dim());
  auto widx = index_words(out.dr.ce.words);
  for (std::size_t a = 0; a < r; ++a) {
    Word w{R + a, R + r + a};
    auto it = widx.find(w);
    if (it == widx.end())
      throw InputError("shifted_cotangent: evaluation two-form misses the basis");
    // (-1)^{deg v_a} makes the evaluation form invariant under the cochain
    // differential whenever the algebra differential couples adjacent degrees
    int s = (g.gens.degrees[a] % 2 == 0) ? 1 : -1;
    out.canonical[out.dr.ce.index(it->second, out.total.base.unit)] += Rat(s);
  }
  return out;
}

bool composite_is_zero(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("composite: shape mismatch");
  QVec acc = zero_vec(a.rows());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (auto& x : acc) x = Rat(0);
    for (std::size_t k = 0; k < b.rows(); ++k) {
      const Rat& v = b.at(k, j);
      if (is_zero(v)) continue;
      for (std::size_t r = 0; r < a.rows(); ++r) {
        const Rat& w = a.at(r, k);
        if (!is_zero(w)) acc[r] += w * v;
      }
    }
    for (const auto& x : acc)
      if (!is_zero(x)) return false;
  }
  return true;
}

}  // namespace lspace
