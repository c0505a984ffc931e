#include "linfty.hpp"

#include <algorithm>
#include <set>

#include "errors.hpp"

namespace lspace {

namespace {

int parity(int d) { return d & 1; }

std::string word_label(const GradedModule& gens, const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ".";
    s += gens.labels[w[i]];
  }
  return s;
}

Rat word_automorphisms(const Word& w) {  // product of multiplicity factorials
  Rat k(1);
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    k *= factorial(static_cast<unsigned>(j - i));
    i = j;
  }
  return k;
}

bool has_repeated_odd(const LInfty& g, const Word& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] == w[i + 1] && parity(g.gen_sdeg(w[i]))) return true;
  return false;
}

}  // namespace

std::string LInfty::ulabel(std::size_t u) const {
  return base.module.labels[ubase(u)] + "." + gens.labels[ugen(u)];
}

unsigned LInfty::max_arity() const {
  unsigned n = 0;
  for (std::size_t k = 0; k < taylor.size(); ++k)
    if (!taylor[k].empty()) n = static_cast<unsigned>(k);
  return n;
}

bool LInfty::is_flat() const { return taylor.empty() || taylor[0].empty(); }

bool LInfty::is_abelian() const {
  for (std::size_t k = 0; k < taylor.size(); ++k)
    if (k != 1 && !taylor[k].empty()) return false;
  return true;
}

void LInfty::check_shape() const {
  base.check_shape();
  gens.check();
  for (std::size_t n = 0; n < taylor.size(); ++n)
    for (const auto& [w, val] : taylor[n]) {
      if (w.size() != n || !std::is_sorted(w.begin(), w.end()))
        throw InputError("linfty: taylor word not sorted or of wrong arity");
      for (auto m : w)
        if (m >= rank()) throw InputError("linfty: taylor word index out of range");
      if (has_repeated_odd(*this, w))
        throw InputError("linfty: taylor word repeats an odd generator");
      for (const auto& [u, c] : val)
        if (u >= udim()) throw InputError("linfty: taylor value index out of range");
    }
}

SparseVec LInfty::eval_taylor(const std::vector<std::size_t>& uword) const {
  const std::size_t n = uword.size();
  SparseVec out;
  // Extract base coefficients to the front: each passes the degree 1
  // coderivation component and the preceding letters of V[1].
  int sign = 1;
  int acc = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (parity(base.module.degrees[ubase(uword[j])]) && parity(1 + acc)) sign = -sign;
    acc += parity(gen_sdeg(ugen(uword[j])));
  }
  QVec prod = base.basis_vec(base.unit);
  for (std::size_t j = 0; j < n; ++j) prod = base.mul(prod, base.basis_vec(ubase(uword[j])));

  if (n == 1) {
    // Leibniz term of the base differential
    std::size_t b = ubase(uword[0]), m = ugen(uword[0]);
    for (std::size_t i = 0; i < base.dim(); ++i)
      if (!is_zero(base.d.at(i, b))) sparse_add_term(out, uindex(i, m), base.d.at(i, b));
  }

  if (n >= taylor.size()) return out;
  std::vector<std::pair<std::size_t, int>> items;
  items.reserve(n);
  for (auto u : uword) items.push_back({ugen(u), gen_sdeg(ugen(u))});
  int sort_sign = koszul_sort_sign(items);
  Word w;
  w.reserve(n);
  for (const auto& [m, s] : items) w.push_back(m);
  if (has_repeated_odd(*this, w)) return out;
  auto it = taylor[n].find(w);
  if (it == taylor[n].end()) return out;
  Rat scale = Rat(sign * sort_sign);
  for (const auto& [u, c] : it->second) {
    QVec pa = base.mul(prod, base.basis_vec(ubase(u)));
    for (std::size_t i = 0; i < base.dim(); ++i)
      if (!is_zero(pa[i])) sparse_add_term(out, uindex(i, ugen(u)), scale * c * pa[i]);
  }
  return out;
}

QVec LInfty::eval_taylor_vecs(const std::vector<QVec>& args) const {
  QVec out = zero_vec(udim());
  std::vector<std::size_t> letters(args.size());
  // multilinear expansion over the supports
  std::vector<std::vector<std::size_t>> supports(args.size());
  for (std::size_t j = 0; j < args.size(); ++j) {
    if (args[j].size() != udim()) throw InputError("linfty: argument dimension mismatch");
    for (std::size_t u = 0; u < udim(); ++u)
      if (!is_zero(args[j][u])) supports[j].push_back(u);
  }
  std::vector<std::size_t> pos(args.size(), 0);
  if (args.empty()) {
    SparseVec sv = eval_taylor({});
    for (const auto& [u, c] : sv) out[u] += c;
    return out;
  }
  for (const auto& s : supports)
    if (s.empty()) return out;
  while (true) {
    Rat coeff(1);
    for (std::size_t j = 0; j < args.size(); ++j) {
      letters[j] = supports[j][pos[j]];
      coeff *= args[j][letters[j]];
    }
    SparseVec sv = eval_taylor(letters);
    for (const auto& [u, c] : sv) out[u] += coeff * c;
    std::size_t j = 0;
    while (j < args.size()) {
      if (++pos[j] < supports[j].size()) break;
      pos[j] = 0;
      ++j;
    }
    if (j == args.size()) break;
  }
  return out;
}

LInfty LInfty::abelian(const BaseAlgebra& base, const GradedModule& gens, const QMatrix& d1) {
  if (d1.rows() != gens.dim() || d1.cols() != gens.dim())
    throw InputError("linfty: abelian differential shape mismatch");
  LInfty g;
  g.base = base;
  g.gens = gens;
  g.taylor.resize(2);
  for (std::size_t m = 0; m < gens.dim(); ++m) {
    SparseVec val;
    for (std::size_t k = 0; k < gens.dim(); ++k)
      if (!is_zero(d1.at(k, m))) sparse_add_term(val, g.uindex(base.unit, k), d1.at(k, m));
    if (!val.empty()) g.taylor[1][{m}] = std::move(val);
  }
  return g;
}

LInfty LInfty::heisenberg() {
  LInfty g;
  g.base = BaseAlgebra::rationals();
  g.gens.labels = {"x", "y", "z"};
  g.gens.degrees = {0, 0, 0};
  g.taylor.resize(3);
  g.taylor[2][{0, 1}] = {{2, Rat(1)}};  // [x, y] = z
  return g;
}

std::vector<Word> enumerate_words(const LInfty& g, unsigned n) {
  std::vector<Word> out;
  Word cur;
  auto rec = [&](auto&& self, std::size_t start, unsigned left) -> void {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (std::size_t m = start; m < g.rank(); ++m) {
      if (!cur.empty() && cur.back() == m && parity(g.gen_sdeg(m))) continue;
      cur.push_back(m);
      self(self, m, left - 1);
      cur.pop_back();
    }
  };
  rec(rec, 0, n);
  return out;
}

std::vector<Word> enumerate_words_upto(const LInfty& g, unsigned cap) {
  std::vector<Word> out;
  for (unsigned n = 0; n <= cap; ++n) {
    auto w = enumerate_words(g, n);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

int unshuffle_sign(const std::vector<int>& sdegs, const std::vector<std::size_t>& positions) {
  int sign = 1;
  int unchosen = 0;
  std::size_t pi = 0;
  for (std::size_t q = 0; q < sdegs.size(); ++q) {
    if (pi < positions.size() && positions[pi] == q) {
      if (parity(sdegs[q]) && parity(unchosen)) sign = -sign;
      ++pi;
    } else {
      unchosen += parity(sdegs[q]);
    }
  }
  return sign;
}

SparseVec bracket(const LInfty& g, const Word& w) {
  // decalage: l_n(x_1..x_n) = (-1)^{sum (n-i)|x_i|} D_n(s x_1, .., s x_n)
  int e = 0;
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) e += static_cast<int>(n - 1 - i) * g.gens.degrees[w[i]];
  std::vector<std::size_t> letters;
  for (auto m : w) letters.push_back(g.uindex(g.base.unit, m));
  SparseVec out = g.eval_taylor(letters);
  if (parity(e))
    for (auto& [u, c] : out) c = -c;
  return out;
}

// ---- Chevalley-Eilenberg ----

namespace {

std::map<Word, std::size_t> index_words(const std::vector<Word>& words) {
  std::map<Word, std::size_t> m;
  for (std::size_t i = 0; i < words.size(); ++i) m[words[i]] = i;
  return m;
}

}  // namespace

CEComplex ce_chains(const LInfty& g, unsigned cap, bool drop_weight_raising) {
  g.check_shape();
  CEComplex ce;
  ce.cap = cap;
  ce.cochain = false;
  ce.base_dim = g.base.dim();
  ce.words = enumerate_words_upto(g, cap);
  auto widx = index_words(ce.words);
  const std::size_t bd = g.base.dim();
  const std::size_t dim = ce.words.size() * bd;

  for (const auto& w : ce.words) {
    int s = 0;
    for (auto m : w) s += g.gen_sdeg(m);
    for (std::size_t b = 0; b < bd; ++b) {
      ce.complex.module.labels.push_back(g.base.module.labels[b] + "|" + word_label(g.gens, w));
      ce.complex.module.degrees.push_back(g.base.module.degrees[b] + s);
    }
  }
  ce.complex.d = QMatrix(dim, dim);

  const unsigned arity = g.taylor.empty() ? 1 : static_cast<unsigned>(g.taylor.size() - 1);
  for (std::size_t wi = 0; wi < ce.words.size(); ++wi) {
    const Word& w = ce.words[wi];
    const std::size_t len = w.size();
    std::vector<int> sdegs;
    for (auto m : w) sdegs.push_back(g.gen_sdeg(m));
    for (std::size_t b = 0; b < bd; ++b) {
      const std::size_t col = ce.index(wi, b);
      std::map<std::pair<Word, std::size_t>, Rat> ovf;
      // base differential on the coefficient
      for (std::size_t i = 0; i < bd; ++i)
        if (!is_zero(g.base.d.at(i, b))) ce.complex.d.at(ce.index(wi, i), col) += g.base.d.at(i, b);
      int sb = parity(g.base.module.degrees[b]) ? -1 : 1;
      for (std::size_t mask = 0; mask < (std::size_t{1} << len) || (len == 0 && mask == 0);
           ++mask) {
        std::size_t cnt = static_cast<std::size_t>(__builtin_popcountll(mask));
        if (cnt > arity) {
          if (len == 0) break;
          continue;
        }
        if (cnt == 0 && (g.taylor.empty() || g.taylor[0].empty())) {
          if (len == 0) break;
          continue;
        }
        std::vector<std::size_t> positions, rest;
        for (std::size_t p = 0; p < len; ++p)
          ((mask >> p) & 1 ? positions : rest).push_back(p);
        int eps = unshuffle_sign(sdegs, positions);
        std::vector<std::size_t> letters;
        for (auto p : positions) letters.push_back(g.uindex(g.base.unit, w[p]));
        SparseVec mid = g.eval_taylor(letters);
        for (const auto& [u, c] : mid) {
          std::size_t a = g.ubase(u), v = g.ugen(u);
          // sort the new word: the produced letter lands in front of the rest
          std::vector<std::pair<std::size_t, int>> items;
          items.push_back({v, g.gen_sdeg(v)});
          for (auto p : rest) items.push_back({w[p], g.gen_sdeg(w[p])});
          int ss = koszul_sort_sign(items);
          Word nw;
          for (const auto& [m, sd] : items) nw.push_back(m);
          if (has_repeated_odd(g, nw)) continue;
          Rat scale = Rat(sb * eps * ss) * c;
          SparseVec ba = g.base.mul_basis(b, a);
          auto target = widx.find(nw);
          if (target == widx.end()) {
            if (drop_weight_raising) continue;
            for (const auto& [bi, bc] : ba) ovf[{nw, bi}] += scale * bc;
            continue;
          }
          for (const auto& [bi, bc] : ba)
            ce.complex.d.at(ce.index(target->second, bi), col) += scale * bc;
        }
        if (len == 0) break;
      }
      for (const auto& [key, v] : ovf)
        if (!is_zero(v))
          throw CapOverflowError("chains: d(" + ce.complex.module.labels[col] +
                                 ") has a nonzero term in word " + word_label(g.gens, key.first) +
                                 " beyond word cap " + std::to_string(cap));
    }
  }
  return ce;
}

namespace {

struct DualImageTerm {
  std::size_t a;  // base index of the coefficient
  Word mu;        // resulting word
  Rat coeff;
};

// d(eta^q) in the cochain algebra, from the pairing with the chain
// coderivation: each D_n(mu) with a component (a (x) v_q, c) contributes
// -(-1)^{|eta^q|} (-1)^{|a||eta^q|} (c / aut(mu)) a (x) phi_mu.
std::vector<std::vector<DualImageTerm>> dual_gen_images(const LInfty& g) {
  std::vector<std::vector<DualImageTerm>> images(g.rank());
  for (std::size_t n = 0; n < g.taylor.size(); ++n)
    for (const auto& [mu, val] : g.taylor[n]) {
      // evaluate once so the arity-1 base-differential convention matches
      std::vector<std::size_t> letters;
      for (auto m : mu) letters.push_back(g.uindex(g.base.unit, m));
      SparseVec v = g.eval_taylor(letters);
      Rat aut = word_automorphisms(mu);
      for (const auto& [u, c] : v) {
        std::size_t a = g.ubase(u), q = g.ugen(u);
        int p_eta = parity(g.gen_sdeg(q));
        int p_a = parity(g.base.module.degrees[a]);
        int sgn = (1 + p_eta + p_a * p_eta) % 2 ? -1 : 1;
        images[q].push_back({a, mu, Rat(sgn) * c / aut});
      }
    }
  return images;
}

CEComplex cochain_core(const LInfty& g, std::vector<Word> words, unsigned cap) {
  g.check_shape();
  CEComplex ce;
  ce.cap = cap;
  ce.cochain = true;
  ce.base_dim = g.base.dim();
  ce.words = std::move(words);
  auto widx = index_words(ce.words);
  const std::size_t bd = g.base.dim();
  const std::size_t dim = ce.words.size() * bd;

  for (const auto& w : ce.words) {
    int s = 0;
    for (auto m : w) s += g.gen_sdeg(m);
    for (std::size_t b = 0; b < bd; ++b) {
      ce.complex.module.labels.push_back(g.base.module.labels[b] + "|e(" +
                                         word_label(g.gens, w) + ")");
      ce.complex.module.degrees.push_back(g.base.module.degrees[b] - s);
    }
  }
  ce.complex.d = QMatrix(dim, dim);

  auto images = dual_gen_images(g);
  for (std::size_t wi = 0; wi < ce.words.size(); ++wi) {
    const Word& w = ce.words[wi];
    for (std::size_t b = 0; b < bd; ++b) {
      const std::size_t col = ce.index(wi, b);
      std::map<std::pair<Word, std::size_t>, Rat> ovf;
      for (std::size_t i = 0; i < bd; ++i)
        if (!is_zero(g.base.d.at(i, b))) ce.complex.d.at(ce.index(wi, i), col) += g.base.d.at(i, b);
      int sb = parity(g.base.module.degrees[b]) ? -1 : 1;
      int pre = 0;  // parity of the dual degrees of the letters before slot k
      for (std::size_t k = 0; k < w.size(); ++k) {
        int presign = parity(pre) ? -1 : 1;
        for (const auto& term : images[w[k]]) {
          int s2 = (parity(g.base.module.degrees[term.a]) && parity(pre)) ? -1 : 1;
          // merge: letters before k, then the image word, then letters after k
          std::vector<std::pair<std::size_t, int>> items;
          for (std::size_t i = 0; i < k; ++i) items.push_back({w[i], g.gen_sdeg(w[i])});
          for (auto m : term.mu) items.push_back({m, g.gen_sdeg(m)});
          for (std::size_t i = k + 1; i < w.size(); ++i)
            items.push_back({w[i], g.gen_sdeg(w[i])});
          int ss = koszul_sort_sign(items);
          Word nw;
          for (const auto& [m, sd] : items) nw.push_back(m);
          if (has_repeated_odd(g, nw)) continue;
          Rat scale = Rat(sb * presign * s2 * ss) * term.coeff;
          SparseVec ba = g.base.mul_basis(b, term.a);
          auto target = widx.find(nw);
          if (target == widx.end()) {
            for (const auto& [bi, bc] : ba) ovf[{nw, bi}] += scale * bc;
            continue;
          }
          for (const auto& [bi, bc] : ba)
            ce.complex.d.at(ce.index(target->second, bi), col) += scale * bc;
        }
        pre += parity(g.gen_sdeg(w[k]));
      }
      for (const auto& [key, v] : ovf)
        if (!is_zero(v))
          throw CapOverflowError("cochains: d(" + ce.complex.module.labels[col] +
                                 ") has a nonzero term in word e(" +
                                 word_label(g.gens, key.first) + ") beyond word cap " +
                                 std::to_string(cap));
    }
  }
  return ce;
}

}  // namespace

CEComplex ce_cochains(const LInfty& g, unsigned cap) {
  return cochain_core(g, enumerate_words_upto(g, cap), cap);
}

SparseVec CEComplex::mul(std::size_t i, std::size_t j, const LInfty& g) const {
  if (!cochain) throw InputError("ce: product only defined on cochains");
  std::size_t wi = i / base_dim, bi = i % base_dim;
  std::size_t wj = j / base_dim, bj = j % base_dim;
  int dual_par_i = 0;
  for (auto m : words[wi]) dual_par_i += parity(g.gen_sdeg(m));
  int sign = (parity(g.base.module.degrees[bj]) && parity(dual_par_i)) ? -1 : 1;
  std::vector<std::pair<std::size_t, int>> items;
  for (auto m : words[wi]) items.push_back({m, g.gen_sdeg(m)});
  for (auto m : words[wj]) items.push_back({m, g.gen_sdeg(m)});
  int ss = koszul_sort_sign(items);
  Word nw;
  for (const auto& [m, sd] : items) nw.push_back(m);
  SparseVec out;
  if (has_repeated_odd(g, nw)) return out;
  auto widx = std::find(words.begin(), words.end(), nw);
  SparseVec bb = g.base.mul_basis(bi, bj);
  if (widx == words.end()) {
    if (!bb.empty())
      throw CapOverflowError("cochains: product leaves word cap " + std::to_string(cap));
    return out;
  }
  std::size_t wn = static_cast<std::size_t>(widx - words.begin());
  for (const auto& [k, c] : bb) sparse_add_term(out, index(wn, k), Rat(sign * ss) * c);
  return out;
}

QVec CEComplex::mul_vec(const QVec& x, const QVec& y, const LInfty& g) const {
  QVec out = zero_vec(complex.dim());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (is_zero(x[i])) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (is_zero(y[j])) continue;
      SparseVec p = mul(i, j, g);
      for (const auto& [k, c] : p) out[k] += x[i] * y[j] * c;
    }
  }
  return out;
}

// ---- validation ----

ValidationReport validate_linfty(const LInfty& g) {
  g.check_shape();
  ValidationReport rep;
  auto add = [&rep](const std::string& name, bool pass, const std::string& w = "") {
    rep.checks.push_back({name, pass, pass ? "" : w});
  };

  // grading: each component raises the V[1]-degree by exactly 1
  {
    bool ok = true;
    std::string wit;
    for (std::size_t n = 0; n < g.taylor.size() && ok; ++n)
      for (const auto& [w, val] : g.taylor[n]) {
        int in = 0;
        for (auto m : w) in += g.gen_sdeg(m);
        for (const auto& [u, c] : val)
          if (g.usdeg(u) != in + 1) {
            ok = false;
            wit = "component on " + word_label(g.gens, w) + " has term " + g.ulabel(u) +
                  " of wrong degree";
            break;
          }
        if (!ok) break;
      }
    add("grading", ok, wit);
  }

  // curving lies in I (x) V
  {
    bool ok = true;
    std::string wit;
    if (!g.taylor.empty() && !g.taylor[0].empty()) {
      Subspace ispan = g.base.ideal_span();
      auto it = g.taylor[0].find({});
      if (it != g.taylor[0].end()) {
        for (std::size_t m = 0; m < g.rank() && ok; ++m) {
          QVec coeff = zero_vec(g.base.dim());
          for (const auto& [u, c] : it->second)
            if (g.ugen(u) == m) coeff[g.ubase(u)] = c;
          if (!ispan.contains(coeff)) {
            ok = false;
            wit = "curving coefficient of " + g.gens.labels[m] + " lies outside the ideal";
          }
        }
      }
    }
    add("curving_in_ideal", ok, wit);
  }

  // d^2 = 0, checked on generator words (A-multilinearity reduces the general
  // case to these since the base differential squares to zero)
  {
    bool ok = true;
    std::string wit;
    unsigned arity = std::max(g.max_arity(), 1u);
    for (unsigned len = 0; len + 1 <= 2 * arity && ok; ++len) {
      for (const auto& w : enumerate_words(g, len)) {
        QVec acc = zero_vec(g.udim());
        std::vector<int> sdegs;
        for (auto m : w) sdegs.push_back(g.gen_sdeg(m));
        for (std::size_t mask = 0;; ++mask) {
          if (len > 0 && mask >= (std::size_t{1} << len)) break;
          std::size_t cnt = static_cast<std::size_t>(__builtin_popcountll(mask));
          if (cnt <= arity && len - cnt + 1 <= arity + 1) {
            std::vector<std::size_t> positions, rest;
            for (std::size_t p = 0; p < len; ++p)
              ((mask >> p) & 1 ? positions : rest).push_back(p);
            int eps = unshuffle_sign(sdegs, positions);
            std::vector<std::size_t> letters;
            for (auto p : positions) letters.push_back(g.uindex(g.base.unit, w[p]));
            SparseVec mid = g.eval_taylor(letters);
            for (const auto& [u, c] : mid) {
              std::vector<std::size_t> inner{u};
              for (auto p : rest) inner.push_back(g.uindex(g.base.unit, w[p]));
              SparseVec res = g.eval_taylor(inner);
              for (const auto& [u2, c2] : res) acc[u2] += Rat(eps) * c * c2;
            }
          }
          if (len == 0) break;
        }
        if (!vec_is_zero(acc)) {
          ok = false;
          wit = "d^2 != 0 on word " + word_label(g.gens, w);
          break;
        }
      }
    }
    add("d_squared", ok, wit);
  }

  return rep;
}

// ---- filtrations, base change ----

LowerCentralSeries lower_central_series(const LInfty& g) {
  g.check_shape();
  LowerCentralSeries lcs;
  const std::size_t n = g.udim();
  // arity-1 operator as a matrix
  QMatrix d1(n, n);
  for (std::size_t u = 0; u < n; ++u) {
    SparseVec v = g.eval_taylor({u});
    for (const auto& [i, c] : v) d1.at(i, u) += c;
  }
  std::vector<QVec> full;
  for (std::size_t i = 0; i < n; ++i) {
    QVec e = zero_vec(n);
    e[i] = 1;
    full.push_back(e);
  }
  lcs.levels.push_back(Subspace::span(n, full));
  const unsigned arity = g.max_arity();

  while (true) {
    unsigned k = static_cast<unsigned>(lcs.levels.size());  // building F^{k+1}
    std::vector<QVec> gens;
    for (unsigned nn = 2; nn <= std::max(arity, 2u); ++nn) {
      if (nn >= g.taylor.size() || g.taylor[nn].empty()) continue;
      // compositions of max(k+1, nn) into nn parts >= 1, capped at k
      std::vector<unsigned> parts(nn, 1);
      unsigned total = std::max(k + 1, nn);
      auto rec = [&](auto&& self, unsigned slot, unsigned remaining) -> void {
        if (slot == nn) {
          if (remaining != 0) return;
          // tuples of level basis vectors
          std::vector<std::size_t> pos(nn, 0);
          while (true) {
            std::vector<QVec> args;
            bool empty = false;
            for (unsigned j = 0; j < nn; ++j) {
              const auto& lvl = lcs.levels[parts[j] - 1];
              if (lvl.dim() == 0) {
                empty = true;
                break;
              }
              args.push_back(lvl.basis()[pos[j]]);
            }
            if (empty) break;
            gens.push_back(g.eval_taylor_vecs(args));
            unsigned j = 0;
            for (; j < nn; ++j) {
              if (++pos[j] < lcs.levels[parts[j] - 1].dim()) break;
              pos[j] = 0;
            }
            if (j == nn) break;
          }
          return;
        }
        unsigned rest_min = nn - slot - 1;
        if (remaining <= rest_min) return;
        for (unsigned v = 1; v <= std::min(k, remaining - rest_min); ++v) {
          parts[slot] = v;
          self(self, slot + 1, remaining - v);
        }
      };
      rec(rec, 0, total);
    }
    // close under the arity-1 operator
    Subspace next = Subspace::span(n, gens);
    while (true) {
      std::vector<QVec> more = next.basis();
      std::size_t before = next.dim();
      for (const auto& x : next.basis()) more.push_back(d1.apply(x));
      next = Subspace::span(n, more);
      if (next.dim() == before) break;
    }
    if (next.dim() == 0) {
      lcs.levels.push_back(next);
      lcs.nilpotent = true;
      lcs.index = static_cast<unsigned>(lcs.levels.size());
      return lcs;
    }
    if (next.dim() >= lcs.levels.back().dim()) {
      lcs.nilpotent = false;
      return lcs;  // stabilized above zero
    }
    lcs.levels.push_back(next);
  }
}

LInfty extend_scalars(const LInfty& g, const BaseAlgebra& c) {
  LInfty t;
  t.base = tensor_cdga(g.base, c);
  t.gens = g.gens;
  t.taylor.resize(g.taylor.size());
  const std::size_t nb = c.dim();
  for (std::size_t n = 0; n < g.taylor.size(); ++n)
    for (const auto& [w, val] : g.taylor[n]) {
      SparseVec nv;
      for (const auto& [u, cf] : val) {
        std::size_t b = g.ubase(u), m = g.ugen(u);
        sparse_add_term(nv, t.uindex(b * nb + c.unit, m), cf);
      }
      t.taylor[n][w] = std::move(nv);
    }
  return t;
}

namespace {

LInfty contract_base(const LInfty& g, const std::vector<std::size_t>& base_indices,
                     const std::string& what) {
  LInfty h;
  h.base = BaseAlgebra::rationals();
  std::vector<std::size_t> gen_of_u(g.udim(), SIZE_MAX);
  for (auto b : base_indices)
    for (std::size_t m = 0; m < g.rank(); ++m) {
      gen_of_u[g.uindex(b, m)] = h.gens.dim();
      h.gens.labels.push_back(g.ulabel(g.uindex(b, m)));
      h.gens.degrees.push_back(g.udeg(g.uindex(b, m)));
    }
  std::size_t arity = std::max<std::size_t>(g.taylor.size(), 2);
  h.taylor.resize(arity);
  // enumerate words over the new generators and evaluate in g
  for (std::size_t n = 0; n < arity; ++n) {
    for (const auto& w : enumerate_words(h, static_cast<unsigned>(n))) {
      std::vector<std::size_t> letters;
      for (auto hm : w) {
        std::size_t b = base_indices[hm / g.rank()], m = hm % g.rank();
        letters.push_back(g.uindex(b, m));
      }
      SparseVec val = g.eval_taylor(letters);
      SparseVec nv;
      for (const auto& [u, c] : val) {
        if (gen_of_u[u] == SIZE_MAX)
          throw InputError(what + ": evaluation leaves the selected coefficients");
        sparse_add_term(nv, gen_of_u[u], c);  // new base is Q, unit index 0
      }
      if (!nv.empty()) h.taylor[n][w] = std::move(nv);
    }
  }
  return h;
}

}  // namespace

LInfty restrict_to_ideal(const LInfty& g) {
  g.check_shape();
  return contract_base(g, g.base.ideal, "restrict_to_ideal");
}

LInfty flatten(const LInfty& g) {
  g.check_shape();
  std::vector<std::size_t> all(g.base.dim());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return contract_base(g, all, "flatten");
}

// ---- modules ----

ValidationReport validate_module(const LInftyModule& m) {
  m.total.check_shape();
  ValidationReport rep;
  auto add = [&rep](const std::string& name, bool pass, const std::string& w = "") {
    rep.checks.push_back({name, pass, pass ? "" : w});
  };
  bool strict_ok = true, linear_ok = true;
  std::string sw, lw;
  for (std::size_t n = 0; n < m.total.taylor.size(); ++n)
    for (const auto& [w, val] : m.total.taylor[n]) {
      std::size_t module_letters = 0;
      for (auto g : w)
        if (g >= m.split) ++module_letters;
      if (module_letters >= 2 && !val.empty()) {
        linear_ok = false;
        lw = "component on " + word_label(m.total.gens, w) + " takes two module inputs";
        continue;
      }
      for (const auto& [u, c] : val) {
        bool out_module = m.total.ugen(u) >= m.split;
        if (module_letters == 0 && out_module) {
          strict_ok = false;
          sw = "component on " + word_label(m.total.gens, w) + " maps base inputs into the module";
        }
        if (module_letters == 1 && !out_module) {
          strict_ok = false;
          sw = "component on " + word_label(m.total.gens, w) + " maps a module input into the base";
        }
      }
    }
  add("strict_split", strict_ok, sw);
  add("linear_in_module", linear_ok, lw);
  auto v = validate_linfty(m.total);
  rep.checks.insert(rep.checks.end(), v.checks.begin(), v.checks.end());
  return rep;
}

LInfty total_space(const LInfty& g, const LInftyModule& m) {
  if (m.split != g.rank()) throw InputError("total_space: split does not match the algebra rank");
  for (std::size_t i = 0; i < g.rank(); ++i)
    if (m.total.gens.degrees[i] != g.gens.degrees[i])
      throw InputError("total_space: generator degrees disagree with the algebra");
  return m.total;
}

LInftyModule adjoint_module(const LInfty& g, int shift) {
  g.check_shape();
  LInftyModule mod;
  LInfty& t = mod.total;
  mod.split = g.rank();
  t.base = g.base;
  t.gens = g.gens;
  for (std::size_t m = 0; m < g.rank(); ++m) {
    // keep labels unique when the algebra already contains decorated copies
    std::string lab = g.gens.labels[m] + "~";
    while (std::find(t.gens.labels.begin(), t.gens.labels.end(), lab) != t.gens.labels.end())
      lab += "~";
    t.gens.labels.push_back(lab);
    t.gens.degrees.push_back(g.gens.degrees[m] - shift);
  }
  const std::size_t r = g.rank();
  t.taylor.resize(std::max<std::size_t>(g.taylor.size(), 2));
  for (std::size_t n = 0; n < g.taylor.size(); ++n)
    for (const auto& [w, val] : g.taylor[n]) {
      SparseVec nv;
      for (const auto& [u, c] : val) sparse_add_term(nv, t.uindex(g.ubase(u), g.ugen(u)), c);
      t.taylor[n][w] = std::move(nv);
    }
  // shifted adjoint action: D(mu, bar v) = (-1)^{shift * sum s(mu)} bar D(mu, v)
  for (std::size_t n = 1; n < g.taylor.size(); ++n) {
    for (const auto& mu : enumerate_words(g, static_cast<unsigned>(n - 1))) {
      for (std::size_t q = 0; q < r; ++q) {
        std::vector<std::size_t> letters;
        int smu = 0;
        for (auto m : mu) {
          letters.push_back(g.uindex(g.base.unit, m));
          smu += g.gen_sdeg(m);
        }
        letters.push_back(g.uindex(g.base.unit, q));
        SparseVec val = g.eval_taylor(letters);
        if (val.empty()) continue;
        int sgn = (parity(shift) && parity(smu)) ? -1 : 1;
        Word w = mu;
        w.push_back(r + q);  // module letters sort after base letters
        if (has_repeated_odd(t, w)) continue;
        SparseVec nv;
        for (const auto& [u, c] : val)
          sparse_add_term(nv, t.uindex(g.ubase(u), r + g.ugen(u)), Rat(sgn) * c);
        if (!nv.empty()) t.taylor[n][w] = std::move(nv);
      }
    }
  }
  return mod;
}

LInftyModule coadjoint_module(const LInfty& g, int shift) {
  g.check_shape();
  LInftyModule mod;
  LInfty& t = mod.total;
  mod.split = g.rank();
  t.base = g.base;
  t.gens = g.gens;
  for (std::size_t m = 0; m < g.rank(); ++m) {
    // keep labels unique when the algebra already contains decorated copies
    std::string lab = g.gens.labels[m] + "^";
    while (std::find(t.gens.labels.begin(), t.gens.labels.end(), lab) != t.gens.labels.end())
      lab += "^";
    t.gens.labels.push_back(lab);
    t.gens.degrees.push_back(-g.gens.degrees[m] - shift);
  }
  const std::size_t r = g.rank();
  t.taylor.resize(std::max<std::size_t>(g.taylor.size(), 2));
  for (std::size_t n = 0; n < g.taylor.size(); ++n)
    for (const auto& [w, val] : g.taylor[n]) {
      SparseVec nv;
      for (const auto& [u, c] : val) sparse_add_term(nv, t.uindex(g.ubase(u), g.ugen(u)), c);
      t.taylor[n][w] = std::move(nv);
    }
  // coadjoint action: <D(mu, phi), v> = -(-1)^{(1 + sum s(mu)) s(phi)} <phi, D(mu, v)>
  for (std::size_t n = 1; n < g.taylor.size(); ++n) {
    for (const auto& mu : enumerate_words(g, static_cast<unsigned>(n - 1))) {
      for (std::size_t q = 0; q < r; ++q) {
        Word w = mu;
        w.push_back(r + q);
        if (has_repeated_odd(t, w)) continue;
        int smu = 0;
        for (auto m : mu) smu += g.gen_sdeg(m);
        int p_phi = parity(t.gen_sdeg(r + q));
        SparseVec nv;
        for (std::size_t m = 0; m < r; ++m) {
          std::vector<std::size_t> letters;
          for (auto x : mu) letters.push_back(g.uindex(g.base.unit, x));
          letters.push_back(g.uindex(g.base.unit, m));
          SparseVec val = g.eval_taylor(letters);
          for (const auto& [u, c] : val) {
            if (g.ugen(u) != q) continue;
            std::size_t a = g.ubase(u);
            int p_a = parity(g.base.module.degrees[a]);
            int par = (1 + (1 + smu) * p_phi + p_a * p_phi) % 2;
            sparse_add_term(nv, t.uindex(a, r + m), Rat(par ? -1 : 1) * c);
          }
        }
        if (!nv.empty()) t.taylor[n][w] = std::move(nv);
      }
    }
  }
  return mod;
}

CochainComplex module_sections(const LInfty& g, const LInftyModule& m, unsigned cap) {
  return module_sections_ce(g, m, cap).complex;
}

CEComplex module_sections_ce(const LInfty& g, const LInftyModule& m, unsigned cap) {
  const LInfty& t = m.total;
  std::vector<Word> words;
  {
    // enumerate base-only words of length <= cap, then append one module letter
    LInfty probe;
    probe.base = BaseAlgebra::rationals();
    for (std::size_t i = 0; i < m.split; ++i) {
      probe.gens.labels.push_back(t.gens.labels[i]);
      probe.gens.degrees.push_back(t.gens.degrees[i]);
    }
    for (const auto& wg : enumerate_words_upto(probe, cap))
      for (std::size_t q = m.split; q < t.rank(); ++q) {
        Word w = wg;
        w.push_back(q);
        words.push_back(w);
      }
  }
  (void)g;
  return cochain_core(t, std::move(words), cap + 1);
}

// ---- maps ----

ValidationReport validate_linfty_map(const LInftyMap& f) {
  const LInfty& s = *f.source;
  const LInfty& t = *f.target;
  s.check_shape();
  t.check_shape();
  if (f.base_map.rows() != t.base.dim() || f.base_map.cols() != s.base.dim())
    throw InputError("linfty map: base map shape mismatch");
  if (f.u_matrix.rows() != t.udim() || f.u_matrix.cols() != s.udim())
    throw InputError("linfty map: module map shape mismatch");
  ValidationReport rep;
  auto add = [&rep](const std::string& name, bool pass, const std::string& w = "") {
    rep.checks.push_back({name, pass, pass ? "" : w});
  };

  AlgebraMap bm{&s.base, &t.base, f.base_map};
  auto brep = validate_algebra_map(bm);
  std::string bw;
  for (const auto& c : brep.checks)
    if (!c.pass) bw = c.name + ": " + c.witness;
  add("base_map", brep.all_pass(), bw);

  bool deg_ok = true;
  std::string dw;
  for (std::size_t j = 0; j < s.udim() && deg_ok; ++j)
    for (std::size_t i = 0; i < t.udim(); ++i)
      if (!is_zero(f.u_matrix.at(i, j)) && t.usdeg(i) != s.usdeg(j)) {
        deg_ok = false;
        dw = "entry (" + t.ulabel(i) + "," + s.ulabel(j) + ") violates degree 0";
        break;
      }
  add("degree_zero", deg_ok, dw);

  bool equi_ok = true;
  std::string ew;
  for (std::size_t b = 0; b < s.base.dim() && equi_ok; ++b)
    for (std::size_t m = 0; m < s.rank(); ++m) {
      QVec lhs = f.u_matrix.col_vec(s.uindex(b, m));
      QVec chib = f.base_map.col_vec(b);
      QVec phim = f.u_matrix.col_vec(s.uindex(s.base.unit, m));
      QVec rhs = zero_vec(t.udim());
      for (std::size_t u = 0; u < t.udim(); ++u) {
        if (is_zero(phim[u])) continue;
        QVec prod = t.base.mul(chib, t.base.basis_vec(t.ubase(u)));
        for (std::size_t i = 0; i < t.base.dim(); ++i)
          if (!is_zero(prod[i])) rhs[t.uindex(i, t.ugen(u))] += phim[u] * prod[i];
      }
      if (lhs != rhs) {
        equi_ok = false;
        ew = "f(" + s.ulabel(s.uindex(b, m)) + ") != chi(" + s.base.module.labels[b] + ") f(" +
             s.gens.labels[m] + ")";
        break;
      }
    }
  add("equivariance", equi_ok, ew);

  bool tw_ok = true;
  std::string tw;
  unsigned arity = std::max({s.max_arity(), t.max_arity(), 1u});
  for (unsigned n = 0; n <= arity && tw_ok; ++n) {
    for (const auto& w : enumerate_words(s, n)) {
      std::vector<std::size_t> letters;
      std::vector<QVec> images;
      for (auto m : w) {
        letters.push_back(s.uindex(s.base.unit, m));
        images.push_back(f.u_matrix.col_vec(s.uindex(s.base.unit, m)));
      }
      QVec lhs = f.u_matrix.apply(sparse_to_dense(s.eval_taylor(letters), s.udim()));
      QVec rhs = t.eval_taylor_vecs(images);
      if (lhs != rhs) {
        tw_ok = false;
        tw = "map does not intertwine the arity " + std::to_string(n) + " component on " +
             word_label(s.gens, w);
        break;
      }
    }
  }
  add("taylor_intertwine", tw_ok, tw);
  return rep;
}

LInftyMap compose_maps(const LInftyMap& g, const LInftyMap& f) {
  if (f.target != g.source) throw InputError("compose_maps: source/target mismatch");
  return LInftyMap{f.source, g.target, g.base_map * f.base_map, g.u_matrix * f.u_matrix};
}

LInftyMap identity_map(const LInfty& g) {
  return LInftyMap{&g, &g, QMatrix::identity(g.base.dim()), QMatrix::identity(g.udim())};
}

LInftyMap base_change_map(const LInfty& s, const LInfty& t, const QMatrix& chi) {
  if (chi.rows() != t.base.dim() || chi.cols() != s.base.dim())
    throw InputError("base_change_map: base map shape mismatch");
  if (s.rank() != t.rank()) throw InputError("base_change_map: generator count mismatch");
  QMatrix u(t.udim(), s.udim());
  for (std::size_t b = 0; b < s.base.dim(); ++b)
    for (std::size_t m = 0; m < s.rank(); ++m)
      for (std::size_t i = 0; i < t.base.dim(); ++i)
        if (!is_zero(chi.at(i, b))) u.at(t.uindex(i, m), s.uindex(b, m)) = chi.at(i, b);
  return LInftyMap{&s, &t, chi, u};
}

ChainMap ce_chain_map(const LInftyMap& f, const CEComplex& cs, const CEComplex& ct) {
  const LInfty& s = *f.source;
  const LInfty& t = *f.target;
  auto widx = index_words(ct.words);
  QMatrix m(ct.complex.dim(), cs.complex.dim());
  for (std::size_t wi = 0; wi < cs.words.size(); ++wi) {
    const Word& w = cs.words[wi];
    const std::size_t len = w.size();
    std::vector<SparseVec> letter_images;
    for (auto mm : w)
      letter_images.push_back(dense_to_sparse(f.u_matrix.col_vec(s.uindex(s.base.unit, mm))));
    for (std::size_t b = 0; b < cs.base_dim; ++b) {
      const std::size_t col = cs.index(wi, b);
      QVec chib = f.base_map.col_vec(b);
      // expand the product of letter images
      std::vector<std::size_t> pos(len, 0);
      bool any_empty = false;
      for (const auto& li : letter_images)
        if (li.empty()) any_empty = true;
      if (any_empty) continue;
      while (true) {
        Rat coeff(1);
        std::vector<std::pair<std::size_t, std::size_t>> picks;  // (base, gen) in target
        for (std::size_t j = 0; j < len; ++j) {
          auto [u, c] = letter_images[j][pos[j]];
          coeff *= c;
          picks.push_back({t.ubase(u), t.ugen(u)});
        }
        // extraction sign and coefficient product
        int sign = 1, acc = 0;
        QVec prod = chib;
        for (std::size_t j = 0; j < len; ++j) {
          if (parity(t.base.module.degrees[picks[j].first]) && parity(acc)) sign = -sign;
          acc += parity(t.gen_sdeg(picks[j].second));
          prod = t.base.mul(prod, t.base.basis_vec(picks[j].first));
        }
        std::vector<std::pair<std::size_t, int>> items;
        for (const auto& [bb, mm] : picks) items.push_back({mm, t.gen_sdeg(mm)});
        int ss = koszul_sort_sign(items);
        Word nw;
        for (const auto& [mm, sd] : items) nw.push_back(mm);
        if (!has_repeated_odd(t, nw)) {
          auto target = widx.find(nw);
          if (target == widx.end()) {
            if (!vec_is_zero(prod) && !is_zero(coeff))
              throw CapOverflowError("chain map image leaves word cap");
          } else {
            for (std::size_t i = 0; i < ct.base_dim; ++i)
              if (!is_zero(prod[i]))
                m.at(ct.index(target->second, i), col) += Rat(sign * ss) * coeff * prod[i];
          }
        }
        std::size_t j = 0;
        for (; j < len; ++j) {
          if (++pos[j] < letter_images[j].size()) break;
          pos[j] = 0;
        }
        if (j == len) break;
      }
    }
  }
  return ChainMap{&cs.complex, &ct.complex, m};
}

namespace {

// Subspaces of the chains space spanned by the k-th ideal power in the base
// coefficient; F^0 is the whole space.
std::vector<Subspace> chain_ideal_filtration(const LInfty& g, const CEComplex& ce) {
  auto f = ideal_powers(g.base);
  const std::size_t n = ce.complex.dim();
  std::vector<Subspace> out;
  {
    std::vector<QVec> full;
    for (std::size_t i = 0; i < n; ++i) {
      QVec e = zero_vec(n);
      e[i] = 1;
      full.push_back(e);
    }
    out.push_back(Subspace::span(n, full));
  }
  for (const auto& power : f.powers) {
    std::vector<QVec> gens;
    for (std::size_t wi = 0; wi < ce.words.size(); ++wi)
      for (const auto& row : power.basis()) {
        QVec v = zero_vec(n);
        for (std::size_t b = 0; b < ce.base_dim; ++b) v[ce.index(wi, b)] = row[b];
        gens.push_back(std::move(v));
      }
    out.push_back(Subspace::span(n, gens));
  }
  return out;
}

}  // namespace

WeakEquivalenceResult is_weak_equivalence(const LInftyMap& f, unsigned cap) {
  const LInfty& s = *f.source;
  const LInfty& t = *f.target;
  WeakEquivalenceResult res;
  res.cap = cap;
  bool flat = s.is_flat() && t.is_flat();
  CEComplex cs = ce_chains(s, cap, !flat);
  CEComplex ct = ce_chains(t, cap, !flat);
  ChainMap m = ce_chain_map(f, cs, ct);
  if (flat) {
    res.route = "chains";
    auto cert = try_quasi_iso_check(m);
    bool ok = cert.is_chain_map && cert.is_quasi_iso;
    res.levels.push_back({"chains", ok,
                          ok ? ""
                             : (cert.is_chain_map ? "not a quasi-isomorphism"
                                                  : cert.chain_map_witness)});
    res.is_weak_equivalence = ok;
    return res;
  }
  res.route = "chains-graded";
  auto fs = chain_ideal_filtration(s, cs);
  auto ft = chain_ideal_filtration(t, ct);
  std::size_t levels = std::max(fs.size(), ft.size());
  res.is_weak_equivalence = true;
  Subspace zs(cs.complex.dim()), zt(ct.complex.dim());
  for (std::size_t k = 0; k + 1 < levels; ++k) {
    const Subspace& stop = k < fs.size() ? fs[k] : zs;
    const Subspace& sbot = k + 1 < fs.size() ? fs[k + 1] : zs;
    const Subspace& ttop = k < ft.size() ? ft[k] : zt;
    const Subspace& tbot = k + 1 < ft.size() ? ft[k + 1] : zt;
    GradedPiece ps = graded_piece(cs.complex.module, cs.complex.d, stop, sbot, "s");
    GradedPiece pt = graded_piece(ct.complex.module, ct.complex.d, ttop, tbot, "t");
    QMatrix ind(pt.complex.dim(), ps.complex.dim());
    for (std::size_t j = 0; j < ps.complex.dim(); ++j)
      ind.set_col(j, pt.project.apply(m.matrix.apply(ps.lift[j])));
    ChainMap cm{&ps.complex, &pt.complex, ind};
    auto cert = try_quasi_iso_check(cm);
    bool ok = cert.is_chain_map && cert.is_quasi_iso;
    res.levels.push_back({"gr^" + std::to_string(k), ok,
                          ok ? ""
                             : (cert.is_chain_map ? "not a quasi-isomorphism"
                                                  : cert.chain_map_witness)});
    if (!ok) res.is_weak_equivalence = false;
  }
  return res;
}

}  // namespace lspace
