#include "models.hpp"

#include <algorithm>
#include <map>

#include "errors.hpp"

namespace lspace {

namespace {

unsigned popcount(unsigned x) { return static_cast<unsigned>(__builtin_popcount(x)); }

// sign of concatenating dx_{m1} and dx_{m2} into sorted order
int wedge_sign(unsigned m1, unsigned m2) {
  unsigned inv = 0;
  for (unsigned i = 0; i < 32; ++i)
    if (m1 & (1u << i)) inv += popcount(m2 & ((1u << i) - 1));
  return inv % 2 ? -1 : 1;
}

void enumerate_exps(unsigned d, unsigned budget, std::vector<unsigned>& cur,
                    std::vector<std::vector<unsigned>>& out) {
  if (cur.size() == d) {
    out.push_back(cur);
    return;
  }
  for (unsigned e = 0; e <= budget; ++e) {
    cur.push_back(e);
    enumerate_exps(d, budget - e, cur, out);
    cur.pop_back();
  }
}

std::string affine_label(const std::vector<unsigned>& exps, unsigned mask) {
  std::string s;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] == 0) continue;
    if (!s.empty()) s += ".";
    s += "x" + std::to_string(i + 1);
    if (exps[i] > 1) s += "^" + std::to_string(exps[i]);
  }
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (!(mask & (1u << i))) continue;
    if (!s.empty()) s += ".";
    s += "dx" + std::to_string(i + 1);
  }
  return s.empty() ? "1" : s;
}

bool taylor_equal(const LInfty& a, const LInfty& b, std::string* w) {
  std::size_t n_max = std::max(a.taylor.size(), b.taylor.size());
  for (std::size_t n = 0; n < n_max; ++n) {
    std::map<Word, char> keys;
    if (n < a.taylor.size())
      for (const auto& [k, v] : a.taylor[n]) keys[k] = 1;
    if (n < b.taylor.size())
      for (const auto& [k, v] : b.taylor[n]) keys[k] = 1;
    for (const auto& [k, unused] : keys) {
      SparseVec va, vb;
      if (n < a.taylor.size()) {
        auto it = a.taylor[n].find(k);
        if (it != a.taylor[n].end()) va = it->second;
      }
      if (n < b.taylor.size()) {
        auto it = b.taylor[n].find(k);
        if (it != b.taylor[n].end()) vb = it->second;
      }
      if (va != vb) {
        if (w) *w = "arity " + std::to_string(n) + " structure constants differ";
        return false;
      }
    }
  }
  return true;
}

std::size_t count_monomials(unsigned d, int budget) {
  if (budget < 0) return 0;
  std::vector<std::vector<unsigned>> exps;
  std::vector<unsigned> cur;
  enumerate_exps(d, static_cast<unsigned>(budget), cur, exps);
  return exps.size();
}

Rat binomial(unsigned n, unsigned k) {
  Rat r(1);
  for (unsigned i = 0; i < k; ++i) r *= Rat(static_cast<long>(n - i)) / Rat(static_cast<long>(i + 1));
  return r;
}

}  // namespace

LInfty de_rham_space(const BaseAlgebra& base) {
  LInfty g;
  g.base = base;
  g.check_shape();
  return g;
}

std::size_t FormalAffineModel::base_index(const std::vector<unsigned>& exps,
                                          unsigned mask) const {
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (keys[i].first == exps && keys[i].second == mask) return i;
  throw InputError("formal affine: basis element out of range");
}

FormalAffineModel formal_affine_gX(unsigned d, unsigned J) {
  if (d == 0) throw InputError("formal affine: dimension must be positive");
  if (d >= 31) throw InputError("formal affine: dimension too large");
  FormalAffineModel m;
  m.dim = d;
  m.jets = J;

  std::vector<std::vector<unsigned>> exps;
  std::vector<unsigned> cur;
  enumerate_exps(d, J, cur, exps);
  for (const auto& e : exps)
    for (unsigned mask = 0; mask < (1u << d); ++mask) m.keys.push_back({e, mask});

  BaseAlgebra& b = m.g.base;
  for (const auto& [e, mask] : m.keys) {
    b.module.labels.push_back(affine_label(e, mask));
    b.module.degrees.push_back(static_cast<int>(popcount(mask)));
  }
  std::vector<unsigned> zero(d, 0);
  const std::size_t dim = m.keys.size();
  b.unit = m.base_index(zero, 0);
  // augmentation ideal: the quotient is Q, and jet truncation keeps it nilpotent
  for (std::size_t i = 0; i < dim; ++i)
    if (i != b.unit) b.ideal.push_back(i);

  b.mult.assign(dim, std::vector<SparseVec>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const auto& [e1, m1] = m.keys[i];
      const auto& [e2, m2] = m.keys[j];
      if (m1 & m2) continue;  // repeated dx: honestly zero
      std::vector<unsigned> e(d);
      unsigned total = 0;
      for (unsigned k = 0; k < d; ++k) total += (e[k] = e1[k] + e2[k]);
      if (total > J) {
        b.overflow_pairs.insert({i, j});
        continue;
      }
      sparse_add_term(b.mult[i][j], m.base_index(e, m1 | m2), Rat(wedge_sign(m1, m2)));
    }

  b.d = QMatrix(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto& [e, mask] = m.keys[i];
    for (unsigned k = 0; k < d; ++k) {
      if (e[k] == 0 || (mask & (1u << k))) continue;
      std::vector<unsigned> ne = e;
      --ne[k];
      int sign = popcount(mask & ((1u << k) - 1)) % 2 ? -1 : 1;
      b.d.at(m.base_index(ne, mask | (1u << k)), i) += Rat(sign * static_cast<int>(e[k]));
    }
  }

  for (unsigned k = 0; k < d; ++k) {
    m.g.gens.labels.push_back("xi" + std::to_string(k + 1));
    m.g.gens.degrees.push_back(1);
  }
  m.g.taylor.resize(1);
  SparseVec curving;
  for (unsigned k = 0; k < d; ++k) {
    std::size_t dxk = m.base_index(zero, 1u << k);
    sparse_add_term(curving, m.g.uindex(dxk, k), Rat(1));
  }
  m.g.taylor[0][Word{}] = std::move(curving);
  m.g.check_shape();
  return m;
}

JetCertificate jet_cohomology_check(const FormalAffineModel& m, unsigned word_cap) {
  JetCertificate cert;
  cert.cap = word_cap;
  const unsigned d = m.dim;
  const unsigned J = m.jets;
  // products of jet coordinates live in the modeled quotient, where capped
  // base monomials are honestly zero
  LInfty g = m.g;
  g.base.strict_overflow = false;
  CEComplex ce = ce_cochains(g, word_cap);
  const std::size_t nb = m.g.base.dim();
  const std::size_t n = ce.complex.dim();

  std::vector<unsigned> weight(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [e, mask] = m.keys[i % nb];
    unsigned t = static_cast<unsigned>(ce.words[i / nb].size()) + popcount(mask);
    for (unsigned k = 0; k < d; ++k) t += e[k];
    weight[i] = t;
  }

  cert.weight_graded = true;
  for (std::size_t r = 0; r < n && cert.weight_graded; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (!is_zero(ce.complex.d.at(r, c)) && weight[r] != weight[c]) {
        cert.weight_graded = false;
        cert.witness = "differential mixes weights " + std::to_string(weight[c]) + " and " +
                       std::to_string(weight[r]);
        break;
      }
  if (!cert.weight_graded) return cert;

  Cohomology total = cohomology(ce.complex);
  cert.h = total.dims;

  // monomials of total degree w in d variables, zero past the jet order
  auto monomials = [&](unsigned w) -> std::size_t {
    if (w > J) return 0;
    std::size_t num = 1, den = 1;
    for (unsigned k = 1; k < d; ++k) {
      num *= w + k;
      den *= k;
    }
    return num / den;
  };

  cert.positive_clear = true;
  cert.function_dims = true;
  for (unsigned w = 0; w <= word_cap; ++w) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (weight[i] == w) idx.push_back(i);
    CochainComplex sub;
    for (auto i : idx) {
      sub.module.labels.push_back(ce.complex.module.labels[i]);
      sub.module.degrees.push_back(ce.complex.module.degrees[i]);
    }
    sub.d = QMatrix(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c)
        sub.d.at(r, c) = ce.complex.d.at(idx[r], idx[c]);
    Cohomology hw = cohomology(sub);
    for (const auto& [k, dim] : hw.dims)
      if (k > 0 && dim > 0 && cert.positive_clear) {
        cert.positive_clear = false;
        cert.witness = "positive-degree class at weight " + std::to_string(w);
      }
    if (hw.dim(0) != monomials(w) && cert.function_dims) {
      cert.function_dims = false;
      cert.witness = "H^0 at weight " + std::to_string(w) + " has dimension " +
                     std::to_string(hw.dim(0)) + ", expected " + std::to_string(monomials(w));
    }
  }
  if (!cert.positive_clear || !cert.function_dims) return cert;

  // jet coordinates: y_k = x_k ⊗ 1 + s · 1 ⊗ ξ_k with the sign making it closed
  auto word_index = [&](const Word& w) -> std::size_t {
    for (std::size_t i = 0; i < ce.words.size(); ++i)
      if (ce.words[i] == w) return i;
    throw InputError("jet check: word cap too small");
  };
  std::vector<unsigned> zero(d, 0);
  std::size_t empty_word = word_index({});
  std::vector<QVec> y(d);
  for (unsigned k = 0; k < d; ++k) {
    std::vector<unsigned> e = zero;
    e[k] = 1;
    for (int s : {-1, 1}) {
      QVec v(n, Rat(0));
      v[ce.index(empty_word, m.base_index(e, 0))] = Rat(1);
      v[ce.index(word_index({k}), m.g.base.unit)] = Rat(s);
      QVec dv = ce.complex.d.apply(v);
      if (std::all_of(dv.begin(), dv.end(), [](const Rat& r) { return is_zero(r); })) {
        y[k] = std::move(v);
        break;
      }
    }
    if (y[k].empty()) {
      cert.witness = "no closed jet coordinate for x" + std::to_string(k + 1);
      return cert;
    }
  }

  // Monomials y^a for |a| <= J never overflow the truncations, so their
  // representatives are honest cocycles. The relation y^{J+1} = 0 is forced by
  // the weight grading: H^0 vanishes above weight J, where those products land.
  std::vector<std::vector<unsigned>> exps;
  std::vector<unsigned> cur;
  enumerate_exps(d, J, cur, exps);
  std::map<std::vector<unsigned>, QVec> rep;
  QVec one(n, Rat(0));
  one[ce.index(empty_word, m.g.base.unit)] = Rat(1);
  rep[zero] = one;
  std::sort(exps.begin(), exps.end(), [](const auto& a, const auto& b) {
    unsigned sa = 0, sb = 0;
    for (auto v : a) sa += v;
    for (auto v : b) sb += v;
    return sa < sb;
  });
  std::vector<QVec> classes;
  cert.ring = true;
  for (const auto& e : exps) {
    unsigned tot = 0;
    for (auto v : e) tot += v;
    if (tot == 0) continue;
    unsigned k = 0;
    while (e[k] == 0) ++k;
    std::vector<unsigned> prev = e;
    --prev[k];
    rep[e] = ce.mul_vec(rep.at(prev), y[k], g);
    auto cls = cohomology_class(ce.complex, total, rep[e], 0);
    if (!cls) {
      cert.ring = false;
      cert.witness = "jet monomial representative is not a cocycle";
      return cert;
    }
    classes.push_back(*cls);
  }
  classes.push_back(cohomology_class(ce.complex, total, one, 0).value());
  if (classes.size() != total.dim(0) ||
      Subspace::span(total.dim(0), classes).dim() != classes.size()) {
    cert.ring = false;
    cert.witness = "jet monomial classes do not form a basis of H^0";
  }
  return cert;
}

LInfty regroup_scalars(const LInfty& g, const BaseAlgebra& a, const BaseAlgebra& c) {
  g.check_shape();
  if (g.base.dim() != a.dim() * c.dim())
    throw InputError("regroup: base is not the stated tensor product");
  LInfty out;
  out.base = a;
  const std::size_t r = g.rank();
  for (std::size_t j = 0; j < c.dim(); ++j)
    for (std::size_t m = 0; m < r; ++m) {
      out.gens.labels.push_back(c.module.labels[j] + "*" + g.gens.labels[m]);
      out.gens.degrees.push_back(c.module.degrees[j] + g.gens.degrees[m]);
    }
  auto old_u = [&](std::size_t ng) {
    std::size_t j = ng / r, m = ng % r;
    return g.uindex(a.unit * c.dim() + j, m);
  };
  auto convert = [&](const SparseVec& v) {
    SparseVec nv;
    for (const auto& [u, coef] : v) {
      std::size_t bo = g.ubase(u), m = g.ugen(u);
      std::size_t ia = bo / c.dim(), j = bo % c.dim();
      sparse_add_term(nv, out.uindex(ia, j * r + m), coef);
    }
    return nv;
  };
  out.taylor.resize(std::max<std::size_t>(g.taylor.size(), 1));
  if (!g.taylor.empty()) {
    auto it = g.taylor[0].find(Word{});
    if (it != g.taylor[0].end()) {
      SparseVec nv = convert(it->second);
      if (!nv.empty()) out.taylor[0][Word{}] = std::move(nv);
    }
  }
  for (std::size_t n = 1; n < g.taylor.size(); ++n) {
    for (const Word& w : enumerate_words(out, static_cast<unsigned>(n))) {
      std::vector<std::size_t> letters;
      for (auto ng : w) letters.push_back(old_u(ng));
      SparseVec nv = convert(g.eval_taylor(letters));
      if (!nv.empty()) out.taylor[n][w] = std::move(nv);
    }
  }
  out.check_shape();
  return out;
}

LoopModel betti_loop(const LInfty& g) { return {"betti", extend_scalars(g, betti_circle())}; }

ValidationReport betti_loop_is_shifted_tangent(const LInfty& g) {
  ValidationReport rep;
  LInfty lhs = regroup_scalars(extend_scalars(g, betti_circle()), g.base, betti_circle());
  LInfty rhs = adjoint_module(g, -1).total;
  rep.checks.push_back({"generators", lhs.gens.degrees == rhs.gens.degrees,
                        lhs.gens.degrees == rhs.gens.degrees ? "" : "degree mismatch"});
  std::string w;
  bool t = taylor_equal(lhs, rhs, &w);
  rep.checks.push_back({"structure", t, w});
  return rep;
}

HKRCertificate hkr_check(const FormalAffineModel& m, unsigned cap) {
  if (cap == 0) throw InputError("hkr: cap must be positive");
  HKRCertificate cert;
  cert.cap = cap;
  LInfty loop = regroup_scalars(extend_scalars(m.g, betti_circle()), m.g.base, betti_circle());
  CEComplex ce = ce_cochains(loop, cap);
  const std::size_t nb = m.g.base.dim();
  const std::size_t n = ce.complex.dim();

  std::vector<unsigned> weight(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [e, mask] = m.keys[i % nb];
    unsigned t = static_cast<unsigned>(ce.words[i / nb].size()) + popcount(mask);
    for (unsigned k = 0; k < m.dim; ++k) t += e[k];
    weight[i] = t;
  }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (!is_zero(ce.complex.d.at(r, c)) && weight[r] != weight[c]) {
        cert.witness = "differential mixes weights";
        return cert;
      }

  for (unsigned w = 0; w <= cap; ++w) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (weight[i] == w) idx.push_back(i);
    CochainComplex sub;
    for (auto i : idx) {
      sub.module.labels.push_back(ce.complex.module.labels[i]);
      sub.module.degrees.push_back(ce.complex.module.degrees[i]);
    }
    sub.d = QMatrix(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c)
        sub.d.at(r, c) = ce.complex.d.at(idx[r], idx[c]);
    for (const auto& [k, dim] : cohomology(sub).dims)
      if (dim) cert.h[k] += dim;
  }

  // regraded forms: x^e dx_S in degree -|S| at weight |e| + |S|
  for (unsigned k = 0; k <= m.dim; ++k)
    for (unsigned t = 0; t <= m.jets; ++t) {
      if (t + k > cap) continue;
      std::size_t cnt = count_monomials(m.dim, static_cast<int>(t)) -
                        count_monomials(m.dim, static_cast<int>(t) - 1);
      Rat ways = binomial(m.dim, k) * Rat(static_cast<long>(cnt));
      if (ways != Rat(0))
        cert.expected[-static_cast<int>(k)] += static_cast<std::size_t>(ways.get_num().get_si());
    }
  cert.pass = cert.h == cert.expected;
  if (!cert.pass && cert.witness.empty()) cert.witness = "graded dimensions differ";
  return cert;
}

LoopModel de_rham_loop(const LInfty& g, unsigned form_cap) {
  return {"derham", extend_scalars(g, circle_forms(form_cap).alg)};
}

WeakEquivalenceResult loop_comparison(const LInfty& g, const QVec& omega, unsigned form_cap,
                                      unsigned word_cap) {
  CircleForms c = circle_forms(form_cap);
  QMatrix phi = circle_comparison(c, omega);  // c.dim x 2
  LInfty betti = extend_scalars(g, betti_circle());
  LInfty derham = extend_scalars(g, c.alg);
  // Compare along the filtration by the first tensor factor only: the circle
  // direction must stay unfiltered or the two sides' associated gradeds differ.
  auto coarse_ideal = [&](LInfty& h, std::size_t dim_c) {
    h.base.ideal.clear();
    for (auto i : g.base.ideal)
      for (std::size_t j = 0; j < dim_c; ++j) h.base.ideal.push_back(i * dim_c + j);
  };
  coarse_ideal(betti, 2);
  coarse_ideal(derham, c.dim());
  const std::size_t na = g.base.dim();
  QMatrix chi(na * c.dim(), na * 2);
  for (std::size_t ia = 0; ia < na; ++ia)
    for (std::size_t jc = 0; jc < c.dim(); ++jc)
      for (std::size_t jb = 0; jb < 2; ++jb)
        chi.at(ia * c.dim() + jc, ia * 2 + jb) = phi.at(jc, jb);
  LInftyMap f = base_change_map(betti, derham, chi);
  return is_weak_equivalence(f, word_cap);
}

AKSZPairing aksz_pairing(unsigned m, unsigned J, const QVec& nu, unsigned form_cap) {
  if (m == 0) throw InputError("aksz: target dimension must be positive");
  AKSZPairing p;
  p.circle = circle_forms(form_cap);
  if (nu.size() != p.circle.dim()) throw InputError("aksz: nu dimension mismatch");
  for (std::size_t i = 0; i < nu.size(); ++i)
    if (!is_zero(nu[i]) && p.circle.alg.module.degrees[i] != 1)
      throw InputError("aksz: nu must be a one-form");
  p.nu = nu;
  p.nu_integral = integrate_circle(p.circle, nu);
  if (is_zero(p.nu_integral)) throw InputError("aksz: nu is exact");

  p.target = formal_affine_gX(2 * m, J);
  LInfty big = extend_scalars(p.target.g, p.circle.alg);
  p.loop = regroup_scalars(big, p.target.g.base, p.circle.alg);
  p.dr = de_rham_of_Bg(p.loop, 2);

  const unsigned cap = p.circle.cap;
  // exact polynomial form of a circle basis element: (is one-form, coefficients)
  auto poly = [&](std::size_t idx) -> std::pair<bool, std::vector<Rat>> {
    if (idx == 0) return {false, {Rat(1)}};
    if (idx <= cap) {
      std::vector<Rat> c(idx + 2, Rat(0));
      c[idx + 1] = Rat(1);
      c[1] = Rat(-1);
      return {false, c};
    }
    std::size_t k = idx - cap - 1;
    std::vector<Rat> c(k + 1, Rat(0));
    c[k] = Rat(1);
    return {true, c};
  };
  auto fundamental = [&](std::size_t j1, std::size_t j2) {
    auto [o1, c1] = poly(j1);
    auto [o2, c2] = poly(j2);
    if (o1 == o2) return Rat(0);
    Rat total(0);
    for (std::size_t a = 0; a < c1.size(); ++a)
      for (std::size_t b2 = 0; b2 < c2.size(); ++b2)
        total += c1[a] * c2[b2] / Rat(static_cast<long>(a + b2 + 1));
    return total;
  };
  auto sym = [&](std::size_t i1, std::size_t i2) {
    if (i2 == i1 + m) return Rat(1);
    if (i1 == i2 + m) return Rat(-1);
    return Rat(0);
  };

  const std::size_t r = p.loop.rank();
  const std::size_t d2 = 2 * m;
  std::map<Word, std::size_t> widx;
  for (std::size_t i = 0; i < p.dr.ce.words.size(); ++i) widx[p.dr.ce.words[i]] = i;
  p.omega = zero_vec(p.dr.dim());
  for (std::size_t u1 = 0; u1 < r; ++u1)
    for (std::size_t u2 = u1 + 1; u2 < r; ++u2) {
      Rat coef = sym(u1 % d2, u2 % d2) * fundamental(u1 / d2, u2 / d2) * p.nu_integral;
      if (is_zero(coef)) continue;
      Word w{r + u1, r + u2};
      auto it = widx.find(w);
      if (it == widx.end()) throw InputError("aksz: pairing word missing from the basis");
      p.omega[p.dr.ce.index(it->second, p.loop.base.unit)] += coef;
    }
  return p;
}

AKSZCertificate aksz_certify(const AKSZPairing& p, unsigned section_cap) {
  return {symplectic_check(p.loop, p.dr, p.omega, section_cap), -1};
}

}  // namespace lspace
