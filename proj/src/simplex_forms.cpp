#include "simplex_forms.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "errors.hpp"

namespace lspace {

namespace {

std::vector<std::vector<unsigned>> monomials_upto(unsigned n, unsigned cap) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur(n, 0);
  auto rec = [&](auto&& self, unsigned var, unsigned left) -> void {
    if (var == n) {
      out.push_back(cur);
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      cur[var] = e;
      self(self, var + 1, left - e);
    }
    cur[var] = 0;
  };
  rec(rec, 0, cap);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    unsigned sa = 0, sb = 0;
    for (auto x : a) sa += x;
    for (auto x : b) sb += x;
    if (sa != sb) return sa < sb;
    return a < b;
  });
  return out;
}

unsigned total_degree(const std::vector<unsigned>& exps) {
  unsigned s = 0;
  for (auto e : exps) s += e;
  return s;
}

std::string form_label(const std::vector<unsigned>& exps, unsigned mask) {
  std::string s;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (!exps[i]) continue;
    if (!s.empty()) s += ".";
    s += "t" + std::to_string(i + 1);
    if (exps[i] > 1) s += "^" + std::to_string(exps[i]);
  }
  for (std::size_t i = 0; i < exps.size(); ++i)
    if ((mask >> i) & 1) {
      if (!s.empty()) s += ".";
      s += "dt" + std::to_string(i + 1);
    }
  return s.empty() ? "1" : s;
}

// sign of dt_S ^ dt_T relative to the sorted union (S, T disjoint)
int merge_sign(unsigned smask, unsigned tmask, unsigned n) {
  int inversions = 0;
  for (unsigned t = 0; t < n; ++t) {
    if (!((tmask >> t) & 1)) continue;
    for (unsigned s = t + 1; s < n; ++s)
      if ((smask >> s) & 1) ++inversions;
  }
  return (inversions % 2) ? -1 : 1;
}

}  // namespace

std::size_t SimplexForms::index_of(const std::vector<unsigned>& exps, unsigned mask) const {
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (keys[i].first == exps && keys[i].second == mask) return i;
  throw InputError("simplex forms: basis element not found");
}

SimplexForms simplex_forms(unsigned n, unsigned cap) {
  SimplexForms f;
  f.n = n;
  f.cap = cap;
  auto monos = monomials_upto(n, cap);
  std::map<std::pair<std::vector<unsigned>, unsigned>, std::size_t> idx;
  for (const auto& m : monos)
    for (unsigned mask = 0; mask < (1u << n) || (n == 0 && mask == 0); ++mask) {
      idx[{m, mask}] = f.keys.size();
      f.keys.push_back({m, mask});
      f.alg.module.labels.push_back(form_label(m, mask));
      f.alg.module.degrees.push_back(__builtin_popcount(mask));
      if (n == 0) break;
    }
  const std::size_t dim = f.keys.size();
  f.alg.unit = idx.at({std::vector<unsigned>(n, 0), 0});
  f.alg.mult.assign(dim, std::vector<SparseVec>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const auto& [ea, ma] = f.keys[i];
      const auto& [eb, mb] = f.keys[j];
      if (ma & mb) continue;  // repeated dt: exact zero
      std::vector<unsigned> e(n);
      for (unsigned k = 0; k < n; ++k) e[k] = ea[k] + eb[k];
      if (total_degree(e) > cap) {
        f.alg.overflow_pairs.insert({i, j});
        continue;
      }
      int sign = merge_sign(ma, mb, n);
      f.alg.mult[i][j] = {{idx.at({e, ma | mb}), Rat(sign)}};
    }
  f.alg.d = QMatrix(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const auto& [e, mask] = f.keys[j];
    for (unsigned v = 0; v < n; ++v) {
      if (!e[v] || ((mask >> v) & 1)) continue;
      std::vector<unsigned> ne = e;
      --ne[v];
      // dt_v moved past the dt's below it in the existing mask
      int inversions = 0;
      for (unsigned s = 0; s < v; ++s)
        if ((mask >> s) & 1) ++inversions;
      int sign = (inversions % 2) ? -1 : 1;
      f.alg.d.at(idx.at({ne, mask | (1u << v)}), j) += Rat(sign * static_cast<int>(e[v]));
    }
  }
  return f;
}

namespace {

// image of each coordinate t_j (j = 1..n of `big`) as an affine function in
// the coordinates of `small`
std::vector<QVec> face_coordinate_images(const SimplexForms& big, const SimplexForms& small,
                                         unsigned i) {
  const unsigned n = big.n;
  auto constant = [&](const Rat& c) {
    QVec v = zero_vec(small.dim());
    v[small.alg.unit] = c;
    return v;
  };
  auto coordinate = [&](unsigned k) {  // u_k, k = 1..n-1
    std::vector<unsigned> e(small.n, 0);
    e[k - 1] = 1;
    QVec v = zero_vec(small.dim());
    v[small.index_of(e, 0)] = 1;
    return v;
  };
  std::vector<QVec> images;
  for (unsigned j = 1; j <= n; ++j) {
    if (i == 0) {
      if (j == 1) {
        QVec v = constant(Rat(1));
        for (unsigned k = 1; k < n; ++k) vec_axpy(v, Rat(-1), coordinate(k));
        images.push_back(std::move(v));
      } else {
        images.push_back(coordinate(j - 1));
      }
    } else {
      if (j < i)
        images.push_back(coordinate(j));
      else if (j == i)
        images.push_back(constant(Rat(0)));
      else
        images.push_back(coordinate(j - 1));
    }
  }
  return images;
}

std::vector<QVec> degeneracy_coordinate_images(const SimplexForms& small, const SimplexForms& big,
                                               unsigned j) {
  auto coordinate = [&](unsigned k) {  // u_k in big, k = 1..n+1
    std::vector<unsigned> e(big.n, 0);
    e[k - 1] = 1;
    QVec v = zero_vec(big.dim());
    v[big.index_of(e, 0)] = 1;
    return v;
  };
  std::vector<QVec> images;
  for (unsigned k = 1; k <= small.n; ++k) {
    if (k < j || j == 0) {
      images.push_back(coordinate(j == 0 ? k + 1 : k));
    } else if (k == j) {
      QVec v = coordinate(j);
      vec_axpy(v, Rat(1), coordinate(j + 1));
      images.push_back(std::move(v));
    } else {
      images.push_back(coordinate(k + 1));
    }
  }
  return images;
}

QMatrix pullback_matrix(const SimplexForms& source_forms, const SimplexForms& target_forms,
                        const std::vector<QVec>& images) {
  // source_forms: domain of the pullback map (forms on the bigger simplex for
  // faces); target_forms: codomain algebra in which images live
  QMatrix m(target_forms.dim(), source_forms.dim());
  std::vector<QVec> dimages;
  for (const auto& img : images) dimages.push_back(target_forms.alg.d.apply(img));
  for (std::size_t col = 0; col < source_forms.dim(); ++col) {
    const auto& [exps, mask] = source_forms.keys[col];
    QVec acc = zero_vec(target_forms.dim());
    acc[target_forms.alg.unit] = 1;
    for (unsigned v = 0; v < source_forms.n; ++v)
      for (unsigned p = 0; p < exps[v]; ++p) acc = target_forms.alg.mul(acc, images[v]);
    for (unsigned v = 0; v < source_forms.n; ++v)
      if ((mask >> v) & 1) acc = target_forms.alg.mul(acc, dimages[v]);
    m.set_col(col, acc);
  }
  return m;
}

}  // namespace

QMatrix face_pullback(const SimplexForms& big, const SimplexForms& small, unsigned i) {
  if (small.n + 1 != big.n || i > big.n) throw InputError("face pullback: index out of range");
  if (small.cap < big.cap) throw InputError("face pullback: target cap too small");
  return pullback_matrix(big, small, face_coordinate_images(big, small, i));
}

QMatrix degeneracy_pullback(const SimplexForms& small, const SimplexForms& big, unsigned j) {
  if (big.n != small.n + 1 || j > small.n)
    throw InputError("degeneracy pullback: index out of range");
  if (big.cap < small.cap) throw InputError("degeneracy pullback: target cap too small");
  return pullback_matrix(small, big, degeneracy_coordinate_images(small, big, j));
}

Rat integrate_simplex(const SimplexForms& f, const QVec& form) {
  if (form.size() != f.dim()) throw InputError("integrate: dimension mismatch");
  const unsigned full = f.n == 0 ? 0u : ((1u << f.n) - 1);
  Rat total(0);
  for (std::size_t i = 0; i < f.dim(); ++i) {
    if (is_zero(form[i])) continue;
    const auto& [exps, mask] = f.keys[i];
    if (mask != full) throw InputError("integrate: form has a non-top component");
    // Dirichlet: integral of t^a dt_1..dt_n over the simplex = prod a_v! / (n + |a|)!
    Rat val(1);
    unsigned s = 0;
    for (auto e : exps) {
      val *= factorial(e);
      s += e;
    }
    val /= factorial(f.n + s);
    total += form[i] * val;
  }
  return total;
}

// ---- circle model ----

std::size_t CircleForms::fun_index(unsigned k) const {
  if (k < 2 || k > cap + 1) throw InputError("circle: function index out of range");
  return k - 1;
}

std::size_t CircleForms::one_index(unsigned k) const {
  if (k > cap) throw InputError("circle: one-form index out of range");
  return cap + 1 + k;
}

CircleForms circle_forms(unsigned cap) {
  CircleForms c;
  c.cap = cap;
  BaseAlgebra& a = c.alg;
  a.module.labels.push_back("1");
  a.module.degrees.push_back(0);
  for (unsigned k = 2; k <= cap + 1; ++k) {
    a.module.labels.push_back("p" + std::to_string(k));  // p_k = t^k - t
    a.module.degrees.push_back(0);
  }
  for (unsigned k = 0; k <= cap; ++k) {
    a.module.labels.push_back(k == 0 ? "dt" : "t^" + std::to_string(k) + ".dt");
    a.module.degrees.push_back(1);
  }
  a.unit = 0;
  const std::size_t dim = a.module.dim();
  a.mult.assign(dim, std::vector<SparseVec>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    a.mult[0][i] = {{i, Rat(1)}};
    a.mult[i][0] = {{i, Rat(1)}};
  }
  for (unsigned j = 2; j <= cap + 1; ++j)
    for (unsigned k = 2; k <= cap + 1; ++k) {
      if (j + k > cap + 1) {
        a.overflow_pairs.insert({c.fun_index(j), c.fun_index(k)});
        continue;
      }
      // (t^j - t)(t^k - t) = p_{j+k} - p_{j+1} - p_{k+1} + p_2
      SparseVec v;
      sparse_add_term(v, c.fun_index(j + k), Rat(1));
      sparse_add_term(v, c.fun_index(j + 1), Rat(-1));
      sparse_add_term(v, c.fun_index(k + 1), Rat(-1));
      sparse_add_term(v, c.fun_index(2), Rat(1));
      a.mult[c.fun_index(j)][c.fun_index(k)] = std::move(v);
    }
  for (unsigned k = 2; k <= cap + 1; ++k)
    for (unsigned m = 0; m <= cap; ++m) {
      if (k + m > cap) {
        a.overflow_pairs.insert({c.fun_index(k), c.one_index(m)});
        a.overflow_pairs.insert({c.one_index(m), c.fun_index(k)});
        continue;
      }
      // (t^k - t) t^m dt = t^{k+m} dt - t^{m+1} dt
      SparseVec v;
      sparse_add_term(v, c.one_index(k + m), Rat(1));
      sparse_add_term(v, c.one_index(m + 1), Rat(-1));
      a.mult[c.fun_index(k)][c.one_index(m)] = v;
      a.mult[c.one_index(m)][c.fun_index(k)] = std::move(v);
    }
  // one-form products vanish exactly
  a.d = QMatrix(dim, dim);
  for (unsigned k = 2; k <= cap + 1; ++k) {
    // d(t^k - t) = k t^{k-1} dt - dt
    a.d.at(c.one_index(k - 1), c.fun_index(k)) += Rat(static_cast<int>(k));
    a.d.at(c.one_index(0), c.fun_index(k)) += Rat(-1);
  }
  // augmentation ideal: p_k and one-forms; quotient is Q, nilpotent in the truncation
  for (std::size_t i = 1; i < dim; ++i) a.ideal.push_back(i);
  return c;
}

Rat integrate_circle(const CircleForms& c, const QVec& form) {
  if (form.size() != c.dim()) throw InputError("integrate: dimension mismatch");
  Rat total(0);
  for (std::size_t i = 0; i < c.dim(); ++i) {
    if (is_zero(form[i])) continue;
    if (c.alg.module.degrees[i] != 1)
      throw InputError("integrate: form has a non-top component");
    unsigned k = static_cast<unsigned>(i - (c.cap + 1));
    total += form[i] / Rat(static_cast<int>(k + 1));
  }
  return total;
}

BaseAlgebra betti_circle() { return BaseAlgebra::dual_numbers(1, "eps"); }

QMatrix circle_comparison(const CircleForms& c, const QVec& omega) {
  if (omega.size() != c.dim()) throw InputError("circle comparison: dimension mismatch");
  for (std::size_t i = 0; i < c.dim(); ++i)
    if (!is_zero(omega[i]) && c.alg.module.degrees[i] != 1)
      throw InputError("circle comparison: omega is not a one-form");
  if (is_zero(integrate_circle(c, omega)))
    throw InputError("circle comparison: omega has vanishing integral, not a volume form");
  QMatrix m(c.dim(), 2);
  m.at(c.alg.unit, 0) = 1;
  m.set_col(1, omega);
  return m;
}

}  // namespace lspace
