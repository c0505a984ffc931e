#include "base_algebra.hpp"

#include <algorithm>
#include <set>

#include "errors.hpp"

namespace lspace {

void sparse_add(SparseVec& acc, const SparseVec& v, const Rat& scale) {
  if (is_zero(scale)) return;
  for (const auto& [i, c] : v) sparse_add_term(acc, i, scale * c);
}

void sparse_add_term(SparseVec& acc, std::size_t idx, const Rat& coeff) {
  if (is_zero(coeff)) return;
  auto it = std::lower_bound(acc.begin(), acc.end(), idx,
                             [](const auto& p, std::size_t i) { return p.first < i; });
  if (it != acc.end() && it->first == idx) {
    it->second += coeff;
    if (is_zero(it->second)) acc.erase(it);
  } else {
    acc.insert(it, {idx, coeff});
  }
}

QVec sparse_to_dense(const SparseVec& v, std::size_t n) {
  QVec out = zero_vec(n);
  for (const auto& [i, c] : v) out[i] = c;
  return out;
}

SparseVec dense_to_sparse(const QVec& v) {
  SparseVec out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!is_zero(v[i])) out.push_back({i, v[i]});
  return out;
}

bool ValidationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void BaseAlgebra::check_shape() const {
  module.check();
  std::size_t n = dim();
  if (unit >= n) throw InputError("base algebra: unit index out of range");
  if (mult.size() != n) throw InputError("base algebra: mult table row count mismatch");
  for (const auto& row : mult) {
    if (row.size() != n) throw InputError("base algebra: mult table column count mismatch");
    for (const auto& entry : row)
      for (const auto& [k, c] : entry)
        if (k >= n) throw InputError("base algebra: mult table index out of range");
  }
  if (d.rows() != n || d.cols() != n)
    throw InputError("base algebra: differential shape mismatch");
  for (auto i : ideal)
    if (i >= n) throw InputError("base algebra: ideal index out of range");
}

QVec BaseAlgebra::basis_vec(std::size_t i) const {
  QVec v = zero_vec(dim());
  v[i] = 1;
  return v;
}

SparseVec BaseAlgebra::mul_basis(std::size_t i, std::size_t j) const {
  if (strict_overflow && pair_overflows(i, j))
    throw CapOverflowError("base algebra: product " + module.labels[i] + " * " +
                           module.labels[j] + " exceeds the degree cap");
  return mult[i][j];
}

QVec BaseAlgebra::mul(const QVec& a, const QVec& b) const {
  QVec out = zero_vec(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (is_zero(a[i])) continue;
    for (std::size_t j = 0; j < dim(); ++j) {
      if (is_zero(b[j])) continue;
      if (strict_overflow && pair_overflows(i, j))
        throw CapOverflowError("base algebra: product " + module.labels[i] + " * " +
                               module.labels[j] + " exceeds the degree cap");
      Rat f = a[i] * b[j];
      for (const auto& [k, c] : mult[i][j]) out[k] += f * c;
    }
  }
  return out;
}

Subspace BaseAlgebra::ideal_span() const {
  std::vector<QVec> gens;
  for (auto i : ideal) gens.push_back(basis_vec(i));
  return Subspace::span(dim(), gens);
}

CochainComplex BaseAlgebra::as_complex() const { return CochainComplex{module, d}; }

BaseAlgebra BaseAlgebra::rationals() {
  BaseAlgebra a;
  a.module.labels = {"1"};
  a.module.degrees = {0};
  a.unit = 0;
  a.mult = {{SparseVec{{0, Rat(1)}}}};
  a.d = QMatrix(1, 1);
  return a;
}

BaseAlgebra BaseAlgebra::dual_numbers(int eps_degree, const std::string& eps_label) {
  BaseAlgebra a;
  a.module.labels = {"1", eps_label};
  a.module.degrees = {0, eps_degree};
  a.unit = 0;
  a.mult.assign(2, std::vector<SparseVec>(2));
  a.mult[0][0] = {{0, Rat(1)}};
  a.mult[0][1] = {{1, Rat(1)}};
  a.mult[1][0] = {{1, Rat(1)}};
  a.mult[1][1] = {};  // eps^2 = 0 (also forced when eps is odd)
  a.d = QMatrix(2, 2);
  a.ideal = {1};
  return a;
}

BaseAlgebra BaseAlgebra::truncated_polynomial(unsigned n, const std::string& var) {
  BaseAlgebra a;
  for (unsigned k = 0; k <= n; ++k) {
    a.module.labels.push_back(k == 0 ? "1" : (k == 1 ? var : var + "^" + std::to_string(k)));
    a.module.degrees.push_back(0);
    if (k > 0) a.ideal.push_back(k);
  }
  a.unit = 0;
  std::size_t dim = n + 1;
  a.mult.assign(dim, std::vector<SparseVec>(dim));
  for (unsigned i = 0; i <= n; ++i)
    for (unsigned j = 0; j <= n; ++j)
      if (i + j <= n) a.mult[i][j] = {{i + j, Rat(1)}};
  a.d = QMatrix(dim, dim);
  return a;
}

ValidationReport validate_base_algebra(const BaseAlgebra& a) {
  a.check_shape();
  ValidationReport rep;
  auto add = [&rep](const std::string& name, bool pass, const std::string& witness = "") {
    rep.checks.push_back({name, pass, pass ? "" : witness});
  };
  const std::size_t n = a.dim();
  const auto& deg = a.module.degrees;
  const auto& lab = a.module.labels;

  // grading of mult and d
  {
    bool ok = true;
    std::string w;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j)
        for (const auto& [k, c] : a.mult[i][j])
          if (deg[k] != deg[i] + deg[j]) {
            ok = false;
            w = lab[i] + "*" + lab[j] + " has component " + lab[k] + " of wrong degree";
            break;
          }
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j)
        if (!is_zero(a.d.at(i, j)) && deg[i] != deg[j] + 1) {
          ok = false;
          w = "d(" + lab[j] + ") has component " + lab[i] + " of wrong degree";
        }
    add("grading", ok, w);
  }

  // unit
  {
    bool ok = deg[a.unit] == 0;
    std::string w = ok ? "" : "unit has nonzero degree";
    for (std::size_t i = 0; i < n && ok; ++i) {
      SparseVec want{{i, Rat(1)}};
      if (a.mult[a.unit][i] != want || a.mult[i][a.unit] != want) {
        ok = false;
        w = "1*" + lab[i] + " != " + lab[i];
      }
    }
    add("unital", ok, w);
  }

  // associativity
  {
    bool ok = true;
    std::string w;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j)
        for (std::size_t k = 0; k < n && ok; ++k) {
          // truncated products are certified only away from overflow pairs
          if (a.pair_overflows(i, j) || a.pair_overflows(j, k)) continue;
          bool skip = false;
          for (const auto& [m, c] : a.mult[i][j])
            if (a.pair_overflows(m, k)) skip = true;
          for (const auto& [m, c] : a.mult[j][k])
            if (a.pair_overflows(i, m)) skip = true;
          if (skip) continue;
          SparseVec left, right;
          for (const auto& [m, c] : a.mult[i][j]) sparse_add(left, a.mult[m][k], c);
          for (const auto& [m, c] : a.mult[j][k]) sparse_add(right, a.mult[i][m], c);
          if (left != right) {
            ok = false;
            w = "(" + lab[i] + "*" + lab[j] + ")*" + lab[k] + " != " + lab[i] + "*(" + lab[j] +
                "*" + lab[k] + ")";
          }
        }
    add("associativity", ok, w);
  }

  // graded commutativity
  {
    bool ok = true;
    std::string w;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j) {
        SparseVec flipped = a.mult[j][i];
        if (koszul(deg[i], deg[j]) < 0)
          for (auto& [k, c] : flipped) c = -c;
        if (a.mult[i][j] != flipped) {
          ok = false;
          w = lab[i] + "*" + lab[j] + " != (-1)^{|" + lab[i] + "||" + lab[j] + "|} " + lab[j] +
              "*" + lab[i];
        }
      }
    add("graded_commutativity", ok, w);
  }

  // d^2 = 0
  {
    bool ok = (a.d * a.d).is_zero();
    add("d_squared_zero", ok, ok ? "" : "d^2 != 0");
  }

  // Leibniz: d(xy) = d(x)y + (-1)^{|x|} x d(y)
  {
    bool ok = true;
    std::string w;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j) {
        if (a.pair_overflows(i, j)) continue;
        try {
          QVec prod = sparse_to_dense(a.mult[i][j], n);
          QVec lhs = a.d.apply(prod);
          QVec rhs = a.mul(a.d.apply(a.basis_vec(i)), a.basis_vec(j));
          QVec t2 = a.mul(a.basis_vec(i), a.d.apply(a.basis_vec(j)));
          Rat s = (deg[i] % 2) ? Rat(-1) : Rat(1);
          vec_axpy(rhs, s, t2);
          for (std::size_t k = 0; k < n; ++k)
            if (lhs[k] != rhs[k]) {
              ok = false;
              w = "Leibniz fails on " + lab[i] + "*" + lab[j];
              break;
            }
        } catch (const CapOverflowError&) {
          continue;  // not certified on truncated products
        }
      }
    add("leibniz", ok, w);
  }

  // ideal is a dg ideal: I*A <= I and d(I) <= I
  Subspace ispan = a.ideal_span();
  {
    bool ok = true;
    std::string w;
    for (auto i : a.ideal) {
      for (std::size_t j = 0; j < n && ok; ++j)
        if (!ispan.contains(sparse_to_dense(a.mult[i][j], n))) {
          ok = false;
          w = lab[i] + "*" + lab[j] + " leaves the ideal";
        }
      if (ok && !ispan.contains(a.d.apply(a.basis_vec(i)))) {
        ok = false;
        w = "d(" + lab[i] + ") leaves the ideal";
      }
    }
    add("dg_ideal", ok, w);
  }

  // nilpotency
  {
    bool ok = true;
    std::string w;
    try {
      ideal_powers(a);
    } catch (const InputError& e) {
      ok = false;
      w = e.what();
    }
    add("nilpotency", ok, w);
  }

  // quotient by I is one-dimensional in degree 0, spanned by the unit
  {
    bool ok = !ispan.contains(a.basis_vec(a.unit));
    std::string w = ok ? "" : "unit lies in the ideal";
    if (ok) {
      std::vector<QVec> gens;
      for (auto i : a.ideal) gens.push_back(a.basis_vec(i));
      gens.push_back(a.basis_vec(a.unit));
      if (Subspace::span(n, gens).dim() != n) {
        ok = false;
        w = "quotient by the ideal has dimension > 1";
      }
    }
    add("unit_quotient", ok, w);
  }

  // cohomology concentrated in non-positive degrees; only decidable without a
  // degree cap (capped algebras shed exactness witnesses, e.g. x^J dx)
  if (a.overflow_pairs.empty()) {
    bool ok = true;
    std::string w;
    if ((a.d * a.d).is_zero()) {
      CochainComplex c = a.as_complex();
      if (c.d_respects_degree()) {
        auto h = cohomology(c);
        for (const auto& [k, dm] : h.dims)
          if (k > 0 && dm > 0) {
            ok = false;
            w = "H^" + std::to_string(k) + " has dimension " + std::to_string(dm);
            break;
          }
      } else {
        ok = false;
        w = "differential not of degree +1";
      }
    } else {
      ok = false;
      w = "d^2 != 0, cohomology undefined";
    }
    add("nonpositive_cohomology", ok, w);
  }

  return rep;
}

IdealFiltration ideal_powers(const BaseAlgebra& a0) {
  a0.check_shape();
  // Powers are computed in the modeled quotient: capped products are honestly
  // zero there, so overflow pairs do not obstruct the filtration.
  BaseAlgebra a = a0;
  a.strict_overflow = false;
  IdealFiltration f;
  const std::size_t n = a.dim();
  Subspace cur = a.ideal_span();
  std::vector<QVec> ideal_gens;
  for (auto i : a.ideal) ideal_gens.push_back(a.basis_vec(i));

  unsigned k = 1;
  while (cur.dim() > 0) {
    f.powers.push_back(cur);
    if (k > n + 1)
      throw InputError("ideal is not nilpotent: filtration fails to stabilize at 0 within " +
                       std::to_string(n) + " steps");
    std::vector<QVec> next_gens;
    for (const auto& x : cur.basis())
      for (const auto& g : ideal_gens) next_gens.push_back(a.mul(x, g));
    Subspace next = Subspace::span(n, next_gens);
    if (next.dim() == cur.dim())
      throw InputError("ideal is not nilpotent: I^" + std::to_string(k + 1) + " = I^" +
                       std::to_string(k) + " != 0");
    cur = next;
    ++k;
  }
  f.powers.push_back(cur);  // the zero space
  f.nilpotency_index = k;
  return f;
}

std::vector<GradedPiece> associated_graded(const BaseAlgebra& a) {
  auto f = ideal_powers(a);
  std::vector<QVec> full;
  for (std::size_t i = 0; i < a.dim(); ++i) full.push_back(a.basis_vec(i));
  Subspace whole = Subspace::span(a.dim(), full);

  std::vector<GradedPiece> out;
  // F^0 = whole algebra, F^k = powers[k-1] for k >= 1
  for (unsigned k = 0; k < f.nilpotency_index; ++k) {
    const Subspace& top = (k == 0) ? whole : f.powers[k - 1];
    const Subspace& bottom = f.powers[k];
    out.push_back(graded_piece(a.module, a.d, top, bottom, "gr" + std::to_string(k)));
  }
  return out;
}

BaseAlgebra tensor_cdga(const BaseAlgebra& a, const BaseAlgebra& b) {
  const std::size_t na = a.dim(), nb = b.dim(), n = na * nb;
  auto idx = [nb](std::size_t i, std::size_t j) { return i * nb + j; };
  BaseAlgebra t;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      t.module.labels.push_back(a.module.labels[i] + "(x)" + b.module.labels[j]);
      t.module.degrees.push_back(a.module.degrees[i] + b.module.degrees[j]);
    }
  t.unit = idx(a.unit, b.unit);
  t.mult.assign(n, std::vector<SparseVec>(n));
  for (std::size_t i1 = 0; i1 < na; ++i1)
    for (std::size_t j1 = 0; j1 < nb; ++j1)
      for (std::size_t i2 = 0; i2 < na; ++i2)
        for (std::size_t j2 = 0; j2 < nb; ++j2) {
          // (x (x) y)(x' (x) y') = (-1)^{|y||x'|} xx' (x) yy'
          int s = koszul(b.module.degrees[j1], a.module.degrees[i2]);
          SparseVec out;
          for (const auto& [ka, ca] : a.mult[i1][i2])
            for (const auto& [kb, cb] : b.mult[j1][j2])
              sparse_add_term(out, idx(ka, kb), Rat(s) * ca * cb);
          t.mult[idx(i1, j1)][idx(i2, j2)] = std::move(out);
        }
  t.d = QMatrix(n, n);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      // d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy
      for (std::size_t i2 = 0; i2 < na; ++i2)
        if (!is_zero(a.d.at(i2, i))) t.d.at(idx(i2, j), idx(i, j)) += a.d.at(i2, i);
      Rat s = (a.module.degrees[i] % 2) ? Rat(-1) : Rat(1);
      for (std::size_t j2 = 0; j2 < nb; ++j2)
        if (!is_zero(b.d.at(j2, j))) t.d.at(idx(i, j2), idx(i, j)) += s * b.d.at(j2, j);
    }
  // ideal: I_a (x) B + A (x) I_b
  std::set<std::size_t> iset;
  for (auto i : a.ideal)
    for (std::size_t j = 0; j < nb; ++j) iset.insert(idx(i, j));
  for (auto j : b.ideal)
    for (std::size_t i = 0; i < na; ++i) iset.insert(idx(i, j));
  t.ideal.assign(iset.begin(), iset.end());
  // overflow pairs propagate factorwise
  t.strict_overflow = a.strict_overflow || b.strict_overflow;
  if (!a.overflow_pairs.empty() || !b.overflow_pairs.empty())
    for (std::size_t i1 = 0; i1 < na; ++i1)
      for (std::size_t j1 = 0; j1 < nb; ++j1)
        for (std::size_t i2 = 0; i2 < na; ++i2)
          for (std::size_t j2 = 0; j2 < nb; ++j2)
            if (a.pair_overflows(i1, i2) || b.pair_overflows(j1, j2))
              t.overflow_pairs.insert({idx(i1, j1), idx(i2, j2)});
  return t;
}

ValidationReport validate_algebra_map(const AlgebraMap& f) {
  const auto& s = *f.source;
  const auto& t = *f.target;
  if (f.matrix.rows() != t.dim() || f.matrix.cols() != s.dim())
    throw InputError("algebra map: matrix shape mismatch");
  ValidationReport rep;
  auto add = [&rep](const std::string& name, bool pass, const std::string& w = "") {
    rep.checks.push_back({name, pass, pass ? "" : w});
  };

  QVec unit_img = f.matrix.apply(s.basis_vec(s.unit));
  add("unital", unit_img == t.basis_vec(t.unit), "f(1) != 1");

  bool mult_ok = true;
  std::string mw;
  for (std::size_t i = 0; i < s.dim() && mult_ok; ++i)
    for (std::size_t j = 0; j < s.dim() && mult_ok; ++j) {
      QVec lhs = f.matrix.apply(sparse_to_dense(s.mul_basis(i, j), s.dim()));
      QVec rhs = t.mul(f.matrix.apply(s.basis_vec(i)), f.matrix.apply(s.basis_vec(j)));
      if (lhs != rhs) {
        mult_ok = false;
        mw = "f(" + s.module.labels[i] + "*" + s.module.labels[j] + ") != f(..)f(..)";
      }
    }
  add("multiplicative", mult_ok, mw);

  QMatrix comm = t.d * f.matrix - f.matrix * s.d;
  add("chain_map", comm.is_zero(), "f does not commute with d");

  bool ideal_ok = true;
  std::string iw;
  Subspace tideal = t.ideal_span();
  for (auto i : s.ideal)
    if (!tideal.contains(f.matrix.apply(s.basis_vec(i)))) {
      ideal_ok = false;
      iw = "f(" + s.module.labels[i] + ") not in target ideal";
      break;
    }
  add("filtration_preserving", ideal_ok, iw);
  return rep;
}

WeakEquivalenceCertificate weak_equivalence_check(const AlgebraMap& f) {
  WeakEquivalenceCertificate cert;
  auto gs = associated_graded(*f.source);
  auto gt = associated_graded(*f.target);
  std::size_t levels = std::max(gs.size(), gt.size());
  cert.is_weak_equivalence = true;
  for (std::size_t k = 0; k < levels; ++k) {
    CochainComplex zero = CochainComplex::zero();
    const GradedPiece* ps = k < gs.size() ? &gs[k] : nullptr;
    const GradedPiece* pt = k < gt.size() ? &gt[k] : nullptr;
    const CochainComplex& cs = ps ? ps->complex : zero;
    const CochainComplex& ct = pt ? pt->complex : zero;
    // induced map on Gr^k: project(f(lift(-)))
    QMatrix m(ct.dim(), cs.dim());
    if (ps && pt)
      for (std::size_t j = 0; j < cs.dim(); ++j)
        m.set_col(j, pt->project.apply(f.matrix.apply(ps->lift[j])));
    ChainMap cm{&cs, &ct, m};
    auto qc = try_quasi_iso_check(cm);
    bool ok = qc.is_chain_map && qc.is_quasi_iso;
    cert.details.push_back({"gr^" + std::to_string(k), ok,
                            ok ? "" : (qc.is_chain_map ? "not a quasi-isomorphism"
                                                       : qc.chain_map_witness)});
    if (!ok) cert.is_weak_equivalence = false;
  }
  return cert;
}

}  // namespace lspace
