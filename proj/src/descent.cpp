#include "descent.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "errors.hpp"

namespace lspace {

namespace {

using Tuple = std::vector<std::size_t>;

Tuple support(const Tuple& t) {
  Tuple s = t;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

std::string tuple_label(const Tuple& t) {
  std::string s;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k) s += ".";
    s += std::to_string(t[k]);
  }
  return s;
}

// degree-0 chain map check: f: a -> b given as matrix m (dim b x dim a)
bool chain_map_ok(const CochainComplex& a, const CochainComplex& b, const QMatrix& m,
                  std::string* why) {
  if (m.rows() != b.dim() || m.cols() != a.dim()) {
    if (why) *why = "shape mismatch";
    return false;
  }
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!is_zero(m.at(r, c)) && b.module.degrees[r] != a.module.degrees[c]) {
        if (why) *why = "entry does not preserve degree";
        return false;
      }
  if (!(b.d * m == m * a.d)) {
    if (why) *why = "does not commute with the differentials";
    return false;
  }
  return true;
}

std::vector<Tuple> enumerate_tuples(std::size_t m, unsigned len) {
  std::vector<Tuple> out;
  if (m == 0) return out;
  Tuple t(len, 0);
  while (true) {
    out.push_back(t);
    std::size_t k = len;
    while (k > 0 && t[k - 1] == m - 1) t[--k] = 0;
    if (k == 0) break;
    ++t[k - 1];
  }
  return out;
}

// per-degree kernel basis of s (columns), homogeneous in the given degrees
QMatrix graded_kernel(const QMatrix& s, const std::vector<int>& degrees) {
  std::vector<QVec> cols;
  std::set<int> degs(degrees.begin(), degrees.end());
  for (int dv : degs) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < degrees.size(); ++i)
      if (degrees[i] == dv) idx.push_back(i);
    QMatrix sub(s.rows(), idx.size());
    for (std::size_t r = 0; r < s.rows(); ++r)
      for (std::size_t j = 0; j < idx.size(); ++j) sub.at(r, j) = s.at(r, idx[j]);
    QMatrix k = sub.kernel_basis();
    for (std::size_t j = 0; j < k.cols(); ++j) {
      QVec v = zero_vec(degrees.size());
      for (std::size_t r = 0; r < idx.size(); ++r) v[idx[r]] = k.at(r, j);
      cols.push_back(std::move(v));
    }
  }
  QMatrix out(degrees.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) out.set_col(j, cols[j]);
  return out;
}

std::optional<QMatrix> solve_in_basis(const QMatrix& basis, const QMatrix& vecs) {
  QMatrix out(basis.cols(), vecs.cols());
  for (std::size_t j = 0; j < vecs.cols(); ++j) {
    auto x = basis.solve(vecs.col_vec(j));
    if (!x) return std::nullopt;
    out.set_col(j, *x);
  }
  return out;
}

std::vector<std::size_t> truncation_kept(const CochainComplex& c) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < c.dim(); ++i)
    if (c.module.degrees[i] <= 1) idx.push_back(i);
  return idx;
}

QMatrix submatrix(const QMatrix& m, const std::vector<std::size_t>& rows,
                  const std::vector<std::size_t>& cols) {
  QMatrix out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out.at(r, c) = m.at(rows[r], cols[c]);
  return out;
}

}  // namespace

unsigned FiniteCover::dimension() const {
  std::size_t top = 1;
  for (const auto& f : faces) top = std::max(top, f.vertices.size());
  return static_cast<unsigned>(top - 1);
}

ValidationReport validate_cover(const FiniteCover& c) {
  ValidationReport rep;
  auto add = [&](const std::string& n, bool pass, const std::string& w) {
    rep.checks.push_back({n, pass, pass ? "" : w});
  };

  bool shape = true;
  std::string w;
  for (std::size_t fi = 0; fi < c.faces.size() && shape; ++fi) {
    const Face& f = c.faces[fi];
    if (f.vertices.empty()) {
      shape = false;
      w = f.label + ": empty vertex set";
      break;
    }
    for (std::size_t k = 0; k < f.vertices.size(); ++k) {
      if (f.vertices[k] >= c.opens.size() ||
          (k > 0 && f.vertices[k - 1] >= f.vertices[k])) {
        shape = false;
        w = f.label + ": vertices not strictly increasing in range";
        break;
      }
    }
    if (!shape) break;
    try {
      f.sections.check_shape();
    } catch (const std::exception& e) {
      shape = false;
      w = f.label + ": " + e.what();
      break;
    }
    if (!f.sections.d_squares_to_zero() || !f.sections.d_respects_degree()) {
      shape = false;
      w = f.label + ": section differential invalid";
    }
  }
  add("shape", shape, w);
  if (!shape) return rep;

  bool closure = true;
  w.clear();
  for (std::size_t i = 0; i < c.opens.size(); ++i) {
    std::size_t count = 0;
    for (const auto& f : c.faces)
      if (f.vertices.size() == 1 && f.vertices[0] == i) ++count;
    if (count != 1) {
      closure = false;
      w = "open " + c.opens[i] + ": expected exactly one singleton face";
      break;
    }
  }
  for (std::size_t fi = 0; fi < c.faces.size() && closure; ++fi) {
    const Face& f = c.faces[fi];
    std::size_t expect = f.vertices.size() >= 2 ? f.vertices.size() : 0;
    if (f.parent.size() != expect || f.restriction.size() != expect) {
      closure = false;
      w = f.label + ": parent/restriction count mismatch";
      break;
    }
    for (std::size_t k = 0; k < expect; ++k) {
      if (f.parent[k] >= c.faces.size()) {
        closure = false;
        w = f.label + ": parent index out of range";
        break;
      }
      Tuple del = f.vertices;
      del.erase(del.begin() + static_cast<long>(k));
      if (c.faces[f.parent[k]].vertices != del) {
        closure = false;
        w = f.label + ": parent vertex set mismatch";
        break;
      }
    }
  }
  add("closure", closure, w);
  if (!closure) return rep;

  bool restr = true;
  w.clear();
  for (const Face& f : c.faces) {
    for (std::size_t k = 0; k < f.restriction.size(); ++k) {
      std::string why;
      if (!chain_map_ok(c.faces[f.parent[k]].sections, f.sections, f.restriction[k], &why)) {
        restr = false;
        w = f.label + " restriction " + std::to_string(k) + ": " + why;
        break;
      }
    }
    if (!restr) break;
  }
  add("restrictions", restr, w);
  if (!restr) return rep;

  bool fun = true;
  w.clear();
  for (const Face& f : c.faces) {
    if (f.vertices.size() < 3) continue;
    for (std::size_t k = 0; k + 1 < f.vertices.size() && fun; ++k)
      for (std::size_t l = k + 1; l < f.vertices.size(); ++l) {
        std::size_t a = f.parent[l];
        std::size_t b = f.parent[k];
        if (c.faces[a].parent[k] != c.faces[b].parent[l - 1] ||
            !(f.restriction[l] * c.faces[a].restriction[k] ==
              f.restriction[k] * c.faces[b].restriction[l - 1])) {
          fun = false;
          w = f.label + ": deletions " + std::to_string(k) + "," + std::to_string(l) +
              " do not commute";
          break;
        }
      }
    if (!fun) break;
  }
  add("functoriality", fun, w);
  return rep;
}

std::pair<std::size_t, QMatrix> cover_restriction(const FiniteCover& c, std::size_t face,
                                                  const std::vector<std::size_t>& sub) {
  if (face >= c.faces.size()) throw InputError("cover: face index out of range");
  if (!std::includes(c.faces[face].vertices.begin(), c.faces[face].vertices.end(),
                     sub.begin(), sub.end()))
    throw InputError("cover: restriction target is not a vertex subset");
  std::size_t cur = face;
  QMatrix m = QMatrix::identity(c.faces[face].sections.dim());
  while (c.faces[cur].vertices != sub) {
    const Face& f = c.faces[cur];
    std::size_t k = f.vertices.size();
    while (k > 0) {
      --k;
      if (!std::binary_search(sub.begin(), sub.end(), f.vertices[k])) break;
    }
    m = m * f.restriction[k];
    cur = f.parent[k];
  }
  return {cur, m};
}

CechDiagram cech_diagram(const FiniteCover& c, unsigned p_max) {
  auto rep = validate_cover(c);
  if (!rep.all_pass()) {
    for (const auto& ch : rep.checks)
      if (!ch.pass) throw InputError("cover: " + ch.name + ": " + ch.witness);
  }
  std::map<Tuple, std::vector<std::size_t>> by_support;
  for (std::size_t fi = 0; fi < c.faces.size(); ++fi)
    by_support[c.faces[fi].vertices].push_back(fi);

  CechDiagram d;
  std::vector<std::map<std::pair<Tuple, std::size_t>, std::size_t>> lookup(p_max + 1);
  for (unsigned p = 0; p <= p_max; ++p) {
    std::vector<CechBlock> blocks;
    CochainComplex lvl;
    std::size_t off = 0;
    for (const Tuple& t : enumerate_tuples(c.opens.size(), p + 1)) {
      auto it = by_support.find(support(t));
      if (it == by_support.end()) continue;
      for (std::size_t fi : it->second) {
        const Face& f = c.faces[fi];
        lookup[p][{t, fi}] = blocks.size();
        blocks.push_back({t, fi, off});
        for (std::size_t i = 0; i < f.sections.dim(); ++i) {
          lvl.module.labels.push_back("[" + std::to_string(p) + "]" + tuple_label(t) + ":" +
                                      f.label + ":" + f.sections.module.labels[i]);
          lvl.module.degrees.push_back(f.sections.module.degrees[i]);
        }
        off += f.sections.dim();
      }
    }
    lvl.d = QMatrix(off, off);
    for (const auto& b : blocks) {
      const QMatrix& fd = c.faces[b.face].sections.d;
      for (std::size_t r = 0; r < fd.rows(); ++r)
        for (std::size_t cc = 0; cc < fd.cols(); ++cc)
          lvl.d.at(b.offset + r, b.offset + cc) = fd.at(r, cc);
    }
    d.level.push_back(std::move(lvl));
    d.blocks.push_back(std::move(blocks));
  }

  d.coface.resize(p_max + 1);
  for (unsigned p = 1; p <= p_max; ++p)
    for (unsigned i = 0; i <= p; ++i) {
      QMatrix m(d.level[p].dim(), d.level[p - 1].dim());
      for (const auto& b : d.blocks[p]) {
        Tuple s = b.tuple;
        s.erase(s.begin() + i);
        auto [gi, r] = cover_restriction(c, b.face, support(s));
        auto it = lookup[p - 1].find({s, gi});
        if (it == lookup[p - 1].end())
          throw InputError("cech: missing source block for a coface");
        std::size_t soff = d.blocks[p - 1][it->second].offset;
        for (std::size_t rr = 0; rr < r.rows(); ++rr)
          for (std::size_t cc = 0; cc < r.cols(); ++cc)
            m.at(b.offset + rr, soff + cc) = r.at(rr, cc);
      }
      d.coface[p].push_back(std::move(m));
    }

  d.codegeneracy.resize(p_max + 1);
  for (unsigned p = 0; p + 1 <= p_max; ++p)
    for (unsigned j = 0; j <= p; ++j) {
      QMatrix m(d.level[p].dim(), d.level[p + 1].dim());
      for (const auto& b : d.blocks[p]) {
        Tuple s = b.tuple;
        s.insert(s.begin() + j, b.tuple[j]);
        auto it = lookup[p + 1].find({s, b.face});
        if (it == lookup[p + 1].end())
          throw InputError("cech: missing source block for a codegeneracy");
        std::size_t soff = d.blocks[p + 1][it->second].offset;
        std::size_t n = c.faces[b.face].sections.dim();
        for (std::size_t rr = 0; rr < n; ++rr) m.at(b.offset + rr, soff + rr) = Rat(1);
      }
      d.codegeneracy[p].push_back(std::move(m));
    }
  return d;
}

CechDiagram cech_diagram(const FiniteCover& c) { return cech_diagram(c, c.dimension() + 1); }

bool CechDiagram::check_identities(std::string* witness) const {
  auto fail = [&](const std::string& w) {
    if (witness) *witness = w;
    return false;
  };
  const std::size_t P = level.size() - 1;
  for (std::size_t p = 2; p <= P; ++p)
    for (std::size_t i = 0; i < coface[p].size(); ++i)
      for (std::size_t j = i + 1; j < coface[p].size(); ++j)
        if (!(coface[p][j] * coface[p - 1][i] == coface[p][i] * coface[p - 1][j - 1]))
          return fail("coface identity at level " + std::to_string(p));
  for (std::size_t p = 0; p + 2 <= P; ++p)
    for (std::size_t i = 0; i < codegeneracy[p].size(); ++i)
      for (std::size_t j = i; j < codegeneracy[p].size(); ++j)
        if (!(codegeneracy[p][j] * codegeneracy[p + 1][i] ==
              codegeneracy[p][i] * codegeneracy[p + 1][j + 1]))
          return fail("codegeneracy identity at level " + std::to_string(p));
  for (std::size_t p = 0; p + 1 <= P; ++p)
    for (std::size_t j = 0; j < codegeneracy[p].size(); ++j)
      for (std::size_t i = 0; i <= p + 1; ++i) {
        QMatrix lhs = codegeneracy[p][j] * coface[p + 1][i];
        bool ok;
        if (i == j || i == j + 1)
          ok = lhs == QMatrix::identity(level[p].dim());
        else if (i < j)
          ok = lhs == coface[p][i] * codegeneracy[p - 1][j - 1];
        else
          ok = lhs == coface[p][i - 1] * codegeneracy[p - 1][j];
        if (!ok)
          return fail("mixed identity (" + std::to_string(i) + "," + std::to_string(j) +
                      ") at level " + std::to_string(p));
      }
  return true;
}

Conormalization conormalize(const CechDiagram& d) {
  Conormalization n;
  const std::size_t P = d.level.size() - 1;
  for (std::size_t p = 0; p <= P; ++p) {
    QMatrix basis;
    if (p == 0) {
      basis = QMatrix::identity(d.level[0].dim());
    } else {
      QMatrix stacked(d.level[p - 1].dim() * p, d.level[p].dim());
      for (std::size_t j = 0; j < p; ++j) {
        const QMatrix& s = d.codegeneracy[p - 1][j];
        for (std::size_t r = 0; r < s.rows(); ++r)
          for (std::size_t c = 0; c < s.cols(); ++c)
            stacked.at(j * s.rows() + r, c) = s.at(r, c);
      }
      basis = graded_kernel(stacked, d.level[p].module.degrees);
    }
    CochainComplex lvl;
    for (std::size_t j = 0; j < basis.cols(); ++j) {
      int deg = 0;
      for (std::size_t r = 0; r < basis.rows(); ++r)
        if (!is_zero(basis.at(r, j))) {
          deg = d.level[p].module.degrees[r];
          break;
        }
      lvl.module.labels.push_back("N" + std::to_string(p) + ":" + std::to_string(j));
      lvl.module.degrees.push_back(deg);
    }
    auto dn = solve_in_basis(basis, d.level[p].d * basis);
    if (!dn) throw InputError("conormalize: differential leaves the kernel complex");
    lvl.d = std::move(*dn);
    n.levels.push_back(std::move(lvl));
    n.basis.push_back(std::move(basis));
  }
  for (std::size_t p = 0; p < P; ++p) {
    QMatrix delta(d.level[p + 1].dim(), d.level[p].dim());
    for (std::size_t i = 0; i < d.coface[p + 1].size(); ++i) {
      QMatrix t = d.coface[p + 1][i];
      if (i % 2 == 1) t = t.scaled(Rat(-1));
      delta = delta + t;
    }
    auto cd = solve_in_basis(n.basis[p + 1], delta * n.basis[p]);
    if (!cd) throw InputError("conormalize: Cech differential leaves the kernel complex");
    n.cech_d.push_back(std::move(*cd));
  }
  return n;
}

DoubleComplex conormalized_double(const Conormalization& n) {
  return {n.levels, n.cech_d};
}

DoubleComplex alternating_double(const CechDiagram& d) {
  std::vector<std::vector<std::size_t>> kept(d.level.size());
  for (std::size_t p = 0; p < d.level.size(); ++p)
    for (std::size_t bi = 0; bi < d.blocks[p].size(); ++bi) {
      const CechBlock& b = d.blocks[p][bi];
      bool inc = true;
      for (std::size_t k = 0; k + 1 < b.tuple.size(); ++k)
        if (b.tuple[k] >= b.tuple[k + 1]) inc = false;
      if (!inc) continue;
      std::size_t end =
          bi + 1 < d.blocks[p].size() ? d.blocks[p][bi + 1].offset : d.level[p].dim();
      for (std::size_t i = b.offset; i < end; ++i) kept[p].push_back(i);
    }
  while (kept.size() > 1 && kept.back().empty()) kept.pop_back();

  DoubleComplex dc;
  for (std::size_t p = 0; p < kept.size(); ++p) {
    CochainComplex col;
    for (auto i : kept[p]) {
      col.module.labels.push_back(d.level[p].module.labels[i]);
      col.module.degrees.push_back(d.level[p].module.degrees[i]);
    }
    col.d = submatrix(d.level[p].d, kept[p], kept[p]);
    dc.columns.push_back(std::move(col));
  }
  for (std::size_t p = 0; p + 1 < kept.size(); ++p) {
    QMatrix delta(d.level[p + 1].dim(), d.level[p].dim());
    Rat sign(1);
    for (std::size_t k = 0; k <= p + 1; ++k) {
      const QMatrix& m = d.coface[p + 1][k];
      for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
          if (!is_zero(m.at(r, c))) delta.at(r, c) += sign * m.at(r, c);
      sign = -sign;
    }
    dc.horizontal.push_back(submatrix(delta, kept[p + 1], kept[p]));
  }
  return dc;
}

TotalComplex total_complex(const DoubleComplex& dc) {
  for (std::size_t p = 0; p < dc.horizontal.size(); ++p) {
    std::string why;
    if (!chain_map_ok(dc.columns[p], dc.columns[p + 1], dc.horizontal[p], &why))
      throw InputError("total: horizontal map " + std::to_string(p) + ": " + why);
    if (p + 1 < dc.horizontal.size() && !(dc.horizontal[p + 1] * dc.horizontal[p]).is_zero())
      throw InputError("total: horizontal composite is nonzero at " + std::to_string(p));
  }
  TotalComplex t;
  std::size_t dim = 0;
  for (const auto& col : dc.columns) {
    t.offset.push_back(dim);
    dim += col.dim();
  }
  t.complex.d = QMatrix(dim, dim);
  for (std::size_t p = 0; p < dc.columns.size(); ++p) {
    const auto& col = dc.columns[p];
    for (std::size_t i = 0; i < col.dim(); ++i) {
      t.complex.module.labels.push_back("T" + std::to_string(p) + ":" + col.module.labels[i]);
      t.complex.module.degrees.push_back(static_cast<int>(p) + col.module.degrees[i]);
    }
    int sign = (p % 2 == 0) ? 1 : -1;
    for (std::size_t r = 0; r < col.dim(); ++r)
      for (std::size_t c = 0; c < col.dim(); ++c)
        t.complex.d.at(t.offset[p] + r, t.offset[p] + c) = Rat(sign) * col.d.at(r, c);
    if (p < dc.horizontal.size()) {
      const QMatrix& h = dc.horizontal[p];
      for (std::size_t r = 0; r < h.rows(); ++r)
        for (std::size_t c = 0; c < h.cols(); ++c)
          t.complex.d.at(t.offset[p + 1] + r, t.offset[p] + c) = h.at(r, c);
    }
  }
  if (!t.complex.d_squares_to_zero()) throw InputError("total: d^2 != 0");
  return t;
}

SimplicialAbelian tot_cosimplicial(const Conormalization& n, unsigned n_max) {
  TotalComplex t = total_complex(conormalized_double(n));
  std::size_t k_max = 0;
  for (std::size_t i = 0; i < t.complex.dim(); ++i) {
    int deg = t.complex.module.degrees[i];
    if (deg > 0) throw InputError("tot: totalization is not connective");
    k_max = std::max(k_max, static_cast<std::size_t>(-deg));
  }
  std::vector<std::vector<std::size_t>> idx(k_max + 1);
  for (std::size_t i = 0; i < t.complex.dim(); ++i)
    idx[static_cast<std::size_t>(-t.complex.module.degrees[i])].push_back(i);
  ChainData c;
  for (std::size_t k = 0; k <= k_max; ++k) c.dims.push_back(idx[k].size());
  c.boundary.push_back(QMatrix());
  for (std::size_t k = 1; k <= k_max; ++k)
    c.boundary.push_back(submatrix(t.complex.d, idx[k - 1], idx[k]));
  c.check();
  return dold_kan(c, n_max);
}

DescentCertificate descent_check(const FiniteCover& c, const CochainComplex& global,
                                 const QMatrix& comparison) {
  CechDiagram d = cech_diagram(c);
  std::string w;
  if (!d.check_identities(&w)) throw InputError("cech: " + w);
  if (comparison.rows() != d.level[0].dim() || comparison.cols() != global.dim())
    throw InputError("descent: comparison shape mismatch");

  DescentCertificate cert;
  cert.equalizes = d.coface[1][0] * comparison == d.coface[1][1] * comparison;
  if (!cert.equalizes) cert.witness = "comparison does not equalize the two cofaces";

  TotalComplex t = total_complex(alternating_double(d));
  cert.total = std::move(t.complex);
  cert.total_h = cohomology(cert.total).dims;

  QMatrix induced(cert.total.dim(), global.dim());
  for (std::size_t r = 0; r < comparison.rows(); ++r)
    for (std::size_t cc = 0; cc < comparison.cols(); ++cc)
      induced.at(r, cc) = comparison.at(r, cc);
  ChainMap f{&global, &cert.total, std::move(induced)};
  cert.comparison = try_quasi_iso_check(f);
  if (!cert.comparison.is_chain_map && cert.witness.empty())
    cert.witness = cert.comparison.chain_map_witness;
  return cert;
}

CochainComplex mc_fiber_truncation(const CochainComplex& h) {
  auto idx = truncation_kept(h);
  CochainComplex out;
  for (auto i : idx) {
    out.module.labels.push_back(h.module.labels[i]);
    out.module.degrees.push_back(h.module.degrees[i] - 1);
  }
  out.d = submatrix(h.d, idx, idx);
  return out;
}

DescentCertificate mc_descent_fiber_check(const FiniteCover& c, const CochainComplex& global,
                                          const QMatrix& comparison) {
  FiniteCover tc;
  tc.opens = c.opens;
  std::vector<std::vector<std::size_t>> kept(c.faces.size());
  for (std::size_t fi = 0; fi < c.faces.size(); ++fi)
    kept[fi] = truncation_kept(c.faces[fi].sections);
  for (std::size_t fi = 0; fi < c.faces.size(); ++fi) {
    Face f;
    f.vertices = c.faces[fi].vertices;
    f.label = c.faces[fi].label;
    f.sections = mc_fiber_truncation(c.faces[fi].sections);
    f.parent = c.faces[fi].parent;
    for (std::size_t k = 0; k < c.faces[fi].restriction.size(); ++k)
      f.restriction.push_back(
          submatrix(c.faces[fi].restriction[k], kept[fi], kept[c.faces[fi].parent[k]]));
    tc.faces.push_back(std::move(f));
  }
  CochainComplex tglobal = mc_fiber_truncation(global);
  // Cech level 0 rows: singleton face blocks in open order
  std::vector<std::size_t> rows;
  std::size_t off = 0;
  for (std::size_t i = 0; i < c.opens.size(); ++i) {
    for (std::size_t fi = 0; fi < c.faces.size(); ++fi) {
      if (c.faces[fi].vertices.size() != 1 || c.faces[fi].vertices[0] != i) continue;
      for (auto r : kept[fi]) rows.push_back(off + r);
      off += c.faces[fi].sections.dim();
    }
  }
  QMatrix tcmp = submatrix(comparison, rows, truncation_kept(global));
  return descent_check(tc, tglobal, tcmp);
}

}  // namespace lspace
