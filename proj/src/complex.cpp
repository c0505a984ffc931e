#include "complex.hpp"

#include <algorithm>

#include "errors.hpp"

namespace lspace {

void CochainComplex::check_shape() const {
  module.check();
  if (d.rows() != module.dim() || d.cols() != module.dim())
    throw InputError("complex: differential shape mismatch");
}

bool CochainComplex::d_squares_to_zero() const { return (d * d).is_zero(); }

bool CochainComplex::d_respects_degree() const {
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j)
      if (!is_zero(d.at(i, j)) && module.degrees[i] != module.degrees[j] + 1) return false;
  return true;
}

CochainComplex CochainComplex::zero() { return CochainComplex{GradedModule{}, QMatrix(0, 0)}; }

CochainComplex CochainComplex::shift(int k) const {
  CochainComplex s = *this;
  for (auto& deg : s.module.degrees) deg -= k;
  return s;
}

CochainComplex direct_sum(const std::vector<const CochainComplex*>& parts,
                          const std::vector<std::string>& tags) {
  CochainComplex out;
  std::size_t total = 0;
  for (auto* p : parts) total += p->dim();
  out.d = QMatrix(total, total);
  std::size_t off = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& p = *parts[k];
    for (std::size_t i = 0; i < p.dim(); ++i) {
      out.module.labels.push_back(tags[k] + ":" + p.module.labels[i]);
      out.module.degrees.push_back(p.module.degrees[i]);
    }
    for (std::size_t i = 0; i < p.dim(); ++i)
      for (std::size_t j = 0; j < p.dim(); ++j) out.d.at(off + i, off + j) = p.d.at(i, j);
    off += p.dim();
  }
  return out;
}

std::size_t Cohomology::dim(int k) const {
  auto it = dims.find(k);
  return it == dims.end() ? 0 : it->second;
}

long Cohomology::euler_characteristic() const {
  long chi = 0;
  for (const auto& [k, n] : dims) chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(n);
  return chi;
}

bool Cohomology::is_acyclic() const {
  for (const auto& [k, n] : dims)
    if (n) return false;
  return true;
}

namespace {

// Block of d from degree k to degree k+1, in local coordinates.
QMatrix degree_block(const CochainComplex& c, const std::vector<std::size_t>& src,
                     const std::vector<std::size_t>& tgt) {
  QMatrix m(tgt.size(), src.size());
  for (std::size_t j = 0; j < src.size(); ++j)
    for (std::size_t i = 0; i < tgt.size(); ++i) m.at(i, j) = c.d.at(tgt[i], src[j]);
  return m;
}

}  // namespace

Cohomology cohomology(const CochainComplex& c) {
  c.check_shape();
  if (!c.d_respects_degree()) throw InputError("complex: differential does not raise degree by 1");
  if (!c.d_squares_to_zero()) throw InputError("invalid complex: d^2 != 0");

  Cohomology h;
  if (c.dim() == 0) return h;
  for (int k = c.module.min_degree(); k <= c.module.max_degree(); ++k) {
    auto idx = c.module.degree_indices(k);
    if (idx.empty()) continue;
    auto up = c.module.degree_indices(k + 1);
    auto down = c.module.degree_indices(k - 1);
    QMatrix dk = degree_block(c, idx, up.empty() ? std::vector<std::size_t>{} : up);
    QMatrix dkm = degree_block(c, down, idx);

    QMatrix z = up.empty() ? QMatrix::identity(idx.size()) : dk.kernel_basis();
    QMatrix b = down.empty() ? QMatrix(idx.size(), 0) : dkm.image_basis();

    h.cocycle_dims[k] = z.cols();
    h.coboundary_dims[k] = b.cols();
    std::size_t hd = z.cols() - b.cols();
    if (hd) h.dims[k] = hd;

    // Representatives: extend an echelon basis of B^k by cocycles; the first
    // echelon cocycles outside B^k are the chosen representatives.
    QMatrix probe = b;
    std::vector<QVec> reps;
    for (std::size_t j = 0; j < z.cols() && reps.size() < hd; ++j) {
      QMatrix cand = probe.hcat(z.col(j));
      if (cand.rank() > probe.rank()) {
        probe = cand;
        // lift local coords to ambient
        QVec amb = zero_vec(c.dim());
        for (std::size_t i = 0; i < idx.size(); ++i) amb[idx[i]] = z.at(i, j);
        reps.push_back(std::move(amb));
      }
    }
    if (hd) h.representatives[k] = std::move(reps);
  }
  return h;
}

std::optional<QVec> cohomology_class(const CochainComplex& c, const Cohomology& h,
                                     const QVec& z, int deg) {
  if (!vec_is_zero(c.d.apply(z))) return std::nullopt;
  auto idx = c.module.degree_indices(deg);
  auto down = c.module.degree_indices(deg - 1);
  // Solve z = sum c_i rep_i + d(w): columns = reps (local) | d restricted.
  std::size_t nreps = 0;
  auto it = h.representatives.find(deg);
  if (it != h.representatives.end()) nreps = it->second.size();
  QMatrix sys(idx.size(), nreps + down.size());
  for (std::size_t j = 0; j < nreps; ++j)
    for (std::size_t i = 0; i < idx.size(); ++i) sys.at(i, j) = it->second[j][idx[i]];
  for (std::size_t j = 0; j < down.size(); ++j)
    for (std::size_t i = 0; i < idx.size(); ++i)
      sys.at(i, nreps + j) = c.d.at(idx[i], down[j]);
  QVec rhs = zero_vec(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) rhs[i] = z[idx[i]];
  auto sol = sys.solve(rhs);
  if (!sol) return std::nullopt;  // not a cocycle of this degree
  QVec cls = zero_vec(nreps);
  for (std::size_t j = 0; j < nreps; ++j) cls[j] = (*sol)[j];
  return cls;
}

GradedPiece graded_piece(const GradedModule& ambient, const QMatrix& d, const Subspace& top,
                         const Subspace& bottom, const std::string& tag) {
  const std::size_t n = ambient.dim();
  // choose lifts: rows of `top` independent from span(bottom + chosen)
  std::vector<QVec> chosen;
  std::vector<QVec> all = bottom.basis();
  std::size_t all_dim = Subspace::span(n, all).dim();
  for (const auto& r : top.basis()) {
    auto probe = all;
    probe.push_back(r);
    std::size_t pd = Subspace::span(n, probe).dim();
    if (pd > all_dim) {
      all.push_back(r);
      all_dim = pd;
      chosen.push_back(r);
    }
  }
  GradedPiece piece;
  piece.lift = chosen;
  // Lifts are degree-homogeneous (RREF of homogeneous spanning sets never
  // mixes degrees); the first nonzero entry carries the degree.
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    int deg = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (!is_zero(chosen[i][j])) {
        deg = ambient.degrees[j];
        break;
      }
    piece.complex.module.labels.push_back(tag + "_" + std::to_string(i));
    piece.complex.module.degrees.push_back(deg);
  }
  // projection: solve x = sum c_i lift_i mod bottom
  std::size_t m = chosen.size(), bdim = bottom.dim();
  QMatrix sys(n, m + bdim);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) sys.at(i, j) = chosen[j][i];
  for (std::size_t j = 0; j < bdim; ++j)
    for (std::size_t i = 0; i < n; ++i) sys.at(i, m + j) = bottom.basis()[j][i];
  piece.project = QMatrix(m, n);
  for (std::size_t col = 0; col < n; ++col) {
    QVec e = zero_vec(n);
    e[col] = 1;
    auto sol = sys.solve(e);
    if (sol)
      for (std::size_t i = 0; i < m; ++i) piece.project.at(i, col) = (*sol)[i];
    // columns outside `top` are irrelevant; leave zero
  }
  // induced differential
  piece.complex.d = QMatrix(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    QVec img = d.apply(chosen[j]);
    piece.complex.d.set_col(j, piece.project.apply(img));
  }
  return piece;
}

QuasiIsoCertificate try_quasi_iso_check(const ChainMap& f) {
  QuasiIsoCertificate cert;
  const auto& s = *f.source;
  const auto& t = *f.target;
  if (f.matrix.rows() != t.dim() || f.matrix.cols() != s.dim())
    throw InputError("chain map: matrix shape mismatch");
  // degree 0 and commutation with d
  for (std::size_t j = 0; j < s.dim(); ++j)
    for (std::size_t i = 0; i < t.dim(); ++i)
      if (!is_zero(f.matrix.at(i, j)) && t.module.degrees[i] != s.module.degrees[j]) {
        cert.chain_map_witness = "entry (" + t.module.labels[i] + "," + s.module.labels[j] +
                                 ") violates degree 0";
        return cert;
      }
  QMatrix comm = t.d * f.matrix - f.matrix * s.d;
  for (std::size_t j = 0; j < s.dim(); ++j)
    for (std::size_t i = 0; i < t.dim(); ++i)
      if (!is_zero(comm.at(i, j))) {
        cert.chain_map_witness = "d f != f d at source degree " +
                                 std::to_string(s.module.degrees[j]) + " (basis " +
                                 s.module.labels[j] + ")";
        return cert;
      }
  cert.is_chain_map = true;

  Cohomology hs = cohomology(s), ht = cohomology(t);
  int lo = std::min(s.dim() ? s.module.min_degree() : 0, t.dim() ? t.module.min_degree() : 0);
  int hi = std::max(s.dim() ? s.module.max_degree() : 0, t.dim() ? t.module.max_degree() : 0);
  cert.is_quasi_iso = true;
  for (int k = lo; k <= hi; ++k) {
    std::size_t ds = hs.dim(k), dt = ht.dim(k);
    if (ds || dt) cert.h_dims[k] = {ds, dt};
    if (ds != dt) {
      cert.is_quasi_iso = false;
      continue;
    }
    if (ds == 0) continue;
    // induced map in representative coordinates
    QMatrix ind(dt, ds);
    const auto& reps = hs.representatives.at(k);
    for (std::size_t j = 0; j < ds; ++j) {
      QVec img = f.matrix.apply(reps[j]);
      auto cls = cohomology_class(t, ht, img, k);
      if (!cls) {
        cert.is_quasi_iso = false;
        break;
      }
      ind.set_col(j, *cls);
    }
    if (cert.is_quasi_iso && ind.rank() != ds) cert.is_quasi_iso = false;
  }
  return cert;
}

QuasiIsoCertificate quasi_iso_check(const ChainMap& f) {
  auto cert = try_quasi_iso_check(f);
  if (!cert.is_chain_map) throw InputError("not a chain map: " + cert.chain_map_witness);
  return cert;
}

}  // namespace lspace
