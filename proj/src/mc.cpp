#include "mc.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>

#include "errors.hpp"

namespace lspace {

namespace {

bool odd(long e) { return (e % 2) != 0; }

bool all_zero(const QVec& v) {
  for (const auto& x : v)
    if (!is_zero(x)) return false;
  return true;
}

QVec vadd(const QVec& a, const QVec& b) {
  QVec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

QVec vneg(const QVec& a) {
  QVec r = a;
  for (auto& x : r) x = -x;
  return r;
}

void require_degree_one(const LInfty& host, const QVec& alpha) {
  if (alpha.size() != host.udim()) throw InputError("mc: element dimension mismatch");
  for (std::size_t u = 0; u < alpha.size(); ++u)
    if (!is_zero(alpha[u]) && host.udeg(u) != 1)
      throw InputError("mc: element is not homogeneous of degree 1");
}

// d_alpha(x) = sum_m (1/m!) l_{m+1}(x, alpha^m) for x homogeneous of
// unshifted degree q; decalage sign (-1)^{m q + m(m-1)/2} on the stored D.
QVec twisted_d(const LInfty& h, const QVec& alpha, const QVec& x, int q) {
  QVec out = zero_vec(h.udim());
  for (std::size_t m = 0; m + 1 < h.taylor.size(); ++m) {
    if (m + 1 != 1 && h.taylor[m + 1].empty()) continue;
    std::vector<QVec> args;
    args.push_back(x);
    for (std::size_t i = 0; i < m; ++i) args.push_back(alpha);
    QVec t = h.eval_taylor_vecs(args);
    long e = static_cast<long>(m) * q + static_cast<long>(m) * (m - 1) / 2;
    Rat c = Rat(odd(e) ? -1 : 1) / factorial(static_cast<unsigned>(m));
    for (std::size_t u = 0; u < out.size(); ++u) out[u] += c * t[u];
  }
  return out;
}

bool host_is_linear(const LInfty& h) {  // no components of arity >= 2
  for (std::size_t n = 2; n < h.taylor.size(); ++n)
    if (!h.taylor[n].empty()) return false;
  return true;
}

}  // namespace

QVec mc_value(const LInfty& host, const QVec& alpha) {
  require_degree_one(host, alpha);
  QVec out = zero_vec(host.udim());
  for (std::size_t n = 0; n < host.taylor.size(); ++n) {
    if (n != 1 && host.taylor[n].empty()) continue;
    std::vector<QVec> args(n, alpha);
    QVec term = host.eval_taylor_vecs(args);
    long e = static_cast<long>(n) * (static_cast<long>(n) - 1) / 2;
    Rat c = Rat(odd(e) ? -1 : 1) / factorial(static_cast<unsigned>(n));
    for (std::size_t u = 0; u < out.size(); ++u) out[u] += c * term[u];
  }
  return out;
}

MCResidual mc_verify(const LInfty& host, const QVec& alpha) {
  if (host.base.dim() == 1) {
    auto lcs = lower_central_series(host);
    if (!lcs.nilpotent) throw InputError("mc: host is not nilpotent");
  }
  MCResidual r;
  r.residual = mc_value(host, alpha);
  r.pass = all_zero(r.residual);
  return r;
}

ValidationReport validate_square_zero(const SquareZeroExtension& ext) {
  ValidationReport rep;
  auto add = [&](const std::string& name, bool ok, const std::string& wit) {
    rep.checks.push_back({name, ok, ok ? "" : wit});
  };
  if (!ext.big) {
    add("algebra present", false, "null base algebra");
    return rep;
  }
  const BaseAlgebra& b = *ext.big;
  std::set<std::size_t> k(ext.kernel.begin(), ext.kernel.end());
  bool ok = k.size() == ext.kernel.size();
  for (auto i : ext.kernel)
    if (i >= b.dim()) ok = false;
  add("kernel indices valid", ok, "repeated or out-of-range kernel index");
  if (!ok) return rep;

  std::set<std::size_t> ideal(b.ideal.begin(), b.ideal.end());
  ok = true;
  std::string wit;
  for (auto i : ext.kernel)
    if (!ideal.count(i)) {
      ok = false;
      wit = "kernel element " + b.module.labels[i] + " outside the ideal";
      break;
    }
  add("kernel inside the ideal", ok, wit);

  auto supported_in_kernel = [&](const SparseVec& v) {
    for (const auto& [u, c] : v)
      if (!is_zero(c) && !k.count(u)) return false;
    return true;
  };
  ok = true;
  wit.clear();
  try {
    for (auto i : ext.kernel)
      for (std::size_t j = 0; j < b.dim() && ok; ++j)
        if (!supported_in_kernel(b.mul_basis(i, j)) || !supported_in_kernel(b.mul_basis(j, i))) {
          ok = false;
          wit = "product of " + b.module.labels[i] + " and " + b.module.labels[j] +
                " leaves the kernel";
        }
  } catch (const CapOverflowError& e) {
    ok = false;
    wit = e.what();
  }
  add("kernel is an ideal", ok, wit);

  ok = true;
  wit.clear();
  try {
    for (auto i : ext.kernel)
      for (auto j : ext.kernel)
        if (!b.mul_basis(i, j).empty()) {
          ok = false;
          wit = "nonzero product " + b.module.labels[i] + " * " + b.module.labels[j];
        }
  } catch (const CapOverflowError& e) {
    ok = false;
    wit = e.what();
  }
  add("kernel squares to zero", ok, wit);

  ok = true;
  wit.clear();
  for (auto i : ext.kernel)
    for (std::size_t r = 0; r < b.dim(); ++r)
      if (!is_zero(b.d.at(r, i)) && !k.count(r)) {
        ok = false;
        wit = "d(" + b.module.labels[i] + ") has a component outside the kernel";
      }
  add("kernel is a dg ideal", ok, wit);
  return rep;
}

ObstructionResult obstruction_lift(const LInfty& g, const SquareZeroExtension& ext,
                                   const QVec& alpha) {
  if (ext.big != &g.base)
    throw InputError("obstruction_lift: extension is not over the base of g");
  auto rep = validate_square_zero(ext);
  if (!rep.all_pass()) {
    for (const auto& c : rep.checks)
      if (!c.pass) throw InputError("obstruction_lift: " + c.name + ": " + c.witness);
  }
  LInfty h = restrict_to_ideal(g);
  std::set<std::size_t> kset(ext.kernel.begin(), ext.kernel.end());
  std::vector<bool> in_k(h.rank(), false);
  for (std::size_t i = 0; i < g.base.ideal.size(); ++i)
    if (kset.count(g.base.ideal[i]))
      for (std::size_t m = 0; m < g.rank(); ++m) in_k[i * g.rank() + m] = true;
  std::vector<std::size_t> S;
  for (std::size_t j = 0; j < h.rank(); ++j)
    if (in_k[j]) S.push_back(j);

  require_degree_one(h, alpha);
  for (auto j : S)
    if (!is_zero(alpha[j]))
      throw InputError("obstruction_lift: alpha has components in the kernel");
  QVec r = mc_value(h, alpha);
  for (std::size_t u = 0; u < r.size(); ++u)
    if (!is_zero(r[u]) && !in_k[u])
      throw InputError("obstruction_lift: alpha is not Maurer-Cartan over the quotient");

  // twisted complex on g (x) K
  std::vector<std::size_t> pos(h.rank(), SIZE_MAX);
  CochainComplex K;
  for (std::size_t i = 0; i < S.size(); ++i) {
    pos[S[i]] = i;
    K.module.labels.push_back(h.gens.labels[S[i]]);
    K.module.degrees.push_back(h.gens.degrees[S[i]]);
  }
  K.d = QMatrix(S.size(), S.size());
  for (std::size_t c = 0; c < S.size(); ++c) {
    QVec x = zero_vec(h.udim());
    x[S[c]] = Rat(1);
    QVec dv = twisted_d(h, alpha, x, h.gens.degrees[S[c]]);
    for (std::size_t u = 0; u < dv.size(); ++u)
      if (!is_zero(dv[u])) {
        if (!in_k[u])
          throw InputError("obstruction_lift: twisted differential leaves g (x) K");
        K.d.at(pos[u], c) = dv[u];
      }
  }
  if (!K.d_squares_to_zero())
    throw InputError("obstruction_lift: twisted differential does not square to zero");
  auto H = cohomology(K);
  QVec rS = zero_vec(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) rS[i] = r[S[i]];
  auto cls = cohomology_class(K, H, rS, 2);
  if (!cls) throw InputError("obstruction_lift: obstruction cocycle is not closed");

  ObstructionResult out;
  out.cocycle = r;
  out.obstruction_class = *cls;
  if (!all_zero(*cls)) return out;

  auto sol = K.d.solve(vneg(rS));
  if (!sol) throw InputError("obstruction_lift: exact cocycle has no preimage");
  QVec kappa = zero_vec(h.udim());
  for (std::size_t i = 0; i < S.size(); ++i)
    if (K.module.degrees[i] == 1) kappa[S[i]] = (*sol)[i];
  out.lift = vadd(alpha, kappa);
  auto v = mc_verify(h, out.lift);
  if (!v.pass) throw InputError("obstruction_lift: corrected lift fails Maurer-Cartan");
  out.lifted = true;

  // torsor directions: kernel of the twisted differential in degree 1
  std::vector<std::size_t> deg1;
  for (std::size_t i = 0; i < S.size(); ++i)
    if (K.module.degrees[i] == 1) deg1.push_back(i);
  QMatrix sub(S.size(), deg1.size());
  for (std::size_t c = 0; c < deg1.size(); ++c)
    for (std::size_t rr = 0; rr < S.size(); ++rr) sub.at(rr, c) = K.d.at(rr, deg1[c]);
  QMatrix ker = sub.kernel_basis();
  out.fiber_dim = ker.cols();
  for (std::size_t c = 0; c < ker.cols(); ++c) {
    QVec dir = zero_vec(h.udim());
    for (std::size_t i = 0; i < deg1.size(); ++i) dir[S[deg1[i]]] = ker.at(i, c);
    out.fiber.push_back(std::move(dir));
  }
  return out;
}

std::vector<unsigned> ideal_weights(const LInfty& g) {
  auto filt = ideal_powers(g.base);
  for (const auto& p : filt.powers) {
    std::size_t cnt = 0;
    for (auto b : g.base.ideal)
      if (p.contains(g.base.basis_vec(b))) ++cnt;
    if (cnt != p.dim())
      throw InputError("mc: ideal powers are not spanned by basis elements");
  }
  std::vector<unsigned> w(g.base.ideal.size() * g.rank(), 1);
  for (std::size_t i = 0; i < g.base.ideal.size(); ++i) {
    unsigned wt = 1;
    QVec e = g.base.basis_vec(g.base.ideal[i]);
    for (std::size_t kk = 0; kk < filt.powers.size(); ++kk)
      if (filt.powers[kk].contains(e)) wt = static_cast<unsigned>(kk) + 1;
    for (std::size_t m = 0; m < g.rank(); ++m) w[i * g.rank() + m] = wt;
  }
  return w;
}

TowerResult solve_mc_tower(const LInfty& g, std::size_t branch_bound) {
  g.check_shape();
  LInfty h = restrict_to_ideal(g);
  TowerResult out;
  if (h.rank() == 0) {
    out.vertices.push_back(QVec{});
    return out;
  }
  auto lcs = lower_central_series(h);
  if (!lcs.nilpotent) throw InputError("mc: tower host is not nilpotent");
  auto w = ideal_weights(g);
  unsigned maxw = *std::max_element(w.begin(), w.end());
  out.stages = maxw;

  std::vector<QVec> branches{zero_vec(h.udim())};
  for (unsigned k = 1; k <= maxw && !branches.empty(); ++k) {
    std::vector<std::size_t> S;
    for (std::size_t j = 0; j < h.rank(); ++j)
      if (w[j] == k) S.push_back(j);
    std::vector<std::size_t> pos(h.rank(), SIZE_MAX);
    CochainComplex K;
    for (std::size_t i = 0; i < S.size(); ++i) {
      pos[S[i]] = i;
      K.module.labels.push_back(h.gens.labels[S[i]]);
      K.module.degrees.push_back(h.gens.degrees[S[i]]);
    }
    K.d = QMatrix(S.size(), S.size());
    for (std::size_t c = 0; c < S.size(); ++c) {
      QVec dv = h.eval_taylor_vecs({[&] {
        QVec x = zero_vec(h.udim());
        x[S[c]] = Rat(1);
        return x;
      }()});
      for (std::size_t u = 0; u < dv.size(); ++u)
        if (!is_zero(dv[u])) {
          if (w[u] < k) throw InputError("mc: differential lowers the filtration weight");
          if (w[u] == k) K.d.at(pos[u], c) = dv[u];
        }
    }
    if (!K.d_squares_to_zero())
      throw InputError("mc: stage differential does not square to zero");
    auto H = cohomology(K);

    // torsor directions at this stage: kernel of the stage map in degree 1
    std::vector<std::size_t> deg1;
    for (std::size_t i = 0; i < S.size(); ++i)
      if (K.module.degrees[i] == 1) deg1.push_back(i);
    QMatrix sub(S.size(), deg1.size());
    for (std::size_t c = 0; c < deg1.size(); ++c)
      for (std::size_t rr = 0; rr < S.size(); ++rr) sub.at(rr, c) = K.d.at(rr, deg1[c]);
    QMatrix kerb = sub.kernel_basis();
    std::vector<QVec> fiber;
    for (std::size_t c = 0; c < kerb.cols(); ++c) {
      QVec dir = zero_vec(h.udim());
      for (std::size_t i = 0; i < deg1.size(); ++i) dir[S[deg1[i]]] = kerb.at(i, c);
      fiber.push_back(std::move(dir));
    }

    std::vector<QVec> next;
    for (std::size_t bi = 0; bi < branches.size(); ++bi) {
      const QVec& alpha = branches[bi];
      QVec r = mc_value(h, alpha);
      for (std::size_t u = 0; u < r.size(); ++u)
        if (!is_zero(r[u]) && w[u] < k)
          throw InputError("mc: tower residual has low-weight components");
      QVec rS = zero_vec(S.size());
      for (std::size_t i = 0; i < S.size(); ++i) rS[i] = r[S[i]];
      auto cls = cohomology_class(K, H, rS, 2);
      if (!cls) throw InputError("mc: stage obstruction is not closed");
      TowerLedgerEntry entry;
      entry.stage = k;
      entry.branch = bi;
      entry.obstruction_class = *cls;
      if (all_zero(*cls)) {
        auto sol = K.d.solve(vneg(rS));
        if (!sol) throw InputError("mc: exact stage cocycle has no preimage");
        QVec kappa = zero_vec(h.udim());
        for (std::size_t i = 0; i < S.size(); ++i)
          if (K.module.degrees[i] == 1) kappa[S[i]] = (*sol)[i];
        entry.lifted = true;
        entry.fiber_dim = fiber.size();
        QVec particular = vadd(alpha, kappa);
        std::vector<QVec> cand{particular};
        for (const auto& f : fiber) cand.push_back(vadd(particular, f));
        for (auto& c2 : cand) {
          if (next.size() < branch_bound)
            next.push_back(std::move(c2));
          else
            out.branch_bound_hit = true;
        }
      }
      out.ledger.push_back(std::move(entry));
    }
    branches = std::move(next);
  }

  std::sort(branches.begin(), branches.end());
  branches.erase(std::unique(branches.begin(), branches.end()), branches.end());
  for (const auto& alpha : branches) {
    auto v = mc_verify(h, alpha);
    if (!v.pass) throw InputError("mc: tower emitted an unverified vertex");
    out.vertices.push_back(alpha);
  }
  return out;
}

AffineSolveResult solve_mc_abelian(const LInfty& host) {
  if (!host_is_linear(host)) throw InputError("mc: host is not abelian");
  const std::size_t n = host.udim();
  std::vector<std::size_t> deg1;
  for (std::size_t u = 0; u < n; ++u)
    if (host.udeg(u) == 1) deg1.push_back(u);
  QMatrix M(n, deg1.size());
  for (std::size_t c = 0; c < deg1.size(); ++c) {
    QVec x = zero_vec(n);
    x[deg1[c]] = Rat(1);
    QVec dv = host.eval_taylor_vecs({x});
    for (std::size_t u = 0; u < n; ++u) M.at(u, c) = dv[u];
  }
  QVec curving = host.eval_taylor_vecs({});
  AffineSolveResult out;
  auto sol = M.solve(vneg(curving));
  if (!sol) return out;
  out.solvable = true;
  out.point = zero_vec(n);
  for (std::size_t c = 0; c < deg1.size(); ++c) out.point[deg1[c]] = (*sol)[c];
  QMatrix ker = M.kernel_basis();
  for (std::size_t c = 0; c < ker.cols(); ++c) {
    QVec dir = zero_vec(n);
    for (std::size_t i = 0; i < deg1.size(); ++i) dir[deg1[i]] = ker.at(i, c);
    out.directions.push_back(std::move(dir));
  }
  return out;
}

std::optional<std::size_t> mc_pi0_dim(const LInfty& g) {
  auto tower = solve_mc_tower(g, 1);
  if (tower.vertices.empty()) return std::nullopt;
  LInfty h = restrict_to_ideal(g);
  if (!host_is_linear(h)) throw InputError("mc: pi_0 dimension needs an abelian host");
  const std::size_t n = h.udim();
  std::vector<std::size_t> deg0, deg1;
  for (std::size_t u = 0; u < n; ++u) {
    if (h.udeg(u) == 0) deg0.push_back(u);
    if (h.udeg(u) == 1) deg1.push_back(u);
  }
  auto block = [&](const std::vector<std::size_t>& cols) {
    QMatrix M(n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      QVec x = zero_vec(n);
      x[cols[c]] = Rat(1);
      QVec dv = h.eval_taylor_vecs({x});
      for (std::size_t u = 0; u < n; ++u) M.at(u, c) = dv[u];
    }
    return M;
  };
  std::size_t z = deg1.size() - block(deg1).rank();
  std::size_t b = block(deg0).rank();
  return z - b;
}

// ---- chain data and Dold-Kan ----

void ChainData::check() const {
  if (boundary.size() != dims.size())
    throw InputError("chain data: boundary list length mismatch");
  for (std::size_t k = 1; k < dims.size(); ++k) {
    if (boundary[k].rows() != dims[k - 1] || boundary[k].cols() != dims[k])
      throw InputError("chain data: boundary shape mismatch at level " + std::to_string(k));
    if (k >= 2 && !(boundary[k - 1] * boundary[k]).is_zero())
      throw InputError("chain data: boundary does not square to zero at level " +
                       std::to_string(k));
  }
}

std::vector<std::size_t> ChainData::homology_dims() const {
  std::vector<std::size_t> out(dims.size(), 0);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    std::size_t zk = k == 0 ? dims[0] : dims[k] - boundary[k].rank();
    std::size_t bk = (k + 1 < dims.size()) ? boundary[k + 1].rank() : 0;
    out[k] = zk - bk;
  }
  return out;
}

namespace {

// order-preserving surjections [n] ->> [k], as value vectors of length n+1,
// enumerated in lexicographic order of the jump positions
std::vector<std::vector<unsigned>> surjections(unsigned n, unsigned k) {
  std::vector<std::vector<unsigned>> out;
  // choose k jump positions among 1..n
  std::vector<unsigned> idx(k);
  for (unsigned i = 0; i < k; ++i) idx[i] = i + 1;
  if (k > n) return out;
  while (true) {
    std::vector<unsigned> vals(n + 1, 0);
    unsigned v = 0;
    std::size_t next = 0;
    for (unsigned p = 0; p <= n; ++p) {
      if (next < k && idx[next] == p) {
        ++v;
        ++next;
      }
      vals[p] = v;
    }
    out.push_back(std::move(vals));
    // next combination
    long i = static_cast<long>(k) - 1;
    while (i >= 0 && idx[i] == n - (k - 1 - static_cast<unsigned>(i))) --i;
    if (i < 0) break;
    ++idx[i];
    for (std::size_t j2 = static_cast<std::size_t>(i) + 1; j2 < k; ++j2)
      idx[j2] = idx[j2 - 1] + 1;
  }
  if (k == 0) {
    out.clear();
    out.push_back(std::vector<unsigned>(n + 1, 0));
  }
  return out;
}

struct DKLevel {
  // (target level k, surjection values), with the offset of each summand
  std::vector<std::pair<unsigned, std::vector<unsigned>>> summands;
  std::vector<std::size_t> offsets;
  std::size_t dim = 0;
  std::map<std::pair<unsigned, std::vector<unsigned>>, std::size_t> lookup;
};

DKLevel dk_level(const ChainData& c, unsigned n) {
  DKLevel lv;
  unsigned top = static_cast<unsigned>(c.dims.size()) - 1;
  for (unsigned k = 0; k <= std::min(n, top); ++k)
    for (auto& eta : surjections(n, k)) {
      lv.lookup[{k, eta}] = lv.summands.size();
      lv.offsets.push_back(lv.dim);
      lv.dim += c.dims[k];
      lv.summands.emplace_back(k, eta);
    }
  return lv;
}

// structure map for theta: [m] -> [n] (value vector), from level n to level m
QMatrix dk_map(const ChainData& c, const DKLevel& src, const DKLevel& dst,
               const std::vector<unsigned>& theta) {
  QMatrix M(dst.dim, src.dim);
  for (std::size_t s = 0; s < src.summands.size(); ++s) {
    const auto& [k, eta] = src.summands[s];
    std::size_t o = src.offsets[s];
    std::vector<unsigned> comp(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) comp[i] = eta[theta[i]];
    std::vector<unsigned> vals(comp);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    unsigned kp = static_cast<unsigned>(vals.size()) - 1;
    std::vector<unsigned> etap(comp.size());
    for (std::size_t i = 0; i < comp.size(); ++i)
      etap[i] = static_cast<unsigned>(
          std::lower_bound(vals.begin(), vals.end(), comp[i]) - vals.begin());
    auto it = dst.lookup.find({kp, etap});
    if (it == dst.lookup.end()) continue;  // target level dropped by truncation
    std::size_t o2 = dst.offsets[it->second];
    if (kp == k) {
      for (std::size_t r = 0; r < c.dims[k]; ++r) M.at(o2 + r, o + r) = Rat(1);
    } else if (kp + 1 == k && vals.back() == k - 1) {
      // the inclusion misses only the top element: the boundary acts
      for (std::size_t r = 0; r < c.dims[kp]; ++r)
        for (std::size_t cc = 0; cc < c.dims[k]; ++cc)
          M.at(o2 + r, o + cc) = c.boundary[k].at(r, cc);
    }
    // all other injections act by zero
  }
  return M;
}

}  // namespace

SimplicialAbelian dold_kan(const ChainData& c, unsigned n_max) {
  c.check();
  SimplicialAbelian s;
  std::vector<DKLevel> levels;
  for (unsigned n = 0; n <= n_max; ++n) {
    levels.push_back(dk_level(c, n));
    s.dims.push_back(levels.back().dim);
  }
  s.face.resize(n_max + 1);
  s.degeneracy.resize(n_max + 1);
  for (unsigned n = 1; n <= n_max; ++n)
    for (unsigned i = 0; i <= n; ++i) {
      std::vector<unsigned> theta;  // delta^i: [n-1] -> [n]
      for (unsigned v = 0; v <= n; ++v)
        if (v != i) theta.push_back(v);
      s.face[n].push_back(dk_map(c, levels[n], levels[n - 1], theta));
    }
  for (unsigned n = 0; n + 1 <= n_max; ++n)
    for (unsigned j = 0; j <= n; ++j) {
      std::vector<unsigned> theta;  // sigma^j: [n+1] -> [n]
      for (unsigned v = 0; v <= n + 1; ++v) theta.push_back(v <= j ? v : v - 1);
      s.degeneracy[n].push_back(dk_map(c, levels[n], levels[n + 1], theta));
    }
  return s;
}

bool SimplicialAbelian::check_identities(std::string* witness) const {
  auto fail = [&](const std::string& w) {
    if (witness) *witness = w;
    return false;
  };
  std::size_t top = dims.empty() ? 0 : dims.size() - 1;
  for (std::size_t n = 2; n <= top; ++n)
    for (std::size_t j = 1; j <= n; ++j)
      for (std::size_t i = 0; i < j; ++i)
        if (face[n - 1][i] * face[n][j] != face[n - 1][j - 1] * face[n][i])
          return fail("d_" + std::to_string(i) + " d_" + std::to_string(j) + " at level " +
                      std::to_string(n));
  for (std::size_t n = 0; n + 2 <= top; ++n)
    for (std::size_t j = 0; j <= n; ++j)
      for (std::size_t i = 0; i <= j; ++i)
        if (degeneracy[n + 1][i] * degeneracy[n][j] != degeneracy[n + 1][j + 1] * degeneracy[n][i])
          return fail("s_" + std::to_string(i) + " s_" + std::to_string(j) + " at level " +
                      std::to_string(n));
  for (std::size_t n = 0; n + 1 <= top; ++n)
    for (std::size_t j = 0; j <= n; ++j)
      for (std::size_t i = 0; i <= n + 1; ++i) {
        QMatrix lhs = face[n + 1][i] * degeneracy[n][j];
        QMatrix rhs;
        if (i < j)
          rhs = (n >= 1) ? degeneracy[n - 1][j - 1] * face[n][i] : QMatrix();
        else if (i == j || i == j + 1)
          rhs = QMatrix::identity(dims[n]);
        else
          rhs = (n >= 1) ? degeneracy[n - 1][j] * face[n][i - 1] : QMatrix();
        if (rhs.rows() == 0 && !(i == j || i == j + 1)) continue;  // composite leaves the window
        if (lhs != rhs)
          return fail("d_" + std::to_string(i) + " s_" + std::to_string(j) + " at level " +
                      std::to_string(n));
      }
  return true;
}

ChainData normalize_simplicial(const SimplicialAbelian& s) {
  ChainData c;
  if (s.dims.empty()) return c;
  std::size_t top = s.dims.size() - 1;
  std::vector<QMatrix> basis(top + 1);  // level-dim x N_n
  basis[0] = QMatrix::identity(s.dims[0]);
  c.dims.push_back(s.dims[0]);
  c.boundary.push_back(QMatrix());
  for (std::size_t n = 1; n <= top; ++n) {
    QMatrix stacked(n * s.dims[n - 1], s.dims[n]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t r = 0; r < s.dims[n - 1]; ++r)
        for (std::size_t cc = 0; cc < s.dims[n]; ++cc)
          stacked.at(i * s.dims[n - 1] + r, cc) = s.face[n][i].at(r, cc);
    basis[n] = stacked.kernel_basis();
    c.dims.push_back(basis[n].cols());
    QMatrix bnd(c.dims[n - 1], c.dims[n]);
    for (std::size_t cc = 0; cc < basis[n].cols(); ++cc) {
      QVec v = s.face[n][n].apply(basis[n].col_vec(cc));
      if (n % 2 == 1)
        for (auto& x : v) x = -x;
      // coordinates in the N_{n-1} basis
      auto sol = basis[n - 1].solve(v);
      if (!sol) throw InputError("normalize: boundary leaves the normalized part");
      for (std::size_t r = 0; r < c.dims[n - 1]; ++r) bnd.at(r, cc) = (*sol)[r];
    }
    c.boundary.push_back(std::move(bnd));
  }
  c.check();
  return c;
}

CochainComplex abelian_complex(const LInfty& host) {
  if (!host_is_linear(host) || !host.taylor[0].empty())
    throw InputError("mc: abelian flat host expected");
  CochainComplex c;
  for (std::size_t u = 0; u < host.udim(); ++u) {
    c.module.labels.push_back(host.ulabel(u));
    c.module.degrees.push_back(host.udeg(u));
  }
  c.d = QMatrix(host.udim(), host.udim());
  for (std::size_t u = 0; u < host.udim(); ++u) {
    QVec x = zero_vec(host.udim());
    x[u] = Rat(1);
    QVec dv = host.eval_taylor_vecs({x});
    for (std::size_t r = 0; r < host.udim(); ++r) c.d.at(r, u) = dv[r];
  }
  if (!c.d_squares_to_zero())
    throw InputError("mc: abelian host differential does not square to zero");
  return c;
}

ChainData mc_truncation(const CochainComplex& h) {
  h.check_shape();
  if (!h.d_squares_to_zero()) throw InputError("mc: truncation input is not a complex");
  if (!h.d_respects_degree()) throw InputError("mc: truncation input differential is not homogeneous");
  std::map<int, std::vector<std::size_t>> by_deg;
  for (std::size_t u = 0; u < h.dim(); ++u) by_deg[h.module.degrees[u]].push_back(u);
  int dmin = by_deg.empty() ? 1 : by_deg.begin()->first;
  unsigned top = dmin < 1 ? static_cast<unsigned>(1 - dmin) : 0;

  auto indices = [&](int deg) -> const std::vector<std::size_t>& {
    static const std::vector<std::size_t> empty;
    auto it = by_deg.find(deg);
    return it == by_deg.end() ? empty : it->second;
  };
  auto block = [&](int from_deg) {
    const auto& cols = indices(from_deg);
    const auto& rows = indices(from_deg + 1);
    QMatrix M(rows.size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (std::size_t r = 0; r < rows.size(); ++r) M.at(r, c) = h.d.at(rows[r], cols[c]);
    return M;
  };

  ChainData c;
  QMatrix z1 = block(1).kernel_basis();  // columns: Z^1 in degree-1 coordinates
  c.dims.push_back(z1.cols());
  c.boundary.push_back(QMatrix());
  for (unsigned k = 1; k <= top; ++k) {
    c.dims.push_back(indices(1 - static_cast<int>(k)).size());
    if (k == 1) {
      QMatrix b1(c.dims[0], c.dims[1]);
      QMatrix d0 = block(0);
      for (std::size_t cc = 0; cc < c.dims[1]; ++cc) {
        auto sol = z1.solve(d0.col_vec(cc));
        if (!sol) throw InputError("mc: truncation boundary misses the cocycles");
        for (std::size_t r = 0; r < c.dims[0]; ++r) b1.at(r, cc) = (*sol)[r];
      }
      c.boundary.push_back(std::move(b1));
    } else {
      c.boundary.push_back(block(1 - static_cast<int>(k)));
    }
  }
  c.check();
  return c;
}

DKComparison mc_abelian_compare(const LInfty& g, unsigned n_max) {
  if (!g.is_abelian()) throw InputError("mc: Dold-Kan comparison needs an abelian algebra");
  DKComparison out;
  auto tower = solve_mc_tower(g, 1);
  out.mc_nonempty = !tower.vertices.empty();
  auto p = mc_pi0_dim(g);
  LInfty h = restrict_to_ideal(g);
  ChainData c = h.rank() == 0 ? ChainData{{0}, {QMatrix()}} : mc_truncation(abelian_complex(h));
  auto s = dold_kan(c, std::max(1u, n_max));
  out.dk_level_dims = s.dims;
  ChainData n = normalize_simplicial(s);
  out.dk_pi0 = n.homology_dims()[0];
  out.mc_pi0 = p ? *p : 0;
  out.pass = out.mc_nonempty && p.has_value() && *p == out.dk_pi0;
  return out;
}

// ---- paths ----

PathResult path_exists(const LInfty& host, const std::vector<unsigned>& weights,
                       const QVec& v0, const QVec& v1, unsigned cap) {
  if (host.base.dim() != 1) throw InputError("mc: path search expects a host over Q");
  if (weights.size() != host.rank()) throw InputError("mc: weight vector length mismatch");
  auto c0 = mc_verify(host, v0);
  auto c1 = mc_verify(host, v1);
  if (!c0.pass || !c1.pass)
    throw InputError("mc: path endpoints must be verified vertices");
  PathResult out;
  out.cap = cap;

  if (cap < 1 && v0 != v1) {
    out.report = "distinct endpoints need degree cap >= 1";
    return out;
  }

  SimplexForms forms = simplex_forms(1, cap);
  LInfty big = extend_scalars(host, forms.alg);
  const std::size_t rank = host.rank();
  auto uu = [&](std::size_t j, std::size_t m) { return big.uindex(j, m); };

  SimplexForms pt = simplex_forms(0, cap);
  QMatrix p_at_1 = face_pullback(forms, pt, 0);  // vertex t = 1
  QMatrix p_at_0 = face_pullback(forms, pt, 1);  // vertex t = 0
  auto face_eval = [&](const QMatrix& p, const QVec& a) {
    QVec r = zero_vec(host.udim());
    for (std::size_t j = 0; j < forms.dim(); ++j)
      for (std::size_t m = 0; m < rank; ++m) r[m] += p.at(0, j) * a[uu(j, m)];
    return r;
  };

  QVec base = zero_vec(big.udim());
  for (std::size_t m = 0; m < rank; ++m) base[uu(forms.alg.unit, m)] = v0[m];
  if (v0 != v1) {
    std::size_t j_t = forms.index_of({1}, 0);
    for (std::size_t m = 0; m < rank; ++m) base[uu(j_t, m)] = v1[m] - v0[m];
  }

  try {
    QVec y = zero_vec(big.udim());
    auto l1_col = [&](std::size_t u) {
      QVec x = zero_vec(big.udim());
      x[u] = Rat(1);
      return big.eval_taylor_vecs({x});
    };

    if (host_is_linear(host)) {
      // one global linear solve: mc(base + y) = mc(base) + l_1(y), faces zero
      std::vector<std::size_t> cols;
      for (std::size_t u = 0; u < big.udim(); ++u)
        if (big.udeg(u) == 1) cols.push_back(u);
      QMatrix M(big.udim() + 2 * rank, cols.size());
      for (std::size_t c = 0; c < cols.size(); ++c) {
        QVec dv = l1_col(cols[c]);
        for (std::size_t u = 0; u < big.udim(); ++u) M.at(u, c) = dv[u];
        std::size_t j = big.ubase(cols[c]), m = big.ugen(cols[c]);
        M.at(big.udim() + m, c) = p_at_0.at(0, j);
        M.at(big.udim() + rank + m, c) = p_at_1.at(0, j);
      }
      QVec rhs = zero_vec(big.udim() + 2 * rank);
      QVec r = mc_value(big, base);
      for (std::size_t u = 0; u < big.udim(); ++u) rhs[u] = -r[u];
      auto sol = M.solve(rhs);
      if (!sol) {
        out.report = "no 1-simplex with polynomial coefficients of degree <= " +
                     std::to_string(cap);
        return out;
      }
      for (std::size_t c = 0; c < cols.size(); ++c) y[cols[c]] = (*sol)[c];
    } else {
      unsigned maxw = rank == 0 ? 0 : *std::max_element(weights.begin(), weights.end());
      for (unsigned k = 1; k <= maxw; ++k) {
        std::vector<std::size_t> cols, rows;
        for (std::size_t u = 0; u < big.udim(); ++u) {
          if (weights[big.ugen(u)] != k) continue;
          rows.push_back(u);
          if (big.udeg(u) == 1) cols.push_back(u);
        }
        QVec r = mc_value(big, vadd(base, y));
        for (std::size_t u = 0; u < big.udim(); ++u)
          if (!is_zero(r[u]) && weights[big.ugen(u)] < k)
            throw InputError("mc: path residual has low-weight components");
        QMatrix M(rows.size() + 2 * rank, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
          QVec dv = l1_col(cols[c]);
          for (std::size_t rr = 0; rr < rows.size(); ++rr) M.at(rr, c) = dv[rows[rr]];
          std::size_t j = big.ubase(cols[c]), m = big.ugen(cols[c]);
          M.at(rows.size() + m, c) = p_at_0.at(0, j);
          M.at(rows.size() + rank + m, c) = p_at_1.at(0, j);
        }
        QVec rhs = zero_vec(rows.size() + 2 * rank);
        for (std::size_t rr = 0; rr < rows.size(); ++rr) rhs[rr] = -r[rows[rr]];
        auto sol = M.solve(rhs);
        if (!sol) {
          out.report = "stage " + std::to_string(k) +
                       " unsolvable with polynomial coefficients of degree <= " +
                       std::to_string(cap);
          return out;
        }
        for (std::size_t c = 0; c < cols.size(); ++c) y[cols[c]] += (*sol)[c];
      }
    }

    QVec path = vadd(base, y);
    auto check = mc_verify(big, path);
    if (!check.pass) throw InputError("mc: path candidate fails Maurer-Cartan");
    if (face_eval(p_at_0, path) != v0 || face_eval(p_at_1, path) != v1)
      throw InputError("mc: path candidate misses its endpoints");
    out.found = true;
    out.path = std::move(path);
  } catch (const CapOverflowError& e) {
    out.found = false;
    out.report = std::string("evaluation left the degree cap: ") + e.what();
  }
  return out;
}

PathResult path_exists(const LInfty& g, const QVec& v0, const QVec& v1, unsigned cap) {
  return path_exists(restrict_to_ideal(g), ideal_weights(g), v0, v1, cap);
}

// ---- simplicial MC sets ----

MCSimplexSet mc_simplex_set(const LInfty& g, unsigned n_max, unsigned cap) {
  MCSimplexSet s;
  s.n_max = n_max;
  s.cap = cap;
  LInfty h = restrict_to_ideal(g);
  for (unsigned n = 0; n <= n_max; ++n) {
    s.forms.push_back(simplex_forms(n, cap));
    s.hosts.push_back(extend_scalars(h, s.forms.back().alg));
  }
  s.simplices.resize(n_max + 1);
  return s;
}

MCResidual mc_simplex_verify(const MCSimplexSet& s, unsigned level, const QVec& alpha) {
  if (level >= s.hosts.size()) throw InputError("mc: simplex level out of range");
  return mc_verify(s.hosts[level], alpha);
}

std::size_t mc_add_simplex(MCSimplexSet& s, unsigned level, const QVec& alpha) {
  auto v = mc_simplex_verify(s, level, alpha);
  if (!v.pass) throw InputError("mc: simplex fails the Maurer-Cartan equation");
  s.simplices[level].push_back(alpha);
  return s.simplices[level].size() - 1;
}

namespace {

QVec simplicial_transport(const MCSimplexSet& s, unsigned from, unsigned to,
                          const QMatrix& p, const QVec& alpha) {
  const LInfty& src = s.hosts[from];
  const LInfty& dst = s.hosts[to];
  if (alpha.size() != src.udim()) throw InputError("mc: simplex dimension mismatch");
  QVec out = zero_vec(dst.udim());
  const std::size_t rank = src.rank();
  for (std::size_t j = 0; j < s.forms[from].dim(); ++j)
    for (std::size_t m = 0; m < rank; ++m) {
      const Rat& c = alpha[src.uindex(j, m)];
      if (is_zero(c)) continue;
      for (std::size_t j2 = 0; j2 < s.forms[to].dim(); ++j2)
        if (!is_zero(p.at(j2, j))) out[dst.uindex(j2, m)] += p.at(j2, j) * c;
    }
  return out;
}

}  // namespace

QVec mc_simplex_face(const MCSimplexSet& s, unsigned level, unsigned i, const QVec& alpha) {
  if (level == 0 || level >= s.hosts.size() || i > level)
    throw InputError("mc: face index out of range");
  QMatrix p = face_pullback(s.forms[level], s.forms[level - 1], i);
  return simplicial_transport(s, level, level - 1, p, alpha);
}

QVec mc_simplex_degeneracy(const MCSimplexSet& s, unsigned level, unsigned j,
                           const QVec& alpha) {
  if (level + 1 >= s.hosts.size() || j > level)
    throw InputError("mc: degeneracy index out of range");
  QMatrix p = degeneracy_pullback(s.forms[level], s.forms[level + 1], j);
  return simplicial_transport(s, level, level + 1, p, alpha);
}

}  // namespace lspace
