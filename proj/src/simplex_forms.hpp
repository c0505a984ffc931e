#pragma once

#include <vector>

#include "base_algebra.hpp"

namespace lspace {

// Polynomial differential forms on the standard n-simplex, with t0 and dt0
// eliminated via sum t_i = 1. Basis: monomials in t_1..t_n of total degree
// <= cap, wedged with subsets of {dt_1..dt_n} (a bitmask). Products whose
// polynomial degree leaves the cap are flagged as overflow pairs.
struct SimplexForms {
  unsigned n = 0;
  unsigned cap = 0;
  BaseAlgebra alg;
  std::vector<std::pair<std::vector<unsigned>, unsigned>> keys;  // (exponents, dt mask)

  std::size_t dim() const { return alg.dim(); }
  std::size_t index_of(const std::vector<unsigned>& exps, unsigned mask) const;  // throws
};

SimplexForms simplex_forms(unsigned n, unsigned cap);

// Pullback along the face map d^i : simplex(n-1) -> simplex(n); matrix from
// big (dimension n) to small (dimension n-1). Throws on out-of-range index.
QMatrix face_pullback(const SimplexForms& big, const SimplexForms& small, unsigned i);

// Pullback along the degeneracy s^j : simplex(n+1) -> simplex(n); matrix from
// small (dimension n) to big (dimension n+1).
QMatrix degeneracy_pullback(const SimplexForms& small, const SimplexForms& big, unsigned j);

// Exact integral of a top-degree form; normalized so that the integral of
// dt_1 ^ .. ^ dt_n is 1/n!. Throws InputError on non-top components.
Rat integrate_simplex(const SimplexForms& f, const QVec& form);

// Finite circle model: functions are polynomials of degree <= cap+1 with
// f(0) = f(1) (basis 1 and p_k = t^k - t for k = 2..cap+1), one-forms are
// t^k dt for k = 0..cap. H^0 and H^1 are both one-dimensional by the
// asymmetric cap.
struct CircleForms {
  unsigned cap = 0;
  BaseAlgebra alg;  // index 0: unit; 1..cap: p_2..p_{cap+1}; cap+1..2cap+1: t^k dt

  std::size_t dim() const { return alg.dim(); }
  std::size_t fun_index(unsigned k) const;      // p_k, k >= 2
  std::size_t one_index(unsigned k) const;      // t^k dt
};

CircleForms circle_forms(unsigned cap);

// Integral over the circle model; normalized so the integral of dt is 1.
// Throws InputError on non-top (function) components.
Rat integrate_circle(const CircleForms& c, const QVec& form);

// Q[eps], deg eps = 1, eps^2 = 0, d = 0, ideal (eps).
BaseAlgebra betti_circle();

// The map 1 -> 1, eps -> omega from the Betti circle into the circle model.
// Throws InputError when the integral of omega vanishes (not a volume form)
// or omega is not a one-form.
QMatrix circle_comparison(const CircleForms& c, const QVec& omega);

}  // namespace lspace
