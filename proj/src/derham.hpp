#pragma once

#include "linfty.hpp"

namespace lspace {

// The de Rham complex of Bg, truncated at a word cap: the free graded
// commutative algebra over the base on the generator duals eta^a and their
// universal differentials delta^a = d_dr(eta^a), realized as the cochains of
// g (+) g[1] (adjoint copy; its duals have degree deg(eta^a) + 1). The total
// differential is the cochain differential d_omega plus the derivation d_dr.
// The number of delta letters in a word is its form weight k (the piece
// Omega^k, regraded by [-k]).
struct DeRhamComplex {
  LInfty total;  // g (+) adjoint copy; delta letters are [rank_g, 2 rank_g)
  std::size_t rank_g = 0;
  CEComplex ce;   // d = d_omega
  QMatrix d_dr;   // the derivation eta -> delta (base-linear)
  CochainComplex complex;  // same basis, d = d_omega + d_dr
  unsigned cap = 0;

  unsigned form_weight(std::size_t word_index) const;
  std::size_t dim() const { return complex.dim(); }
};

DeRhamComplex de_rham_of_Bg(const LInfty& g, unsigned cap);

// Basis indices of the form-weight-k piece.
std::vector<std::size_t> form_weight_indices(const DeRhamComplex& dr, unsigned k);

// Omega^k with its internal differential d_omega (which preserves the weight).
CochainComplex form_weight_piece(const DeRhamComplex& dr, unsigned k);

// Contraction of one delta^a letter (a < rank_g), acting from the left.
QVec dr_contract(const DeRhamComplex& dr, std::size_t a, const QVec& x);

// ---- shifted symplectic structures ----

struct SymplecticCertificate {
  int shift = 0;    // n: the two-form is homogeneous of degree n + 2 here
  unsigned cap = 0; // section word cap
  bool homogeneous = false;
  bool closed = false;
  bool skew = false;
  QuasiIsoCertificate nondegeneracy;
  CochainComplex tangent_sections;
  CochainComplex cotangent_sections;
  QMatrix contraction;
  std::string witness;

  bool pass() const {
    return homogeneous && closed && skew && nondegeneracy.is_chain_map &&
           nondegeneracy.is_quasi_iso;
  }
};

// omega: an element of dr supported in form weight 2, homogeneous of total
// degree n + 2. Verifies d_dr-closure within the cap, skewness of the double
// contraction, and nondegeneracy as a quasi-isomorphism from the tangent
// section complex to the one-form piece. section_cap bounds the word length
// of the section complexes.
SymplecticCertificate symplectic_check(const LInfty& g, const DeRhamComplex& dr,
                                       const QVec& omega, unsigned section_cap);

// Total space of the coadjoint module g^dual[n-1] (the shifted cotangent
// space T*[n]Bg) with the evaluation two-form in its de Rham complex.
struct ShiftedCotangent {
  LInfty total;
  DeRhamComplex dr;
  QVec canonical;
  int shift = 0;
};

ShiftedCotangent shifted_cotangent(const LInfty& g, int n, unsigned dr_cap);

// Column-sparse test that a * b = 0 without forming the dense product;
// usable on complexes too large for the dense d^2 check.
bool composite_is_zero(const QMatrix& a, const QMatrix& b);

}  // namespace lspace
