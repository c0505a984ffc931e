#pragma once

#include "derham.hpp"
#include "simplex_forms.hpp"

namespace lspace {

// Named example constructors: the de Rham space of a base, the formal affine
// jet model, Betti and de Rham loop spaces, and the AKSZ pairing on the
// de Rham loop space of a symplectic target.

// The algebra with no generators over the given base; its MC space is a point.
LInfty de_rham_space(const BaseAlgebra& base);

// Truncated polynomial de Rham base Q[x_1..x_d]/m^{J+1} (x) Lambda(dx_1..dx_d)
// with the de Rham differential; ideal = augmentation ideal; products leaving
// the jet order are overflow pairs. Generators xi_1..xi_d in degree 1
// with curving sum dx_i (x) xi_i and no higher terms (flat coordinates).
struct FormalAffineModel {
  unsigned dim = 0;
  unsigned jets = 0;
  LInfty g;
  // base basis: (exponent vector, dx bitmask), in enumeration order
  std::vector<std::pair<std::vector<unsigned>, unsigned>> keys;

  std::size_t base_index(const std::vector<unsigned>& exps, unsigned mask) const;
};

FormalAffineModel formal_affine_gX(unsigned d, unsigned J);

// View an algebra over tensor_cdga(a, c) as an algebra over a alone, with
// generators (c basis element, generator), index j * rank + m. The inverse of
// extend_scalars up to this regrouping of the free module.
LInfty regroup_scalars(const LInfty& g, const BaseAlgebra& a, const BaseAlgebra& c);

// The jet CE complex splits by total weight (ideal-power weight of the base
// element plus word length) and the differential preserves it. Genuine
// cohomology lives in weights up to the jet order; truncation artifacts sit
// strictly above the word cap, so the graded pieces within cap decide the
// lemma: functions in degree 0, nothing in positive degrees.
struct JetCertificate {
  unsigned cap = 0;
  bool weight_graded = false;   // d preserves total weight
  bool positive_clear = false;  // H^{>0} vanishes in every weight <= cap
  bool function_dims = false;   // dim H^0 in weight w = # weight-w monomials
  bool ring = false;            // jet classes y^a span H^0 and die at order J+1
  std::string witness;
  std::map<int, std::size_t> h;  // total cohomology of the capped complex
  bool pass() const { return weight_graded && positive_clear && function_dims && ring; }
};

JetCertificate jet_cohomology_check(const FormalAffineModel& m, unsigned word_cap);

struct LoopModel {
  std::string flavor;  // "betti" or "derham"
  LInfty algebra;      // extend_scalars result
};

LoopModel betti_loop(const LInfty& g);

// Strict isomorphism of the regrouped Betti loop algebra with the total space
// of the shifted adjoint module g[-1] (the shifted tangent space T[-2]... the
// copy sits one degree up).
ValidationReport betti_loop_is_shifted_tangent(const LInfty& g);

// Cohomology of the functions on the Betti loop space (cochains of the
// regrouped algebra) against the regraded truncated de Rham forms of the jet
// model, compared weight by weight: the differential preserves total weight,
// truncation artifacts sit above the word cap, and the form classes y^e dy_S
// sit at weight |e| + |S|.
struct HKRCertificate {
  unsigned cap = 0;
  std::map<int, std::size_t> h;  // weights <= cap, summed per degree
  std::map<int, std::size_t> expected;
  std::string witness;
  bool pass = false;
};

HKRCertificate hkr_check(const FormalAffineModel& m, unsigned cap);

LoopModel de_rham_loop(const LInfty& g, unsigned form_cap);

// The strict map id (x) phi_omega from the Betti loop algebra to the de Rham
// loop algebra, certified as a weak equivalence on word-capped chains. omega:
// a one-form in circle_forms(form_cap) with nonzero integral.
WeakEquivalenceResult loop_comparison(const LInfty& g, const QVec& omega, unsigned form_cap,
                                      unsigned word_cap);

// ---- AKSZ ----

struct AKSZPairing {
  FormalAffineModel target;  // dimension 2m, constant symplectic pairing
  CircleForms circle;
  QVec nu;          // one-form with nonzero integral
  Rat nu_integral;
  LInfty loop;      // de Rham loop algebra regrouped over the target base
  DeRhamComplex dr; // word cap 2
  QVec omega;       // the pairing two-form in dr
};

// omega_{i,m+i} = 1 pairs xi_i with xi_{m+i}; the circle factor is paired
// through the fundamental class scaled by the integral of nu. Throws
// InputError when nu is not a one-form or integrates to zero.
AKSZPairing aksz_pairing(unsigned m, unsigned J, const QVec& nu, unsigned form_cap);

struct AKSZCertificate {
  SymplecticCertificate sym;
  int expected_shift = -1;

  bool pass() const { return sym.pass() && sym.shift == expected_shift; }
};

AKSZCertificate aksz_certify(const AKSZPairing& p, unsigned section_cap);

}  // namespace lspace
