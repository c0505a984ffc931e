#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "complex.hpp"
#include "graded.hpp"
#include "qmatrix.hpp"
#include "sparse.hpp"

namespace lspace {

struct ValidationCheck {
  std::string name;
  bool pass = false;
  std::string witness;  // empty when passing
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass() const;
  const ValidationCheck* find(const std::string& name) const;
};

// Finite-basis graded-commutative dg algebra over Q with a nilpotent dg ideal
// given by a subset of the basis.
struct BaseAlgebra {
  GradedModule module;
  std::size_t unit = 0;                       // basis index of 1
  std::vector<std::vector<SparseVec>> mult;   // mult[i][j] = e_i * e_j
  QMatrix d;                                  // degree +1
  std::vector<std::size_t> ideal;             // basis indices spanning I

  // Basis pairs whose true product has a nonzero component beyond the modeled
  // basis (degree-cap truncations). Using such a pair throws CapOverflowError
  // when strict_overflow is set; it is never truncated silently.
  std::set<std::pair<std::size_t, std::size_t>> overflow_pairs;
  bool strict_overflow = true;

  std::size_t dim() const { return module.dim(); }
  void check_shape() const;  // throws InputError on dimension mismatch

  bool pair_overflows(std::size_t i, std::size_t j) const {
    return overflow_pairs.count({i, j}) != 0;
  }

  QVec basis_vec(std::size_t i) const;
  QVec mul(const QVec& a, const QVec& b) const;
  SparseVec mul_basis(std::size_t i, std::size_t j) const;

  Subspace ideal_span() const;
  CochainComplex as_complex() const;

  // The rationals Q: one generator "1" in degree 0, zero ideal.
  static BaseAlgebra rationals();
  // Q[eps]/(eps^2) with deg(eps)=eps_degree and d(eps)=0; ideal (eps).
  static BaseAlgebra dual_numbers(int eps_degree = 0, const std::string& eps_label = "eps");
  // Q[x]/(x^{n+1}), deg x = 0, d = 0; ideal (x).
  static BaseAlgebra truncated_polynomial(unsigned n, const std::string& var = "x");
};

ValidationReport validate_base_algebra(const BaseAlgebra& a);

struct IdealFiltration {
  std::vector<Subspace> powers;  // powers[k] = I^{k+1}, ending with 0
  unsigned nilpotency_index = 0;  // least n with I^n = 0 (index 1 when I = 0)
};

// Throws InputError when the chain fails to reach 0 within dim(a) steps.
IdealFiltration ideal_powers(const BaseAlgebra& a);

// Gr^k = F^k / F^{k+1}, k = 0 .. nilpotency_index - 1 (F^0 = whole algebra).
std::vector<GradedPiece> associated_graded(const BaseAlgebra& a);

BaseAlgebra tensor_cdga(const BaseAlgebra& a, const BaseAlgebra& b);

struct AlgebraMap {
  const BaseAlgebra* source = nullptr;
  const BaseAlgebra* target = nullptr;
  QMatrix matrix;  // target-dim x source-dim
};

ValidationReport validate_algebra_map(const AlgebraMap& f);

struct WeakEquivalenceCertificate {
  bool is_weak_equivalence = false;
  std::vector<ValidationCheck> details;  // one per filtration level
};

// Weak equivalence: Gr(f) a quasi-isomorphism on every filtration quotient.
WeakEquivalenceCertificate weak_equivalence_check(const AlgebraMap& f);

}  // namespace lspace
