#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graded.hpp"
#include "qmatrix.hpp"

namespace lspace {

// Finite graded Q-module with a degree +1 differential.
struct CochainComplex {
  GradedModule module;
  QMatrix d;

  std::size_t dim() const { return module.dim(); }
  void check_shape() const;          // throws InputError
  bool d_squares_to_zero() const;
  bool d_respects_degree() const;    // entries only from degree k to k+1

  static CochainComplex zero();
  CochainComplex shift(int k) const;  // C[k]: degree(x) -> degree(x) - k
};

// Direct sum, with labels tagged to stay unique.
CochainComplex direct_sum(const std::vector<const CochainComplex*>& parts,
                          const std::vector<std::string>& tags);

struct Cohomology {
  std::map<int, std::size_t> dims;                // H^k dimensions (0 omitted)
  std::map<int, std::vector<QVec>> representatives;  // cocycles, ambient coords
  std::map<int, std::size_t> cocycle_dims;        // dim Z^k
  std::map<int, std::size_t> coboundary_dims;     // dim B^k

  std::size_t dim(int k) const;
  long euler_characteristic() const;
  bool is_acyclic() const;
};

// Throws InputError if d^2 != 0 (invalid complex).
Cohomology cohomology(const CochainComplex& c);

// Coordinates of [z] in the representative basis of H^deg, if z is a cocycle
// of homogeneous degree deg. Returns nullopt when z is not a cocycle.
std::optional<QVec> cohomology_class(const CochainComplex& c, const Cohomology& h,
                                     const QVec& z, int deg);

// A filtration quotient top/bottom of a complex, with a chosen lift of its
// basis into ambient coordinates and the corresponding projection.
struct GradedPiece {
  CochainComplex complex;
  // rows: representatives in ambient coordinates for the quotient basis
  std::vector<QVec> lift;
  // projection ambient -> quotient coordinates (valid on `top`)
  QMatrix project;
};

// Quotient complex top/bottom with induced differential; requires d(top) in
// top and d(bottom) in bottom, and top/bottom spanned by degree-homogeneous
// vectors.
GradedPiece graded_piece(const GradedModule& ambient, const QMatrix& d, const Subspace& top,
                         const Subspace& bottom, const std::string& tag);

struct ChainMap {
  const CochainComplex* source = nullptr;
  const CochainComplex* target = nullptr;
  QMatrix matrix;  // target-dim x source-dim, degree 0
};

struct QuasiIsoCertificate {
  bool is_chain_map = false;
  std::string chain_map_witness;  // degree/entry witness when not a chain map
  bool is_quasi_iso = false;
  std::map<int, std::pair<std::size_t, std::size_t>> h_dims;  // degree -> (src, tgt)
};

// Throws InputError when f is not a chain map (witness in the message);
// use try_quasi_iso_check for a non-throwing certificate.
QuasiIsoCertificate quasi_iso_check(const ChainMap& f);
QuasiIsoCertificate try_quasi_iso_check(const ChainMap& f);

}  // namespace lspace
