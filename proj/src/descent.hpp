#pragma once

#include "complex.hpp"
#include "mc.hpp"

namespace lspace {

// Cech machinery on finite combinatorial covers. Opens are abstract indices;
// the nerve lists the nonempty intersection components as faces, each carrying
// a section complex and restriction maps from its codimension-one parents.

struct Face {
  std::vector<std::size_t> vertices;  // strictly increasing open indices
  std::string label;
  CochainComplex sections;
  // parent[k]: the face over vertices-with-position-k-deleted containing this
  // component; restriction[k]: F(parent[k]) -> F(this). Empty on singletons.
  std::vector<std::size_t> parent;
  std::vector<QMatrix> restriction;
};

struct FiniteCover {
  std::vector<std::string> opens;
  std::vector<Face> faces;

  unsigned dimension() const;  // max |vertices| - 1 (0 when empty)
};

// Shape, closure under vertex deletion, chain-map restrictions, and
// functoriality (parallel deletion squares commute).
ValidationReport validate_cover(const FiniteCover& c);

// The face over the vertex subset `sub` containing `face`, with the iterated
// restriction matrix F(that face) -> F(face). Throws InputError when sub is
// not a subset of the face's vertices.
std::pair<std::size_t, QMatrix> cover_restriction(const FiniteCover& c, std::size_t face,
                                                  const std::vector<std::size_t>& sub);

// ---- the Cech cosimplicial diagram ----

struct CechBlock {
  std::vector<std::size_t> tuple;  // ordered, repeats allowed
  std::size_t face = 0;
  std::size_t offset = 0;
};

struct CechDiagram {
  // level[p] = direct sum over all (p+1)-tuples of opens whose support is a
  // face vertex set, one block per nerve component over that support.
  std::vector<CochainComplex> level;
  std::vector<std::vector<CechBlock>> blocks;
  std::vector<std::vector<QMatrix>> coface;        // coface[p][i]: p-1 -> p, i <= p
  std::vector<std::vector<QMatrix>> codegeneracy;  // codegeneracy[p][j]: p+1 -> p, j <= p

  bool check_identities(std::string* witness = nullptr) const;
};

CechDiagram cech_diagram(const FiniteCover& c, unsigned p_max);
CechDiagram cech_diagram(const FiniteCover& c);  // p_max = dimension + 1

// ---- conormalization and totalization ----

struct Conormalization {
  std::vector<CochainComplex> levels;  // N^p with the internal differential
  std::vector<QMatrix> basis;          // columns: homogeneous basis of N^p in Cech coords
  std::vector<QMatrix> cech_d;         // alternating coface sum N^p -> N^{p+1}, N coords
};

// N^p = intersection of the codegeneracy kernels, with the Moore cochain
// differential in the Cech direction. Throws InputError when a differential
// fails to preserve the kernels (invalid diagram).
Conormalization conormalize(const CechDiagram& d);

// First-quadrant-style double complex: columns are cochain complexes, the
// horizontal maps are degree-0 chain maps composing to zero.
struct DoubleComplex {
  std::vector<CochainComplex> columns;
  std::vector<QMatrix> horizontal;  // horizontal[p]: column p -> column p+1
};

DoubleComplex conormalized_double(const Conormalization& n);

// The blocks over strictly increasing tuples with the alternating coface sum.
// Quasi-isomorphic to the normalized complex, but no increasing tuple exists
// above the nerve dimension, so the totalization is complete rather than cut
// off at p_max (the cut inflates top cohomology).
DoubleComplex alternating_double(const CechDiagram& d);

struct TotalComplex {
  CochainComplex complex;             // degree = column index + internal degree
  std::vector<std::size_t> offset;    // block start per column
};

// D = horizontal + (-1)^p vertical. Throws InputError when the horizontal
// maps are not chain maps or do not compose to zero.
TotalComplex total_complex(const DoubleComplex& dc);

// DK applied to the connective chain data of TA (levels 0..n_max). Throws
// InputError when TA has cohomology basis elements in positive degrees.
SimplicialAbelian tot_cosimplicial(const Conormalization& n, unsigned n_max);

// ---- descent certification ----

struct DescentCertificate {
  bool equalizes = false;  // the two cofaces agree after the comparison
  std::string witness;
  QuasiIsoCertificate comparison;  // induced map global -> TA
  CochainComplex total;
  std::map<int, std::size_t> total_h;  // H(TA) dimensions

  bool pass() const {
    return equalizes && comparison.is_chain_map && comparison.is_quasi_iso;
  }
};

// comparison: a degree-0 matrix global -> Cech level 0.
DescentCertificate descent_check(const FiniteCover& c, const CochainComplex& global,
                                 const QMatrix& comparison);

// sigma_{<=1}(h)[1]: drop degrees above one, shift down; the abelian complex
// governing an MC fiber, concentrated in nonpositive degrees.
CochainComplex mc_fiber_truncation(const CochainComplex& h);

// descent_check after applying mc_fiber_truncation to the global complex and
// every face complex (restrictions and comparison cut down accordingly).
DescentCertificate mc_descent_fiber_check(const FiniteCover& c, const CochainComplex& global,
                                          const QMatrix& comparison);

}  // namespace lspace
