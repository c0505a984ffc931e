#pragma once

#include <optional>

#include "linfty.hpp"
#include "simplex_forms.hpp"

namespace lspace {

// Maurer-Cartan machinery. Hosts are curved L-infinity algebras with a finite
// Taylor tower, typically restrict_to_ideal(g) for g over a nilpotent base,
// possibly with scalars extended by a form algebra. Elements are degree-1
// vectors in U = base (x) generators.

// mc(alpha) = sum_n (1/n!) l_n(alpha^n); degree-2 result. Throws InputError
// when alpha is not homogeneous of degree 1.
QVec mc_value(const LInfty& host, const QVec& alpha);

struct MCResidual {
  bool pass = false;
  QVec residual;
};

// mc_value wrapped as accept/reject with the residual as witness. For hosts
// over Q the lower central series is checked to terminate; for form-extended
// hosts nilpotency is the caller's precondition (checked before extending).
MCResidual mc_verify(const LInfty& host, const QVec& alpha);

// ---- square-zero extensions and obstruction theory ----

// B -> B/K for K a square-zero dg ideal of B spanned by basis elements and
// contained in the nilpotent ideal.
struct SquareZeroExtension {
  const BaseAlgebra* big = nullptr;
  std::vector<std::size_t> kernel;  // basis indices of B spanning K
};

ValidationReport validate_square_zero(const SquareZeroExtension& ext);

struct ObstructionResult {
  QVec cocycle;            // mc residual of the echelon lift, host coordinates
  QVec obstruction_class;  // coordinates in H^2 of the twisted kernel complex
  bool lifted = false;
  QVec lift;                // verified MC element over B when lifted
  std::size_t fiber_dim = 0;  // torsor dimension over g (x) K when lifted
  std::vector<QVec> fiber;    // degree-1 kernel directions, host coordinates
};

// alpha: an MC element over B/K presented in restrict_to_ideal(g) coordinates
// with zero kernel components (the echelon section of the quotient). The
// obstruction cocycle is mc(alpha) in g (x) K; its class lives in H^2 of
// g (x) K with the alpha-twisted differential. Throws InputError when alpha
// fails MC over the quotient, when the residual escapes g (x) K, or when the
// twisted complex fails d^2 = 0.
ObstructionResult obstruction_lift(const LInfty& g, const SquareZeroExtension& ext,
                                   const QVec& alpha);

// ---- the artinian tower ----

struct TowerLedgerEntry {
  unsigned stage = 0;      // lifting from A/I^stage to A/I^{stage+1}
  std::size_t branch = 0;  // parent branch index within the stage
  bool lifted = false;
  QVec obstruction_class;
  std::size_t fiber_dim = 0;
};

struct TowerResult {
  std::vector<QVec> vertices;  // verified MC elements, restrict_to_ideal coords
  std::vector<TowerLedgerEntry> ledger;
  unsigned stages = 0;
  bool branch_bound_hit = false;
};

// Stage-by-stage solve along the powers of the ideal. Branches probe the
// particular lift plus each torsor basis direction, capped by branch_bound;
// fiber dimensions are recorded in the ledger rather than enumerated. Every
// emitted vertex passes mc_verify over the full base. Requires each ideal
// power to be spanned by basis elements.
TowerResult solve_mc_tower(const LInfty& g, std::size_t branch_bound);

// Filtration weight of each generator of restrict_to_ideal(g): the largest k
// with the coefficient in I^k. Throws InputError when some power of the ideal
// is not spanned by basis elements.
std::vector<unsigned> ideal_weights(const LInfty& g);

// ---- abelian theory ----

// Direct affine solve of l_0 + l_1(alpha) = 0 for hosts with no components of
// arity >= 2 (over Q). Oracle for the tower on abelian fixtures.
struct AffineSolveResult {
  bool solvable = false;
  QVec point;
  std::vector<QVec> directions;  // basis of ker l_1 in degree 1
};
AffineSolveResult solve_mc_abelian(const LInfty& host);

// dim of pi_0(MC(g)) as an affine space over H^1, for abelian flat g over a
// nilpotent base; nullopt when the solution set is empty. Existence is decided
// by the tower, the torsor quotient by linear algebra on the host.
std::optional<std::size_t> mc_pi0_dim(const LInfty& g);

// ---- Dold-Kan ----

// Nonnegatively graded chain data: dims[k] = dim C_k, boundary[k]: C_k ->
// C_{k-1} for k >= 1 (boundary[0] is empty and unused).
struct ChainData {
  std::vector<std::size_t> dims;
  std::vector<QMatrix> boundary;

  void check() const;  // shapes and boundary^2 = 0; throws InputError
  std::vector<std::size_t> homology_dims() const;
};

struct SimplicialAbelian {
  std::vector<std::size_t> dims;                 // levels 0..top
  std::vector<std::vector<QMatrix>> face;        // face[n][i]: level n -> n-1
  std::vector<std::vector<QMatrix>> degeneracy;  // degeneracy[n][j]: n -> n+1

  // Simplicial identities as matrix equations (within the stored levels).
  bool check_identities(std::string* witness = nullptr) const;
};

// Levels 0..n_max of the simplicial abelian group with DK(C)_n the direct sum
// of C_k over surjections [n] ->> [k].
SimplicialAbelian dold_kan(const ChainData& c, unsigned n_max);

// Moore normalization N_n = intersection of ker(d_i), i < n, with boundary
// (-1)^n d_n. Degeneracies of s are not consulted.
ChainData normalize_simplicial(const SimplicialAbelian& s);

// tau_{<=0}(h[1]) of a cochain complex as chain data: C_0 = Z^1(h) and
// C_k = h^{1-k} for k >= 1, so H_0 = H^1(h) matches pi_0 of the MC space.
ChainData mc_truncation(const CochainComplex& h);

// The degree-1/degree-2 part of an abelian host as a plain cochain complex.
CochainComplex abelian_complex(const LInfty& host);

struct DKComparison {
  bool pass = false;
  bool mc_nonempty = false;
  std::size_t mc_pi0 = 0;  // dimension over Q
  std::size_t dk_pi0 = 0;
  std::vector<std::size_t> dk_level_dims;
};

// pi_0 of MC via the tower against H_0 of the normalization of DK(tau(h[1])).
DKComparison mc_abelian_compare(const LInfty& g, unsigned n_max);

// ---- paths ----

struct PathResult {
  bool found = false;
  QVec path;    // element of host (x) forms on the interval, U coordinates
  unsigned cap = 0;
  std::string report;  // exhaustion note when not found
};

// Searches for a 1-simplex between verified vertices v0, v1 in
// host (x) simplex_forms(1, cap): one global linear solve for abelian hosts,
// otherwise stage-by-stage along the generator weights (sound; complete only
// within the cap and the greedy stage choices).
PathResult path_exists(const LInfty& host, const std::vector<unsigned>& weights,
                       const QVec& v0, const QVec& v1, unsigned cap);

// Convenience form for g over a nilpotent base with coordinate ideal powers.
PathResult path_exists(const LInfty& g, const QVec& v0, const QVec& v1, unsigned cap);

// ---- MC simplicial sets ----

struct MCSimplexSet {
  unsigned n_max = 0;
  unsigned cap = 0;
  std::vector<LInfty> hosts;        // hosts[n] = h (x) forms(n, cap)
  std::vector<SimplexForms> forms;  // per level
  std::vector<std::vector<QVec>> simplices;  // verified, per level
};

MCSimplexSet mc_simplex_set(const LInfty& g, unsigned n_max, unsigned cap);

MCResidual mc_simplex_verify(const MCSimplexSet& s, unsigned level, const QVec& alpha);
// Verifies and stores; returns the index at its level. Throws InputError when
// the element fails MC.
std::size_t mc_add_simplex(MCSimplexSet& s, unsigned level, const QVec& alpha);
QVec mc_simplex_face(const MCSimplexSet& s, unsigned level, unsigned i, const QVec& alpha);
QVec mc_simplex_degeneracy(const MCSimplexSet& s, unsigned level, unsigned j,
                           const QVec& alpha);

}  // namespace lspace
