#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "base_algebra.hpp"
#include "complex.hpp"

namespace lspace {

// Sorted multiset of module generator indices.
using Word = std::vector<std::size_t>;

// Curved L-infinity algebra over a BaseAlgebra: a free graded module on the
// listed generators together with the corestricted coderivation components
// D_n : Sym^n(V[1]) -> V[1], stored as structure constants on sorted
// generator words. Values live in base (x) V, indexed by b*rank+m.
struct LInfty {
  BaseAlgebra base;
  GradedModule gens;  // generator labels and degrees (degrees of v, not v[1])
  // taylor[n][word] = D_n on that word; missing entries are zero.
  std::vector<std::map<Word, SparseVec>> taylor;

  std::size_t rank() const { return gens.dim(); }
  std::size_t udim() const { return base.dim() * rank(); }
  std::size_t uindex(std::size_t b, std::size_t m) const { return b * rank() + m; }
  std::size_t ubase(std::size_t u) const { return u / rank(); }
  std::size_t ugen(std::size_t u) const { return u % rank(); }

  int gen_sdeg(std::size_t m) const { return gens.degrees[m] - 1; }  // degree in V[1]
  int usdeg(std::size_t u) const {  // degree in A (x) V[1]
    return base.module.degrees[ubase(u)] + gen_sdeg(ugen(u));
  }
  int udeg(std::size_t u) const { return usdeg(u) + 1; }  // unshifted degree
  std::string ulabel(std::size_t u) const;

  unsigned max_arity() const;
  bool is_flat() const;     // no curving component
  bool is_abelian() const;  // no components of arity != 1
  void check_shape() const;

  // D_n evaluated on a word of U-basis indices (any order, repeats allowed);
  // A-multilinear extension with Koszul signs, including the base-differential
  // Leibniz term at arity 1. Returns a sparse element of U.
  SparseVec eval_taylor(const std::vector<std::size_t>& uword) const;

  // Multilinear extension to arbitrary degree-homogeneous U-vectors.
  QVec eval_taylor_vecs(const std::vector<QVec>& args) const;

  static LInfty abelian(const BaseAlgebra& base, const GradedModule& gens,
                        const QMatrix& d1);  // d1: rank x rank over Q scalars
  // Nilpotent Lie algebra with basis x, y, z, [x,y] = z, over Q.
  static LInfty heisenberg();
};

ValidationReport validate_linfty(const LInfty& g);

// All sorted generator words of length n (no repeats of odd V[1]-degree gens).
std::vector<Word> enumerate_words(const LInfty& g, unsigned n);
std::vector<Word> enumerate_words_upto(const LInfty& g, unsigned cap);

// Koszul sign of extracting the given positions (ascending) of `word` to the
// front, preserving relative order; degrees are V[1]-degrees of the letters.
int unshuffle_sign(const std::vector<int>& sdegs, const std::vector<std::size_t>& positions);

// ---- brackets ----

// l_n on a generator word, with decalage signs relative to D_n.
SparseVec bracket(const LInfty& g, const Word& w);
// mc uses the same sign convention; see mc.hpp.

// ---- Chevalley-Eilenberg complexes ----

struct CEComplex {
  CochainComplex complex;
  std::vector<Word> words;  // basis: index = word_index * dim(base) + b
  unsigned cap = 0;
  bool cochain = false;
  std::size_t base_dim = 0;

  std::size_t index(std::size_t w, std::size_t b) const { return w * base_dim + b; }
  // Product of two basis elements (cochain flavor only); throws CapOverflowError
  // on a nonzero product beyond the cap.
  SparseVec mul(std::size_t i, std::size_t j, const LInfty& g) const;
  QVec mul_vec(const QVec& x, const QVec& y, const LInfty& g) const;
};

// Chain complex (Sym(V[1]), d) truncated to words of length <= cap. Curving
// terms that leave the cap with a nonzero coefficient throw CapOverflowError
// unless drop_weight_raising is set; dropped terms always raise the ideal-adic
// weight of the base coefficient, so the associated-graded complexes of the
// ideal filtration are unaffected.
CEComplex ce_chains(const LInfty& g, unsigned cap, bool drop_weight_raising = false);

// Cochain algebra (Sym(V^dual[-1]), d) truncated to words of length <= cap.
// Throws CapOverflowError when a bracket term would leave the cap.
CEComplex ce_cochains(const LInfty& g, unsigned cap);

// ---- filtrations, base change ----

struct LowerCentralSeries {
  std::vector<Subspace> levels;  // F^1 = U, then F^2, ... last is zero if nilpotent
  bool nilpotent = false;
  unsigned index = 0;  // least k with F^k = 0 when nilpotent
};

LowerCentralSeries lower_central_series(const LInfty& g);

// g (x)_A (A (x) c): same generators over the tensored base.
LInfty extend_scalars(const LInfty& g, const BaseAlgebra& c);

// g (x) I as a curved L-infinity algebra over Q: generators are pairs
// (ideal basis element, generator); nilpotency is inherited from I.
LInfty restrict_to_ideal(const LInfty& g);

// Flatten to an equivalent algebra over Q (generators = base x gens pairs).
LInfty flatten(const LInfty& g);

// ---- modules / vector bundles ----

struct LInftyModule {
  LInfty total;       // structure on g (+) V
  std::size_t split;  // generators [0, split) belong to g, the rest to V
};

// Conditions (1) and (2): inclusion/projection are strict L-infinity maps and
// no component takes two or more module inputs.
ValidationReport validate_module(const LInftyModule& m);

LInfty total_space(const LInfty& g, const LInftyModule& m);

// Adjoint module g[shift] (tangent-type; shift = k+1 gives T[k]).
LInftyModule adjoint_module(const LInfty& g, int shift);
// Coadjoint module with dual degrees -deg - shift (shift = n-2 gives the
// fiber of T*[n], shift = -1 the unshifted cotangent duals).
LInftyModule coadjoint_module(const LInfty& g, int shift);

// C*(g, V[1]): the weight-one part of the cochains of the total space.
CochainComplex module_sections(const LInfty& g, const LInftyModule& m, unsigned cap);
// Same complex with the word basis exposed (words: algebra letters of length
// <= cap, then exactly one module letter).
CEComplex module_sections_ce(const LInfty& g, const LInftyModule& m, unsigned cap);

// ---- maps ----

// Strict map of curved L-infinity algebras covering a map of base algebras:
// a degree-0 Q-linear map on U compatible with the base action.
struct LInftyMap {
  const LInfty* source = nullptr;
  const LInfty* target = nullptr;
  QMatrix base_map;  // target base dim x source base dim
  QMatrix u_matrix;  // target udim x source udim
};

// Checks: base map is a filtered cdga map, u_matrix is degree 0 and
// base-equivariant, and the map intertwines every Taylor component.
ValidationReport validate_linfty_map(const LInftyMap& f);
LInftyMap compose_maps(const LInftyMap& g, const LInftyMap& f);  // g after f
LInftyMap identity_map(const LInfty& g);
// The map chi (x) id_V from g to extend-scalars-of-g along a base map chi.
LInftyMap base_change_map(const LInfty& s, const LInfty& t, const QMatrix& chi);

struct WeakEquivalenceResult {
  bool is_weak_equivalence = false;
  unsigned cap = 0;
  std::string route;  // "chains" or "chains-graded"
  std::vector<ValidationCheck> levels;
};

// Decided on word-capped CE chains: directly when both sides are curving
// free, and level by level on the associated graded of the ideal-adic
// filtration otherwise (curving raises ideal weight, so each level is an
// honest complex).
WeakEquivalenceResult is_weak_equivalence(const LInftyMap& f, unsigned cap);

// The induced map on word-capped CE chains.
ChainMap ce_chain_map(const LInftyMap& f, const CEComplex& cs, const CEComplex& ct);

}  // namespace lspace
