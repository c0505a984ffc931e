#include <doctest.h>

#include "errors.hpp"
#include "models.hpp"

using namespace lspace;

namespace {

// abelian two-term model a -> b over Q; its cochain words never grow under d,
// so the de Rham complex exists at every cap
LInfty two_term() {
  LInfty g;
  g.base = BaseAlgebra::rationals();
  g.gens.labels = {"a", "b"};
  g.gens.degrees = {1, 2};
  g.taylor.resize(2);
  g.taylor[1][{0}] = {{1, Rat(1)}};  // d(a) = b
  return g;
}

}  // namespace

TEST_CASE("de Rham complex of Bg: differentials square to zero") {
  LInfty g = formal_affine_gX(1, 1).g;
  DeRhamComplex dr = de_rham_of_Bg(g, 2);
  CHECK(dr.ce.complex.d_squares_to_zero());
  CHECK(composite_is_zero(dr.d_dr, dr.d_dr));
  CHECK(dr.complex.d_squares_to_zero());
  CHECK(dr.complex.d_respects_degree());
  CHECK(dr.rank_g == 1);
  CHECK(dr.total.rank() == 2);

  DeRhamComplex dt = de_rham_of_Bg(two_term(), 3);
  CHECK(dt.complex.d_squares_to_zero());
  CHECK(composite_is_zero(dt.d_dr, dt.d_dr));
}

TEST_CASE("form weight pieces are subcomplexes") {
  LInfty g = formal_affine_gX(1, 1).g;
  DeRhamComplex dr = de_rham_of_Bg(g, 2);
  std::size_t counted = 0;
  for (unsigned k = 0; k <= 2; ++k) {
    CochainComplex p = form_weight_piece(dr, k);
    CHECK(p.d_squares_to_zero());
    counted += p.dim();
    CHECK(form_weight_indices(dr, k).size() == p.dim());
  }
  CHECK(counted == dr.dim());

  // d_dr raises the weight by exactly one (weights live on words)
  auto weight_at = [&](std::size_t basis_index) {
    return dr.form_weight(basis_index / dr.ce.base_dim);
  };
  for (std::size_t j = 0; j < dr.dim(); ++j) {
    QVec v = dr.d_dr.col_vec(j);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!is_zero(v[i]))
        CHECK(weight_at(i) == weight_at(j) + 1);
  }
}

TEST_CASE("contraction removes one delta letter") {
  LInfty g = formal_affine_gX(1, 1).g;
  DeRhamComplex dr = de_rham_of_Bg(g, 2);
  for (std::size_t a = 0; a < dr.rank_g; ++a)
    for (std::size_t j = 0; j < dr.dim(); ++j) {
      QVec v = zero_vec(dr.dim());
      v[j] = 1;
      QVec c = dr_contract(dr, a, v);
      for (std::size_t i = 0; i < c.size(); ++i)
        if (!is_zero(c[i]))
          CHECK(dr.form_weight(i / dr.ce.base_dim) + 1 ==
                dr.form_weight(j / dr.ce.base_dim));
    }
}

TEST_CASE("shifted cotangent carries a canonical shifted symplectic form") {
  LInfty g = two_term();
  for (int n : {-1, 0, 1}) {
    ShiftedCotangent t = shifted_cotangent(g, n, 2);
    CHECK(t.shift == n);
    CHECK(validate_linfty(t.total).all_pass());
    SymplecticCertificate cert = symplectic_check(t.total, t.dr, t.canonical, 1);
    CAPTURE(n);
    CAPTURE(cert.witness);
    CHECK(cert.pass());
    CHECK(cert.shift == n);
  }
}

TEST_CASE("a degenerate two-form fails nondegeneracy") {
  // zero differential, so the section complexes have cohomology and the zero
  // pairing cannot induce an isomorphism on it
  LInfty g;
  g.base = BaseAlgebra::rationals();
  g.gens.labels = {"a"};
  g.gens.degrees = {1};
  g.taylor.resize(1);
  ShiftedCotangent t = shifted_cotangent(g, -1, 2);
  SymplecticCertificate good = symplectic_check(t.total, t.dr, t.canonical, 1);
  CHECK(good.pass());
  SymplecticCertificate cert = symplectic_check(t.total, t.dr, zero_vec(t.dr.dim()), 1);
  CHECK_FALSE(cert.pass());
}

TEST_CASE("composite_is_zero matches the dense product") {
  QMatrix a(2, 2), b(2, 2);
  a.at(0, 0) = 1;
  b.at(1, 1) = 1;
  CHECK(composite_is_zero(a, b));
  b.at(0, 0) = 1;
  CHECK_FALSE(composite_is_zero(a, b));
  CHECK(composite_is_zero(a, QMatrix(2, 2)));
}
