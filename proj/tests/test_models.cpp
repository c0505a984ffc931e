#include <doctest.h>

#include "errors.hpp"
#include "models.hpp"

using namespace lspace;

TEST_CASE("formal affine models validate, d <= 2, J <= 2") {
  for (unsigned d = 1; d <= 2; ++d)
    for (unsigned J = 1; J <= 2; ++J) {
      FormalAffineModel m = formal_affine_gX(d, J);
      CAPTURE(d);
      CAPTURE(J);
      CHECK(m.g.rank() == d);
      CHECK(validate_base_algebra(m.g.base).all_pass());
      CHECK(validate_linfty(m.g).all_pass());
      CHECK_FALSE(m.g.is_flat());  // the curving carries the de Rham data
      // base index lookup agrees with the stored keys
      for (std::size_t i = 0; i < m.keys.size(); ++i)
        CHECK(m.base_index(m.keys[i].first, m.keys[i].second) == i);
    }
}

TEST_CASE("jet cohomology: functions in degree 0, nothing above") {
  for (unsigned d = 1; d <= 2; ++d)
    for (unsigned J = 1; J <= 2; ++J) {
      JetCertificate c = jet_cohomology_check(formal_affine_gX(d, J), J + 1);
      CAPTURE(d);
      CAPTURE(J);
      CAPTURE(c.witness);
      CHECK(c.weight_graded);
      CHECK(c.positive_clear);
      CHECK(c.function_dims);
      CHECK(c.ring);
      CHECK(c.pass());
    }
}

TEST_CASE("betti loop is the shifted tangent space") {
  for (unsigned d = 1; d <= 2; ++d) {
    LInfty g = formal_affine_gX(d, 1).g;
    CHECK(betti_loop_is_shifted_tangent(g).all_pass());
    LoopModel loop = betti_loop(g);
    CHECK(loop.flavor == "betti");
    CHECK(validate_linfty(loop.algebra).all_pass());
  }
}

TEST_CASE("regroup_scalars inverts extend_scalars on the free module") {
  LInfty g = formal_affine_gX(1, 1).g;
  BaseAlgebra c = betti_circle();
  LInfty r = regroup_scalars(extend_scalars(g, c), g.base, c);
  CHECK(r.rank() == g.rank() * c.dim());
  CHECK(validate_linfty(r).all_pass());
}

TEST_CASE("loop cohomology matches the regraded truncated de Rham forms") {
  // d + J <= cap keeps every genuine class inside the capped window
  HKRCertificate h1 = hkr_check(formal_affine_gX(1, 1), 3);
  CAPTURE(h1.witness);
  CHECK(h1.pass);
  CHECK(h1.h == h1.expected);
  CHECK(h1.expected.at(0) == 2);   // 1, y
  CHECK(h1.expected.at(-1) == 2);  // dy, y dy

  HKRCertificate h2 = hkr_check(formal_affine_gX(2, 1), 4);
  CAPTURE(h2.witness);
  CHECK(h2.pass);
  CHECK(h2.expected.at(0) == 3);
  CHECK(h2.expected.at(-1) == 6);
  CHECK(h2.expected.at(-2) == 3);
}

TEST_CASE("loop comparison: Betti to de Rham along a volume form") {
  LInfty g = formal_affine_gX(1, 1).g;
  CircleForms c = circle_forms(4);

  QVec dt = zero_vec(c.dim());
  dt[c.one_index(0)] = 1;
  QVec two_dt = dt;
  two_dt[c.one_index(0)] = 2;
  // (1 + t(1-t)) dt, scaled to unit integral
  QVec bump = zero_vec(c.dim());
  bump[c.one_index(0)] = 1;
  bump[c.one_index(1)] = 1;
  bump[c.one_index(2)] = -1;
  Rat total = integrate_circle(c, bump);
  for (auto& x : bump) x /= total;

  for (const QVec* omega : {&dt, &two_dt, &bump}) {
    WeakEquivalenceResult w = loop_comparison(g, *omega, 4, 3);
    CHECK(w.is_weak_equivalence);
    CHECK(w.route == "chains-graded");
  }

  // invariance under nonzero rational rescaling
  QVec scaled = dt;
  scaled[c.one_index(0)] = Rat(-3, 7);
  CHECK(loop_comparison(g, scaled, 4, 3).is_weak_equivalence);
}

TEST_CASE("de Rham loop validates") {
  LInfty g = formal_affine_gX(1, 1).g;
  LoopModel loop = de_rham_loop(g, 2);
  CHECK(loop.flavor == "derham");
  CHECK(validate_linfty(loop.algebra).all_pass());
}

TEST_CASE("aksz pairing on the loop space of a symplectic target") {
  CircleForms c = circle_forms(2);
  QVec dt = zero_vec(c.dim());
  dt[c.one_index(0)] = 1;
  AKSZPairing p = aksz_pairing(1, 0, dt, 2);
  CHECK(p.nu_integral == Rat(1));
  CHECK(p.target.dim == 2);

  AKSZCertificate cert = aksz_certify(p, 0);
  CHECK(cert.pass());
  CHECK(cert.sym.shift == -1);
  CHECK(cert.sym.closed);
  CHECK(cert.sym.skew);
  CHECK(cert.sym.nondegeneracy.is_quasi_iso);

  // a one-form with zero integral is rejected as the propagator
  QVec exact = c.alg.d.apply(c.alg.basis_vec(c.fun_index(2)));
  CHECK_THROWS_AS(aksz_pairing(1, 0, exact, 2), InputError);
}

TEST_CASE("de rham space of a base has a one-point MC space") {
  LInfty g = de_rham_space(BaseAlgebra::dual_numbers());
  CHECK(validate_linfty(g).all_pass());
  CHECK(g.rank() == 0);
}
