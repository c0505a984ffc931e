#include <doctest.h>

#include "derham.hpp"
#include "errors.hpp"
#include "simplex_forms.hpp"

using namespace lspace;

TEST_CASE("simplex forms: d^2 = 0 and grading, n <= 3, cap <= 4") {
  for (unsigned n = 0; n <= 3; ++n)
    for (unsigned cap = 1; cap <= 4; ++cap) {
      SimplexForms f = simplex_forms(n, cap);
      CAPTURE(n);
      CAPTURE(cap);
      CHECK(composite_is_zero(f.alg.d, f.alg.d));
      CochainComplex c = f.alg.as_complex();
      CHECK(c.d_respects_degree());
    }
}

TEST_CASE("simplex forms: algebra axioms on small cases") {
  // axiom sweep on the sizes where the cubic associativity scan is cheap; the
  // ideal-related checks do not apply (forms carry no augmentation ideal)
  for (auto [n, cap] : {std::pair<unsigned, unsigned>{1, 4}, {2, 2}}) {
    auto rep = validate_base_algebra(simplex_forms(n, cap).alg);
    for (const char* name : {"grading", "unital", "associativity",
                             "graded_commutativity", "d_squared_zero", "leibniz"}) {
      const auto* c = rep.find(name);
      REQUIRE(c != nullptr);
      CAPTURE(name);
      CHECK(c->pass);
    }
  }
}

TEST_CASE("simplex forms: constants are the only degree-0 classes") {
  for (unsigned n = 1; n <= 2; ++n) {
    Cohomology h = cohomology(simplex_forms(n, 3).alg.as_complex());
    CHECK(h.dim(0) == 1);
  }
}

TEST_CASE("face pullbacks are cochain algebra maps") {
  for (unsigned n = 1; n <= 3; ++n) {
    SimplexForms big = simplex_forms(n, 3);
    SimplexForms small = simplex_forms(n - 1, 3);
    for (unsigned i = 0; i <= n; ++i) {
      QMatrix p = face_pullback(big, small, i);
      // chain map: p d = d p
      CHECK((p * big.alg.d) == (small.alg.d * p));
      // sends 1 to 1
      QVec one = p.apply(big.alg.basis_vec(0));
      CHECK(one == small.alg.basis_vec(0));
    }
  }
}

TEST_CASE("simplicial identities of the pullbacks") {
  // cosimplicial identity d^j d^i = d^i d^{j-1} (i < j) pulled back:
  // (d^i)* (d^j)* = (d^{j-1})* (d^i)*
  SimplexForms f2 = simplex_forms(2, 3);
  SimplexForms f1 = simplex_forms(1, 3);
  SimplexForms f0 = simplex_forms(0, 3);
  for (unsigned j = 0; j <= 2; ++j)
    for (unsigned i = 0; i < j; ++i) {
      QMatrix lhs = face_pullback(f1, f0, i) * face_pullback(f2, f1, j);
      QMatrix rhs = face_pullback(f1, f0, j - 1) * face_pullback(f2, f1, i);
      CAPTURE(i);
      CAPTURE(j);
      CHECK(lhs == rhs);
    }

  // s^j d^j = id and s^j d^{j+1} = id: (d^j)* (s^j)* = id on forms(n)
  for (unsigned n = 0; n <= 2; ++n) {
    SimplexForms fn = simplex_forms(n, 3);
    SimplexForms fn1 = simplex_forms(n + 1, 3);
    for (unsigned j = 0; j <= n; ++j) {
      QMatrix s = degeneracy_pullback(fn, fn1, j);
      CHECK((face_pullback(fn1, fn, j) * s) == QMatrix::identity(fn.dim()));
      CHECK((face_pullback(fn1, fn, j + 1) * s) == QMatrix::identity(fn.dim()));
    }
  }
}

TEST_CASE("integration over the simplex") {
  // interval: int t^k dt = 1/(k+1)
  SimplexForms f1 = simplex_forms(1, 4);
  for (unsigned k = 0; k <= 3; ++k) {
    QVec v = zero_vec(f1.dim());
    v[f1.index_of({k}, 1)] = 1;
    CHECK(integrate_simplex(f1, v) == Rat(1, k + 1));
  }

  // triangle: int dt1 dt2 = 1/2, int t1 dt1 dt2 = 1/6, int t1 t2 dt1 dt2 = 1/24
  SimplexForms f2 = simplex_forms(2, 3);
  QVec v = zero_vec(f2.dim());
  v[f2.index_of({0, 0}, 3)] = 1;
  CHECK(integrate_simplex(f2, v) == Rat(1, 2));
  v = zero_vec(f2.dim());
  v[f2.index_of({1, 0}, 3)] = 1;
  CHECK(integrate_simplex(f2, v) == Rat(1, 6));
  v = zero_vec(f2.dim());
  v[f2.index_of({1, 1}, 3)] = 1;
  CHECK(integrate_simplex(f2, v) == Rat(1, 24));

  // tetrahedron: int dt1 dt2 dt3 = 1/6
  SimplexForms f3 = simplex_forms(3, 2);
  v = zero_vec(f3.dim());
  v[f3.index_of({0, 0, 0}, 7)] = 1;
  CHECK(integrate_simplex(f3, v) == Rat(1, 6));

  // non-top input is rejected
  CHECK_THROWS_AS(integrate_simplex(f1, f1.alg.basis_vec(0)), InputError);
}

TEST_CASE("circle model") {
  CircleForms c = circle_forms(2);
  CHECK(c.dim() == 6);  // 1, p_2, p_3, dt, t dt, t^2 dt
  for (const auto& chk : validate_base_algebra(c.alg).checks)
    if (chk.name != "nonpositive_cohomology") {
      CAPTURE(chk.name);
      CHECK(chk.pass);
    }
  CHECK(ideal_powers(c.alg).nilpotency_index <= 3);

  Cohomology h = cohomology(c.alg.as_complex());
  CHECK(h.dim(0) == 1);
  CHECK(h.dim(1) == 1);

  // int t^k dt = 1/(k+1), normalized so int dt = 1
  for (unsigned k = 0; k <= 2; ++k) {
    QVec v = zero_vec(c.dim());
    v[c.one_index(k)] = 1;
    CHECK(integrate_circle(c, v) == Rat(1, k + 1));
  }
  CHECK_THROWS_AS(integrate_circle(c, c.alg.basis_vec(0)), InputError);

  // d(p_k) = (k t^{k-1} - 1) dt integrates to zero
  QVec dp = c.alg.as_complex().d.apply(c.alg.basis_vec(c.fun_index(2)));
  CHECK(integrate_circle(c, dp) == Rat(0));
}

TEST_CASE("betti circle and the comparison map") {
  BaseAlgebra b = betti_circle();
  for (const auto& chk : validate_base_algebra(b).checks)
    if (chk.name != "nonpositive_cohomology") CHECK(chk.pass);
  CHECK(b.module.degrees[1] == 1);

  CircleForms c = circle_forms(2);
  QVec dt = zero_vec(c.dim());
  dt[c.one_index(0)] = 1;
  QMatrix phi = circle_comparison(c, dt);
  AlgebraMap f{&b, &c.alg, phi};
  CHECK(validate_algebra_map(f).all_pass());

  // quasi-isomorphism of the underlying complexes
  CochainComplex cb = b.as_complex();
  CochainComplex cc = c.alg.as_complex();
  auto cert = quasi_iso_check(ChainMap{&cb, &cc, phi});
  CHECK(cert.is_quasi_iso);

  // a one-form with zero integral is not a volume form
  QVec exact = c.alg.d.apply(c.alg.basis_vec(c.fun_index(2)));
  CHECK_THROWS_AS(circle_comparison(c, exact), InputError);
  // a function is rejected outright
  CHECK_THROWS_AS(circle_comparison(c, c.alg.basis_vec(0)), InputError);
}
