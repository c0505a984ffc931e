#include <doctest.h>

#include "base_algebra.hpp"
#include "errors.hpp"
#include "simplex_forms.hpp"

using namespace lspace;

TEST_CASE("stock algebras validate") {
  CHECK(validate_base_algebra(BaseAlgebra::rationals()).all_pass());
  CHECK(validate_base_algebra(BaseAlgebra::dual_numbers()).all_pass());
  CHECK(validate_base_algebra(BaseAlgebra::truncated_polynomial(3)).all_pass());

  // an odd exterior generator is a valid dg algebra but carries H^1, so the
  // connectivity check flags it; everything structural passes
  auto rep = validate_base_algebra(BaseAlgebra::dual_numbers(1, "e"));
  for (const auto& c : rep.checks)
    if (c.name != "nonpositive_cohomology") {
      CAPTURE(c.name);
      CHECK(c.pass);
    }
}

TEST_CASE("validation failure witnesses") {
  // eps * eps = 1 breaks nilpotency (and the unit quotient)
  BaseAlgebra a = BaseAlgebra::dual_numbers();
  a.mult[1][1] = {{0, Rat(1)}};
  auto rep = validate_base_algebra(a);
  CHECK_FALSE(rep.all_pass());

  // broken commutativity on an exterior pair
  BaseAlgebra e = BaseAlgebra::dual_numbers(1, "e");
  e.mult[1][1] = {{0, Rat(1)}};  // e*e = 1 violates koszul(1,1) = -1 skewness
  rep = validate_base_algebra(e);
  CHECK_FALSE(rep.all_pass());

  // differential of wrong degree
  BaseAlgebra d = BaseAlgebra::dual_numbers();
  d.d.at(0, 1) = 1;  // eps -> 1, degree 0 target
  rep = validate_base_algebra(d);
  REQUIRE(rep.find("grading") != nullptr);
  CHECK_FALSE(rep.find("grading")->pass);
  CHECK_FALSE(rep.find("grading")->witness.empty());

  // ideal not closed under multiplication by the algebra
  BaseAlgebra q = BaseAlgebra::truncated_polynomial(2);
  q.ideal = {1};  // x, but x*x = x^2 escapes the span
  rep = validate_base_algebra(q);
  CHECK_FALSE(rep.all_pass());

  // non-nilpotent ideal
  BaseAlgebra u;
  u.module.labels = {"1", "g"};
  u.module.degrees = {0, 0};
  u.unit = 0;
  u.mult.assign(2, std::vector<SparseVec>(2));
  u.mult[0][0] = {{0, Rat(1)}};
  u.mult[0][1] = {{1, Rat(1)}};
  u.mult[1][0] = {{1, Rat(1)}};
  u.mult[1][1] = {{1, Rat(1)}};  // idempotent: (g)^k never dies
  u.d = QMatrix(2, 2);
  u.ideal = {1};
  rep = validate_base_algebra(u);
  REQUIRE(rep.find("nilpotency") != nullptr);
  CHECK_FALSE(rep.find("nilpotency")->pass);
}

TEST_CASE("ideal powers and associated graded") {
  auto f = ideal_powers(BaseAlgebra::dual_numbers());
  CHECK(f.nilpotency_index == 2);
  CHECK(f.powers.back().dim() == 0);

  f = ideal_powers(BaseAlgebra::truncated_polynomial(2));
  CHECK(f.nilpotency_index == 3);
  CHECK(f.powers[0].dim() == 2);  // (x, x^2)
  CHECK(f.powers[1].dim() == 1);  // (x^2)

  auto gr = associated_graded(BaseAlgebra::truncated_polynomial(2));
  REQUIRE(gr.size() == 3);
  for (const auto& p : gr) {
    CHECK(p.complex.dim() == 1);
    CHECK(p.complex.d_squares_to_zero());
  }
}

TEST_CASE("ideal powers reject a non-nilpotent chain") {
  BaseAlgebra u;
  u.module.labels = {"1", "g"};
  u.module.degrees = {0, 0};
  u.unit = 0;
  u.mult.assign(2, std::vector<SparseVec>(2));
  u.mult[0][0] = {{0, Rat(1)}};
  u.mult[0][1] = {{1, Rat(1)}};
  u.mult[1][0] = {{1, Rat(1)}};
  u.mult[1][1] = {{1, Rat(1)}};
  u.d = QMatrix(2, 2);
  u.ideal = {1};
  CHECK_THROWS_AS(ideal_powers(u), InputError);
}

TEST_CASE("multiplication helpers") {
  BaseAlgebra a = BaseAlgebra::truncated_polynomial(3);
  QVec x = a.basis_vec(1);
  QVec x2 = a.mul(x, x);
  CHECK(x2 == a.basis_vec(2));
  CHECK(a.mul_basis(1, 2) == SparseVec{{3, Rat(1)}});
  // Q[x]/(x^4) is an honest quotient: x^2 * x^2 is exactly zero, no overflow
  CHECK_FALSE(a.pair_overflows(2, 2));
  CHECK(vec_is_zero(a.mul(x2, x2)));
}

TEST_CASE("overflow pairs guard truncated models") {
  // polynomial forms on the interval with degree cap 1: t * t leaves the model
  SimplexForms f = simplex_forms(1, 1);
  std::size_t t = f.index_of({1}, 0);
  CHECK(f.alg.pair_overflows(t, t));
  CHECK_THROWS_AS(f.alg.mul(f.alg.basis_vec(t), f.alg.basis_vec(t)), CapOverflowError);
  BaseAlgebra loose = f.alg;
  loose.strict_overflow = false;
  CHECK_NOTHROW(loose.mul(loose.basis_vec(t), loose.basis_vec(t)));
}

TEST_CASE("tensor cdga") {
  BaseAlgebra t = tensor_cdga(BaseAlgebra::dual_numbers(0, "a"),
                              BaseAlgebra::dual_numbers(0, "b"));
  CHECK(t.dim() == 4);
  CHECK(validate_base_algebra(t).all_pass());
  CHECK(ideal_powers(t).nilpotency_index == 3);  // (a)(b) survives one product

  // odd x odd: the two eps generators anticommute (connectivity aside)
  BaseAlgebra o = tensor_cdga(BaseAlgebra::dual_numbers(1, "a"),
                              BaseAlgebra::dual_numbers(1, "b"));
  for (const auto& c : validate_base_algebra(o).checks)
    if (c.name != "nonpositive_cohomology") CHECK(c.pass);
  std::size_t ia = o.module.index_of("a(x)1");
  std::size_t ib = o.module.index_of("1(x)b");
  SparseVec ab = o.mul_basis(ia, ib);
  SparseVec ba = o.mul_basis(ib, ia);
  REQUIRE(ab.size() == 1);
  REQUIRE(ba.size() == 1);
  CHECK(ab[0].second == -ba[0].second);
}

TEST_CASE("algebra maps and weak equivalences") {
  BaseAlgebra a = BaseAlgebra::dual_numbers();
  AlgebraMap id{&a, &a, QMatrix::identity(2)};
  CHECK(validate_algebra_map(id).all_pass());
  CHECK(weak_equivalence_check(id).is_weak_equivalence);

  // quotient to Q: an algebra map but not a weak equivalence
  BaseAlgebra q = BaseAlgebra::rationals();
  AlgebraMap pr{&a, &q, QMatrix(1, 2)};
  pr.matrix.at(0, 0) = 1;
  CHECK(validate_algebra_map(pr).all_pass());
  CHECK_FALSE(weak_equivalence_check(pr).is_weak_equivalence);

  // scaling the unit is not an algebra map
  AlgebraMap bad{&a, &a, QMatrix::identity(2).scaled(Rat(2))};
  CHECK_FALSE(validate_algebra_map(bad).all_pass());
}
