#include <cmath>

#include <Eigen/Dense>

#include "doctest.h"

#include "fraclie/catalog.hpp"
#include "fraclie/errors.hpp"
#include "fraclie/lie.hpp"

using namespace fraclie;

namespace {

Rational R(long p, long q = 1) { return make_rational(p, q); }

MonomialSum var(Var v, long e = 1) { return MonomialSum::power(v, ExponentExpr(R(e))); }

VectorField dx() { return {1, 0, 0, 0}; }
VectorField dt() { return {0, 1, 0, 0}; }
VectorField x_dx() { return {var(Var::X), 0, 0, 0}; }
VectorField t_dt() { return {0, var(Var::T), 0, 0}; }

/// exp(-eps M) z by a plain Taylor series.
Eigen::VectorXd taylor_action(const Eigen::MatrixXd& M, const Eigen::VectorXd& z, double eps) {
  Eigen::VectorXd term = z, sum = z;
  for (int k = 1; k < 60; ++k) {
    term = (-eps / k) * (M * term);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("vector field brackets") {
  CHECK(bracket(x_dx(), dx()) == VectorField{-1, 0, 0, 0});
  CHECK(bracket(dx(), x_dx()) == dx());
  CHECK(bracket(dt(), t_dt()) == dt());
  CHECK(bracket(dx(), dt()).is_zero());
  // apply: (x d/dx)(x^3) = 3 x^3
  CHECK(x_dx().apply(var(Var::X, 3)) == ScalarExpr(3) * var(Var::X, 3));
}

TEST_CASE("structure constants of the affine algebra") {
  const LieAlgebra alg = structure_constants({"A", "B"}, {dx(), x_dx()});
  CHECK(alg.bracket_of_basis(0, 1) == AlgebraElement{{1, 0}});
  CHECK(alg.bracket_of_basis(1, 0) == AlgebraElement{{-1, 0}});
  CHECK(jacobi_holds(alg));
  CHECK(alg.format(AlgebraElement{{2, -1}}) == "2·A - B");
}

TEST_CASE("closure failure and decomposition") {
  const VectorField x2dx{var(Var::X, 2), 0, 0, 0};
  CHECK_THROWS_AS(structure_constants({"A", "C"}, {dx(), x2dx}), NotClosed);
  CHECK_THROWS_AS(decompose(t_dt(), std::vector<VectorField>{dx(), x_dx()}), NotInSpan);
  const auto e = decompose(ScalarExpr(3) * dx() + ScalarExpr(-2) * x_dx(), std::vector<VectorField>{dx(), x_dx()});
  CHECK(e == AlgebraElement{{3, -2}});
}

TEST_CASE("adjoint closed forms match a Taylor series") {
  for (const auto& c : {ClassificationCase::generic(), ClassificationCase::regular(R(1), R(2)),
                        ClassificationCase::degenerate(R(1))}) {
    const Rational alpha = R(1, 3);
    const LieAlgebra alg = c.is_power_law() ? basis_change(c, alpha) : x_algebra(c);
    const auto n = alg.dim();
    for (std::size_t i = 0; i < n; ++i) {
      const AlgebraElement Y = AlgebraElement::unit(n, i);
      const Matrix ad = ad_matrix(Y, alg);
      Eigen::MatrixXd M(n, n);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) M(r, s) = ad[r][s].eval_double(alpha);
      for (std::size_t j = 0; j < n; ++j) {
        const AlgebraElement Z = AlgebraElement::unit(n, j);
        const auto closed = adjoint_closed_form(Y, Z, alg);
        REQUIRE(closed.has_value());
        for (double eps : {-1.3, 0.4, 2.0}) {
          const Eigen::VectorXd want = taylor_action(M, Eigen::VectorXd::Unit(n, j), eps);
          const auto num = adjoint_action(Y, Z, eps, alpha, alg);
          for (std::size_t k = 0; k < n; ++k) {
            CHECK((*closed)[k].eval(alpha, eps) == doctest::Approx(want(k)).epsilon(1e-12));
            CHECK(num[k] == doctest::Approx(want(k)).epsilon(1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("exp polynomials") {
  const ExpPoly p = ExpPoly::monomial(2, 1, -1);  // 2 ε e^(-ε)
  CHECK(p.eval(R(1, 2), 1.5) == doctest::Approx(3.0 * std::exp(-1.5)));
  CHECK((p + ScalarExpr(-1) * p).is_zero());
  CHECK(ExpPoly::constant(0).is_zero());
}

TEST_CASE("equivalence solve recovers a known scaling") {
  // Ad(e^{ε B}) A = e^{-ε}·A in the affine algebra: A ~ 3A at ε = -ln 3.
  const LieAlgebra alg = structure_constants({"A", "B"}, {dx(), x_dx()});
  EquivalenceTarget target;
  target.fixed = AlgebraElement{{3, 0}};
  const auto out = equivalence_solve(AlgebraElement{{1, 0}}, target, AlgebraElement{{0, 1}}, alg, R(1, 2));
  REQUIRE(out.solution.has_value());
  const double got = std::exp(-out.solution->eps) / out.solution->scale;
  CHECK(got == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(out.solution->residual <= 1e-10);
}

TEST_CASE("equivalence solve reports unreachable targets") {
  const LieAlgebra alg = structure_constants({"A", "B"}, {dx(), x_dx()});
  EquivalenceTarget target;
  target.fixed = AlgebraElement{{0, 1}};
  const auto out = equivalence_solve(AlgebraElement{{1, 0}}, target, AlgebraElement{{0, 1}}, alg, R(1, 2));
  CHECK_FALSE(out.solution.has_value());
  CHECK_FALSE(out.reason.empty());
}

TEST_CASE("direct sum check") {
  const auto c = ClassificationCase::regular(R(1), R(2));
  const auto [p, q] = y_partition(c);
  CHECK(direct_sum_check(basis_change(c), p, q));
  CHECK_FALSE(direct_sum_check(x_algebra(c), {0, 1}, {2, 3}));
}
