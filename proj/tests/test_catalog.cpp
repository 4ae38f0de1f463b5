#include <cmath>

#include "doctest.h"

#include "fraclie/catalog.hpp"
#include "fraclie/errors.hpp"

using namespace fraclie;

namespace {
Rational R(long p, long q = 1) { return make_rational(p, q); }
const ScalarExpr a = ScalarExpr::alpha();
}  // namespace

TEST_CASE("case construction and validation") {
  CHECK(ClassificationCase::classify(R(1), R(1), R(1, 3)).label() == "2.2");
  CHECK(ClassificationCase::classify(R(1), R(2), R(1, 3)).label() == "2.1");
  CHECK_THROWS_AS(ClassificationCase::regular(R(1), R(0)), InvalidCase);
  CHECK_THROWS_AS(ClassificationCase::regular(R(0), R(1)), InvalidCase);
  CHECK_THROWS_AS(ClassificationCase::degenerate(R(1)).validate(R(1, 2)), InvalidCase);
  CHECK_THROWS(ClassificationCase::generic().validate(R(3, 2)));
  // D = 2mα + α - m
  CHECK(ClassificationCase::regular(R(1), R(2)).d_expr().eval(R(1, 3)) == R(-1, 3));
  CHECK(ClassificationCase::degenerate(R(1)).m_at(R(1, 3)) == R(1));
}

TEST_CASE("generic commutators: [X2, X3] = (1-α)/α X2") {
  const LieAlgebra alg = x_algebra(ClassificationCase::generic());
  REQUIRE(alg.dim() == 3);
  CHECK(alg.bracket_of_basis(0, 2) == AlgebraElement{{1, 0, 0}});
  CHECK(alg.bracket_of_basis(1, 2) == AlgebraElement{{0, (1 - a) / a, 0}});
  CHECK(alg.bracket_of_basis(0, 1).is_zero());
  CHECK(jacobi_holds(alg));
}

TEST_CASE("brackets agree with direct vector field brackets") {
  for (const auto& c : {ClassificationCase::generic(), ClassificationCase::regular(R(3), R(-1, 4)),
                        ClassificationCase::degenerate(R(2))}) {
    const auto g = generators(c);
    const LieAlgebra alg = x_algebra(c);
    for (std::size_t i = 0; i < g.fields.size(); ++i)
      for (std::size_t j = 0; j < g.fields.size(); ++j)
        CHECK(alg.field(alg.bracket_of_basis(i, j)) == bracket(g.fields[i], g.fields[j]));
  }
}

TEST_CASE("expected tables match in every case") {
  const auto generic = ClassificationCase::generic();
  CHECK(compare_commutators(x_algebra(generic), expected_commutator_table(generic)).empty());
  for (const auto& c : {ClassificationCase::regular(R(1), R(2)), ClassificationCase::regular(R(1), R(-3, 2)),
                        ClassificationCase::degenerate(R(1))}) {
    const LieAlgebra y = basis_change(c);
    CHECK(compare_commutators(y, expected_commutator_table(c)).empty());
    CHECK(compare_adjoint(y, expected_adjoint_table(c)).empty());
  }
}

TEST_CASE("Y basis spans the same fields") {
  for (const auto& c : {ClassificationCase::regular(R(1), R(2)), ClassificationCase::degenerate(R(1))}) {
    const LieAlgebra x = x_algebra(c), y = basis_change(c);
    const auto yx = y_in_x(c);
    for (std::size_t i = 0; i < yx.size(); ++i) CHECK(x.field(yx[i]) == y.basis()[i]);
    const auto [p, q] = y_partition(c);
    CHECK(direct_sum_check(y, p, q));
  }
}

TEST_CASE("basis change rejects the degenerate pole and generic cases") {
  CHECK_THROWS_AS(basis_change(ClassificationCase::regular(R(1), R(1)), R(1, 3)), DegenerateDenominator);
  CHECK_THROWS_AS(basis_change(ClassificationCase::generic()), InvalidCase);
  CHECK_NOTHROW(basis_change(ClassificationCase::regular(R(1), R(2)), R(1, 3)));
}

TEST_CASE("optimal systems") {
  CHECK(optimal_system(ClassificationCase::generic()).size() == 3);
  CHECK(optimal_system(ClassificationCase::regular(R(1), R(2))).size() == 6);
  CHECK(optimal_system(ClassificationCase::degenerate(R(1))).size() == 5);
  for (const auto& c : {ClassificationCase::regular(R(1), R(2)), ClassificationCase::degenerate(R(1))}) {
    const LieAlgebra x = x_algebra(c), y = basis_change(c);
    for (const auto& e : optimal_system(c)) {
      std::vector<Rational> p(e.params.size(), R(1));
      CHECK_MESSAGE(x.field(e.x_coords(p)) == y.field(e.y_coords(p)), e.id);
    }
  }
  const auto list = optimal_system(ClassificationCase::generic());
  const auto& u1 = find_element(list, "U1");
  CHECK_THROWS_AS(u1.check_params({R(2)}), InvalidParameter);
  CHECK_NOTHROW(u1.check_params({R(-1)}));
  CHECK_THROWS(find_element(list, "U9"));
  CHECK(param_allowed(ParamDomain::SignOrZero, R(0)));
  CHECK_FALSE(param_allowed(ParamDomain::Sign, R(0)));
}

TEST_CASE("kernel solutions") {
  const auto k = kernel_solutions(R(3, 2), 2);
  REQUIRE(k.size() == 2);
  CHECK(k[0].exponent == R(1, 2));
  CHECK(k[1].exponent == R(-1, 2));
  CHECK(k[1].in_domain);
  CHECK_THROWS_AS(kernel_solutions(R(1, 2), 2), InvalidParameter);
}

TEST_CASE("generic U1 reduction against a power-law oracle") {
  // D^α z^p = Γ(p+1)/Γ(p+1-α) z^(p-α); with p = 2α - 1 this is Γ(2α)/Γ(α) z^(α-1).
  const Rational alpha = R(1, 3);
  const auto c = ClassificationCase::generic();
  const auto list = optimal_system(c);
  const auto& el = find_element(list, "U1");
  const auto red = similarity_reduction(el, c, alpha, {R(1)});
  REQUIRE(red.has_invariant_solutions);
  const double al = alpha.get_d(), p = 2 * al - 1;
  const double coef = std::tgamma(al) / std::tgamma(2 * al);
  for (double z : {0.5, 1.0, 3.0}) {
    ReducedState s;
    s.z = z;
    s.phi = coef * std::pow(z, p);
    s.dphi = coef * p * std::pow(z, p - 1);
    s.frac_phi = coef * std::tgamma(p + 1) / std::tgamma(p + 1 - al) * std::pow(z, p - al);
    s.psi = 1.0;
    s.frac_psi = 0.0;
    const auto r = red.residual(s);
    CHECK(std::abs(r[0]) < 1e-13);
    CHECK(std::abs(r[1]) < 1e-13);
  }
}

TEST_CASE("invariance surface residual vanishes for invariant functions") {
  // v = x t^(α-1) is invariant under X1 + X2, and so is any constant u.
  const Rational alpha = R(1, 2);
  const auto c = ClassificationCase::generic();
  const auto g = generators(c);
  const VectorField X = g.fields[0] + g.fields[1];
  JetFn u = [](double, double) { return Jet{2.0, 0.0, 0.0, 0.0}; };
  JetFn v = [](double x, double t) {
    const double s = std::pow(t, -0.5);
    return Jet{x * s, s, -0.5 * x * s / t, 0.0};
  };
  const GridSpec grid{0.0, 1.0, 5, 0.5, 2.0, 5};
  CHECK(invariance_surface_residual(X, alpha, u, v, grid).max() < 1e-14);
}

TEST_CASE("catalog json has the versioned layout") {
  const auto doc = catalog_json(ClassificationCase::degenerate(R(1)));
  CHECK(doc["schema"] == "fraclie-catalog/1");
  CHECK(doc["optimal_system"].size() == 5);
  CHECK(doc.contains("adjoint"));
  CHECK_FALSE(catalog_json(ClassificationCase::generic()).contains("adjoint"));
}
