#include <cmath>

#include "doctest.h"

#include "fraclie/errors.hpp"
#include "fraclie/numeric.hpp"
#include "fraclie/solutions.hpp"

using namespace fraclie;

namespace {

Rational R(long p, long q = 1) { return make_rational(p, q); }

// Separable power pair u = A x^(1/m) t^(-α/m), v = B x^((m+1)/m) t^(-(m+1)α/m)
// with A and B from the C library gamma.
std::pair<double, double> power_pair_oracle(double m, double k, double al) {
  const double g0 = std::tgamma(1 - al / m), g1 = std::tgamma(1 - (m + 1) * al / m), g2 = std::tgamma(1 - (2 * m + 1) * al / m);
  const double A = std::pow(m * m * g0 / (k * k * (m + 1) * g2), 1 / (2 * m));
  return {A, A * g0 / g1 * m / (m + 1)};
}

}  // namespace

TEST_CASE("signed roots") {
  CHECK(signed_root_power(-8.0, R(1, 3), "b") == doctest::Approx(-2.0));
  CHECK(signed_root_power(-8.0, R(2, 3), "b") == doctest::Approx(4.0));
  CHECK_THROWS_AS(signed_root_power(-4.0, R(1, 2), "b"), NonrealRoot);
  CHECK_THROWS_AS(signed_root_power(0.0, R(-1, 3), "b"), DomainError);
  CHECK(exponent_hypothesis(R(-1, 4), R(1, 2)));
  CHECK_FALSE(exponent_hypothesis(R(1, 2), R(1, 2)));
}

TEST_CASE("family 19 matches the closed-form oracle") {
  const SolutionFamily f = family_19(R(2), R(1), R(1, 3));
  const auto [A, B] = power_pair_oracle(2.0, 1.0, 1.0 / 3.0);
  for (double x : {1.0, 1.7}) {
    for (double t : {0.5, 2.0}) {
      CHECK(f.u(x, t).value == doctest::Approx(A * std::sqrt(x) * std::pow(t, -1.0 / 6)).epsilon(1e-13));
      CHECK(f.v(x, t).value == doctest::Approx(B * std::pow(x, 1.5) * std::pow(t, -0.5)).epsilon(1e-13));
    }
  }
  CHECK(f.generator_id == "Case2.1-U4");
  CHECK(residual_system(f, f.reference_grid).max() < 1e-12);
}

TEST_CASE("family 19 parameter errors") {
  CHECK_THROWS_AS(family_19(R(2), R(1), R(1, 2)), NonrealRoot);
  CHECK_THROWS_AS(family_19(R(1), R(1), R(1, 3)), SingularParameter);
  CHECK_THROWS_AS(family_19(R(1, 4), R(1), R(1, 2)), HypothesisViolated);
  CHECK_THROWS_AS(family_19(R(-1), R(1), R(1, 2)), SingularParameter);
  CHECK_THROWS_AS(family_19(R(2), R(1), R(3, 2)), InvalidParameter);
  CHECK_NOTHROW(family_19(R(-1, 4), R(1), R(1, 2)));
}

TEST_CASE("family 21 is family 19 shifted") {
  const SolutionFamily f19 = family_19(R(2), R(3), R(1, 3));
  const SolutionFamily f21 = family_21(R(2), R(3), R(1, 3), R(1, 2));
  CHECK(f21.u(2.5, 1.2).value == doctest::Approx(f19.u(2.0, 1.2).value).epsilon(1e-14));
  CHECK(f21.v(2.5, 1.2).value == doctest::Approx(f19.v(2.0, 1.2).value).epsilon(1e-14));
}

TEST_CASE("sign flip lands on the transonic coupling") {
  const SolutionFamily f = family_21(R(1, 2), R(1), R(1, 5), R(0));
  const SolutionFamily g = sign_flip(f);
  CHECK(g.id == "21-flipped");
  CHECK(g.u(1.3, 0.8).value == -f.u(1.3, 0.8).value);
  CHECK(g.coupling.c(2.0) == -2.0);
  CHECK(residual_system(g, g.reference_grid).max() < 1e-12);
  CHECK(sign_flip(g).id == "21");
  CHECK_THROWS_AS(sign_flip(family_19(R(2), R(1), R(1, 3))), InvalidParameter);
}

TEST_CASE("family 5.1 coefficient note") {
  const SolutionFamily f = family_5_1(R(1), R(0), R(0), R(1, 2));
  REQUIRE(f.notes.size() == 1);
  const auto& n = f.notes.front();
  CHECK(n.id == "NOTE-5.1-coefficient");
  CHECK(n.values.at("computed") == doctest::Approx(std::tgamma(0.5) / std::tgamma(1.0)).epsilon(1e-13));
  CHECK(n.values.at("printed") == doctest::Approx(1 / std::tgamma(0.5)).epsilon(1e-13));
  CHECK_THROWS_AS(family_5_1(R(2), R(0), R(0), R(1, 2)), InvalidParameter);
}

TEST_CASE("degenerate families solve the system") {
  const SolutionFamily f54 = family_5_4(R(-1), R(1), R(2), R(1), R(1, 3));
  CHECK(residual_system(f54, f54.reference_grid).max() < 1e-10);
  const SolutionFamily f55 = family_5_5(R(1), R(3), R(0), R(1), R(1, 3));
  const auto r = residual_system(f55, f55.reference_grid);
  CHECK(r.path == EvalPath::Quadrature);
  CHECK(r.max() < 1e-8);
  CHECK_THROWS_AS(family_5_4(R(1), R(1), R(0), R(1), R(1, 2)), InvalidCase);
}

TEST_CASE("family 22 tangent solution") {
  const SolutionFamily f = family_22(R(1), R(1, 2), R(1), R(0));
  CHECK(residual_system(f, f.reference_grid).max() < 1e-10);
  CHECK(invariance_surface_residual(f.generator, f.alpha, f.u, f.v, f.reference_grid).max() < 1e-10);
}

TEST_CASE("lemma 2 exponents and residual") {
  const Lemma2Params p{R(2), R(1, 3), R(2), R(-1, 3), R(1), R(1)};
  const Lemma2Solution s = lemma2_solve(p);
  CHECK(s.lambda1.eval(p.alpha) == R(-1, 6));
  CHECK(s.lambda2.eval(p.alpha) == R(-1, 2));
  for (double z : {0.3, 1.0, 2.2}) {
    const auto r = lemma2_residual(s, z);
    CHECK(std::abs(r[0]) < 1e-13);
    CHECK(std::abs(r[1]) < 1e-13);
  }
  // P = m a1 - (m+1) a2 α = 4 + 1/3, Q = m b1 - b2 α = 5/3; oracle for c1.
  const double P = 13.0 / 3, Q = 5.0 / 3;
  const double c1 = std::pow(4 * std::tgamma(5.0 / 6) / (std::tgamma(1.0 / 6) * P * Q), 0.25);
  CHECK(s.c1 == doctest::Approx(c1).epsilon(1e-13));
  CHECK_THROWS_AS(lemma2_solve({R(1), R(1, 3), R(1), R(1), R(1), R(1)}), HypothesisViolated);
  CHECK_THROWS_AS(lemma2_solve({R(2), R(1, 3), R(1, 2), R(1), R(1), R(1)}), HypothesisViolated);
}

TEST_CASE("implicit curve reproduces the explicit families") {
  ImplicitCurve::Params p;
  p.m = R(2);
  p.k = R(1);
  p.alpha = R(1, 3);
  p.c1 = R(0);
  p.psi_lo = 0.0;
  p.psi_hi = 3.0;
  const ImplicitCurve curve(p);
  const SolutionFamily f21 = family_21(R(2), R(1), R(1, 3), R(0));
  for (int i = 1; i < 10; ++i) {
    const double x = curve.x_min() + (curve.x_max() - curve.x_min()) * i / 10;
    const double psi = curve.psi_of_x(x);
    CHECK(curve.x_of_psi(psi) == doctest::Approx(x).epsilon(1e-12));
    CHECK(psi == doctest::Approx(f21.v(x, 1.0).value).epsilon(1e-10));
    CHECK(curve.phi_of_psi(psi) == doctest::Approx(f21.u(x, 1.0).value).epsilon(1e-10));
  }
  CHECK_THROWS_AS(curve.psi_of_x(curve.x_max() + 1.0), Error);
}

TEST_CASE("make_family dispatch") {
  CHECK(make_family("19", {{"m", R(2)}, {"alpha", R(1, 3)}}).id == "19");
  CHECK_THROWS_AS(make_family("42", {{"alpha", R(1, 3)}}), InvalidParameter);
  CHECK_THROWS_AS(make_family("19", {{"alpha", R(1, 3)}}), InvalidParameter);
}
