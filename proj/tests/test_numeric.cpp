#include <cmath>
#include <random>

#include "doctest.h"

#include "fraclie/errors.hpp"
#include "fraclie/numeric.hpp"
#include "fraclie/solutions.hpp"

using namespace fraclie;

namespace {
Rational R(long p, long q = 1) { return make_rational(p, q); }

double beta(double a, double b) { return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b); }
}  // namespace

TEST_CASE("Gauss-Jacobi integrates weighted polynomials exactly") {
  // ∫_{-1}^{1} (1-x)^a (1+x)^b (1+x)^j dx = 2^(a+b+j+1) B(a+1, b+j+1)
  for (auto [a, b] : {std::pair{-0.5, 0.0}, {-0.25, 0.5}, {0.0, 0.0}, {0.3, -0.7}}) {
    const GaussRule g = gauss_jacobi(8, a, b);
    REQUIRE(g.nodes.size() == 8);
    for (int j = 0; j < 16; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(1 + g.nodes[i], j);
      const double want = std::pow(2.0, a + b + j + 1) * beta(a + 1, b + j + 1);
      CHECK(s == doctest::Approx(want).epsilon(1e-12));
    }
  }
  CHECK_THROWS(gauss_jacobi(0, 0.0, 0.0));
}

TEST_CASE("fractional integral and derivative of powers") {
  for (double al : {0.25, 0.5, 0.8}) {
    for (double t : {0.5, 1.0, 3.0}) {
      // I^(1-α) 1 = t^(1-α)/Γ(2-α)
      CHECK(rl_integral_numeric([](double) { return 1.0; }, al, t) ==
            doctest::Approx(std::pow(t, 1 - al) / std::tgamma(2 - al)).epsilon(1e-10));
      // D^α s^2 = 2/Γ(3-α) t^(2-α)
      CHECK(rl_derivative_numeric([](double s) { return s * s; }, al, t) ==
            doctest::Approx(2 / std::tgamma(3 - al) * std::pow(t, 2 - al)).epsilon(1e-7));
    }
  }
}

TEST_CASE("singular integrands need the grading hint") {
  QuadratureSpec spec;
  spec.hint = -0.5;
  const double got = rl_derivative_numeric([](double s) { return 1 / std::sqrt(s); }, 0.5, 2.0, spec);
  CHECK(std::abs(got) < 1e-8);  // t^(α-1) is in the kernel
  QuadratureSpec bad;
  bad.nodes = 0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("random smooth integrands against the power rule") {
  std::mt19937 rng(0);
  std::uniform_real_distribution<double> coef(-2.0, 2.0), alpha(0.1, 0.9), time(0.3, 2.5);
  for (int i = 0; i < 15; ++i) {
    const double c0 = coef(rng), c1 = coef(rng), c3 = coef(rng), al = alpha(rng), t = time(rng);
    auto f = [=](double s) { return c0 + c1 * s + c3 * s * s * s; };
    const double want = c0 * std::pow(t, -al) / std::tgamma(1 - al) + c1 * std::pow(t, 1 - al) / std::tgamma(2 - al) +
                        c3 * 6 * std::pow(t, 3 - al) / std::tgamma(4 - al);
    CHECK(rl_derivative_numeric(f, al, t) == doctest::Approx(want).epsilon(1e-7));
  }
}

TEST_CASE("forced quadrature agrees with the exact path") {
  const SolutionFamily f = family_19(R(2), R(1), R(1, 3));
  GridSpec g = f.reference_grid;
  g.nx = 4;
  g.nt = 4;
  ResidualOptions o;
  o.force_quadrature = true;
  const auto q = residual_system(f, g, o);
  CHECK(q.path == EvalPath::Quadrature);
  CHECK(q.max() < 1e-6);
  CHECK(residual_system(f, g).path == EvalPath::ExactMonomial);
}

TEST_CASE("sequential residual needs only the series of u") {
  const SolutionFamily f19 = family_19(R(2), R(1), R(1, 3));
  CHECK(sequential_residual(f19, f19.reference_grid).max() < 1e-12);
  SolutionFamily f55 = family_5_5(R(1), R(3), R(0), R(1), R(1, 3));
  REQUIRE_FALSE(f55.v_series.has_value());
  CHECK(sequential_residual(f55, f55.reference_grid).max() < 1e-12);
  f55.u_series.reset();
  CHECK_THROWS_AS(sequential_residual(f55, f55.reference_grid), Unsupported);
}

TEST_CASE("reduced residual with exact monomials") {
  // Generic U1 with a = 1: φ = Γ(α)/Γ(2α) z^(2α-1), ψ = z^(α-1).
  const Rational alpha = R(1, 4);
  const auto c = ClassificationCase::generic();
  const auto list = optimal_system(c);
  const auto red = similarity_reduction(find_element(list, "U1"), c, alpha, {R(1)});
  const double coef = std::tgamma(0.25) / std::tgamma(0.5);
  const auto phi = ReducedFunction::power(coef, R(-1, 2));
  const auto psi = ReducedFunction::power(1.0, R(-3, 4));
  const auto rep = reduced_ode_residual(red, alpha, phi, psi, {0.5, 1.0, 2.0});
  CHECK(rep.path == EvalPath::ExactMonomial);
  CHECK(rep.max() < 1e-13);
  CHECK_THROWS_AS(reduced_ode_residual(red, alpha, phi, psi, {0.0, 1.0}), DomainError);
}

TEST_CASE("time stepper converges at first order") {
  const SolutionFamily f = family_19(R(2), R(1), R(1, 3));
  std::vector<std::pair<double, double>> he;
  for (int steps : {20, 40, 80}) {
    EvolveOptions o;
    o.steps = steps;
    const auto r = evolve(f, o);
    CHECK(r.u.size() == 41);
    he.emplace_back(r.dt, r.error());
  }
  CHECK(convergence_order(he) == doctest::Approx(1.0).epsilon(0.1));
  EvolveOptions rec;
  rec.steps = 3;
  rec.record = true;
  CHECK(evolve(f, rec).trajectory.size() == 4 * 41);
}

TEST_CASE("x-independent data stays x-independent") {
  const SolutionFamily f = family_5_1(R(0), R(2), R(3), R(1, 3));
  EvolveOptions o;
  o.x0 = 0.0;
  o.x1 = 1.0;
  const auto r = evolve(f, o);
  for (double u : r.u) CHECK(u == doctest::Approx(r.u.front()).epsilon(1e-13));
}

TEST_CASE("convergence order of synthetic data") {
  CHECK(convergence_order({{0.1, 0.02}, {0.05, 0.005}}) == doctest::Approx(2.0));
  CHECK(convergence_order({{0.1, 1e-3}, {0.05, 5e-4}, {0.025, 2.5e-4}}) == doctest::Approx(1.0));
}
