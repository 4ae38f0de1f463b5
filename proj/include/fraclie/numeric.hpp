#ifndef FRACLIE_NUMERIC_HPP
#define FRACLIE_NUMERIC_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraclie/catalog.hpp"
#include "fraclie/grid.hpp"
#include "fraclie/solutions.hpp"

namespace fraclie {

struct GaussRule {
  std::vector<double> nodes, weights;
};

/// n-point rule on [-1, 1] for the weight (1-x)^a (1+x)^b (Golub-Welsch).
GaussRule gauss_jacobi(int n, double a, double b);
inline GaussRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

struct QuadratureSpec {
  int nodes = 20;       // per panel
  int panels = 4;       // graded panels on [0, 1/2]
  double hint = 0.0;    // integrand behaves like s^hint near s = 0
  double tolerance = 1e-10;

  void validate() const;
};

/// (1/Gamma(1-alpha)) * integral_0^t f(s) (t-s)^(-alpha) ds.
/// Computed with n and 2n nodes; QuadratureFailure if they disagree.
double rl_integral_numeric(const std::function<double(double)>& f, double alpha, double t,
                           const QuadratureSpec& spec = {});

/// Riemann-Liouville derivative of order alpha in (0, 1): central
/// differences of the integral above with h = 1e-4 t and one Richardson step.
double rl_derivative_numeric(const std::function<double(double)>& f, double alpha, double t,
                             const QuadratureSpec& spec = {});

struct ResidualOptions {
  bool force_quadrature = false;
  QuadratureSpec quadrature;
};

/// D^alpha u - v_x and D^alpha v - c(u) u_x over the grid, using the
/// family's coupling. Exact power rule when both components have a
/// monomial-in-t form (unless forced otherwise), quadrature for the rest.
ResidualReport residual_system(const SolutionFamily& family, const GridSpec& grid, const ResidualOptions& opts = {});

/// D^alpha D^alpha u - (c(u) u_x)_x by the two-fold exact power rule.
/// Only u enters; Unsupported unless u has a monomial-in-t form.
ResidualReport sequential_residual(const SolutionFamily& family, const GridSpec& grid);

/// A function of z for the reduced checks. `monomial` = (c, p) marks
/// c z^p, which enables the exact fractional path.
struct ReducedFunction {
  std::function<double(double)> f;
  std::function<double(double)> df;  // optional; central differences otherwise
  std::optional<std::pair<double, Rational>> monomial;
  double hint = 0.0;

  static ReducedFunction power(double c, const Rational& p);
};

ResidualReport reduced_ode_residual(const SimilarityReduction& reduction, const Rational& alpha,
                                    const ReducedFunction& phi, const ReducedFunction& psi,
                                    const std::vector<double>& zs, const QuadratureSpec& spec = {});

struct EvolveOptions {
  double t0 = 1.0, t1 = 1.5;
  int steps = 40;
  double x0 = 1.0, x1 = 2.0;
  int nx = 41;
  bool record = false;  // keep every time level in the trajectory
};

struct TrajectoryRow {
  double t, x, u, v;
};

struct EvolveResult {
  int steps = 0;
  double dt = 0.0;
  double error_u = 0.0, error_v = 0.0;  // relative max error at t1
  double error() const { return std::max(error_u, error_v); }
  std::vector<double> xs;
  std::vector<double> u, v;  // final level
  std::vector<TrajectoryRow> trajectory;
};

/// Product-integration scheme for the system, started at t0 from the
/// family with the (0, t0] memory taken from its closed form. The
/// coupling is lagged one step, so each step is one linear solve.
/// Instability if the solution grows beyond 1e6 times its initial size.
EvolveResult evolve(const SolutionFamily& family, const EvolveOptions& opts);

/// Slope of log(error) against log(h) (least squares for more than two pairs).
double convergence_order(const std::vector<std::pair<double, double>>& h_error);

}  // namespace fraclie

#endif
