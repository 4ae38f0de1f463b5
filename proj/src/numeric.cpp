#include "fraclie/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include <Eigen/Dense>

#include "fraclie/errors.hpp"
#include "fraclie/fractional.hpp"
#include "fraclie/special.hpp"

namespace fraclie {

// --------------------------------------------------------------- quadrature

namespace {

GaussRule golub_welsch(int n, double a, double b) {
  if (n < 1) throw InvalidParameter("quadrature needs at least one node");
  if (!(a > -1.0 && b > -1.0)) throw InvalidParameter("Jacobi exponents must exceed -1");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    J(k, k) = k == 0 ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double j = k + 1.0, sj = 2.0 * j + a + b;
      const double num = 4.0 * j * (j + a) * (j + b) * (j + a + b);
      const double den = sj * sj * (sj + 1.0) * (sj - 1.0);
      J(k, k + 1) = J(k + 1, k) = std::sqrt(num / den);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 =
      std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 2.0);
  GaussRule r;
  for (int k = 0; k < n; ++k) {
    const double v0 = es.eigenvectors()(0, k);
    r.nodes.push_back(es.eigenvalues()(k));
    r.weights.push_back(mu0 * v0 * v0);
  }
  return r;
}

}  // namespace

GaussRule gauss_jacobi(int n, double a, double b) {
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, GaussRule> cache;
  const auto key = std::make_tuple(n, a, b);
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  GaussRule r = golub_welsch(n, a, b);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(r)).first->second;
}

void QuadratureSpec::validate() const {
  if (nodes < 2 || panels < 1) throw InvalidParameter("quadrature needs nodes >= 2 and panels >= 1");
  if (!(tolerance > 0.0)) throw InvalidParameter("quadrature tolerance must be positive");
  if (!(hint > -1.0)) throw InvalidParameter("singularity hint must exceed -1");
}

namespace {

/// integral_0^1 f(t sigma) (1 - sigma)^(-alpha) d sigma with n nodes per part.
double unit_integral(const std::function<double(double)>& f, double alpha, double t, const QuadratureSpec& spec, int n) {
  const GaussRule gj = gauss_jacobi(n, -alpha, 0.0);
  double right = 0.0;
  for (std::size_t i = 0; i < gj.nodes.size(); ++i) right += gj.weights[i] * f(t * (0.75 + 0.25 * gj.nodes[i]));
  right *= std::pow(4.0, alpha - 1.0);

  // sigma = y^q / 2 turns s^p into a smooth y^(q(p+1)-1) factor.
  const double q = std::max(1.0, std::ceil(6.0 / (spec.hint + 1.0)));
  const GaussRule gl = gauss_legendre(n);
  double left = 0.0;
  for (int panel = 0; panel < spec.panels; ++panel) {
    const double y0 = static_cast<double>(panel) / spec.panels, y1 = static_cast<double>(panel + 1) / spec.panels;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double y = y0 + (y1 - y0) * (gl.nodes[i] + 1.0) / 2.0;
      const double sigma = 0.5 * std::pow(y, q);
      const double jac = 0.5 * q * std::pow(y, q - 1.0);
      left += gl.weights[i] * (y1 - y0) / 2.0 * f(t * sigma) * std::pow(1.0 - sigma, -alpha) * jac;
    }
  }
  return left + right;
}

}  // namespace

double rl_integral_numeric(const std::function<double(double)>& f, double alpha, double t,
                           const QuadratureSpec& spec) {
  spec.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("numeric derivative needs alpha in (0, 1)");
  if (!(t > 0.0)) throw DomainError("t must be positive");
  const double coarse = unit_integral(f, alpha, t, spec, spec.nodes);
  const double fine = unit_integral(f, alpha, t, spec, 2 * spec.nodes);
  if (!std::isfinite(fine) || std::abs(fine - coarse) > spec.tolerance * std::max(1.0, std::abs(fine))) {
    throw QuadratureFailure("refinements disagree at t=" + std::to_string(t) + ": " + std::to_string(coarse) +
                            " vs " + std::to_string(fine));
  }
  return std::pow(t, 1.0 - alpha) / std::tgamma(1.0 - alpha) * fine;
}

double rl_derivative_numeric(const std::function<double(double)>& f, double alpha, double t,
                             const QuadratureSpec& spec) {
  const double h = 1e-4 * t;
  auto central = [&](double step) {
    return (rl_integral_numeric(f, alpha, t + step, spec) - rl_integral_numeric(f, alpha, t - step, spec)) /
           (2.0 * step);
  };
  const double d1 = central(h), d2 = central(h / 2.0);
  return (4.0 * d2 - d1) / 3.0;
}

// ---------------------------------------------------------------- residuals

namespace {

/// sum_i a_i(x) F(p_i) t^(p_i - alpha): the exact fractional derivative in t.
double exact_frac(const TimeSeries& s, const Rational& alpha, double x, double t) {
  double r = 0.0;
  for (const auto& term : s) {
    const Rational p = term.power.eval(alpha);
    const double fac = power_rule_factor(p, alpha);
    if (fac == 0.0) continue;
    r += term.coeff(x)[0] * fac * std::pow(t, Rational(p - alpha).get_d());
  }
  return r;
}

double coupling_term(const Coupling& c, double u, double ux) { return ux == 0.0 ? 0.0 : c.c(u) * ux; }

ResidualReport new_report(const std::string& check, const SolutionFamily& f, const GridSpec& grid) {
  ResidualReport r;
  r.check = check;
  r.subject = "family " + f.id;
  r.grid = grid;
  r.parameters = f.parameters;
  r.parameters["coupling"] = f.coupling.label;
  return r;
}

void require_domain(const SolutionFamily& f, double x, double t) {
  if (f.in_domain && !f.in_domain(x, t)) {
    throw DomainError("grid node (" + std::to_string(x) + ", " + std::to_string(t) + ") lies outside the domain of family " +
                      f.id);
  }
}

}  // namespace

ResidualReport residual_system(const SolutionFamily& family, const GridSpec& grid, const ResidualOptions& opts) {
  grid.validate();
  const bool exact_u = family.u_series && !opts.force_quadrature;
  const bool exact_v = family.v_series && !opts.force_quadrature;
  ResidualReport rep = new_report("residual_system", family, grid);
  rep.path = exact_u && exact_v ? EvalPath::ExactMonomial : EvalPath::Quadrature;
  const double al = family.alpha.get_d();
  QuadratureSpec qu = opts.quadrature, qv = opts.quadrature;
  qu.hint = std::max(family.u_hint, -0.999);
  qv.hint = std::max(family.v_hint, -0.999);

  std::vector<double> r1(grid.size()), r2(grid.size());
  parallel_for(grid.size(), [&](std::size_t n) {
    const double x = grid.x(static_cast<int>(n % grid.nx)), t = grid.t(static_cast<int>(n / grid.nx));
    require_domain(family, x, t);
    const Jet u = family.u(x, t), v = family.v(x, t);
    const double du = exact_u ? exact_frac(*family.u_series, family.alpha, x, t)
                              : rl_derivative_numeric([&](double s) { return family.u(x, s).value; }, al, t, qu);
    const double dv = exact_v ? exact_frac(*family.v_series, family.alpha, x, t)
                              : rl_derivative_numeric([&](double s) { return family.v(x, s).value; }, al, t, qv);
    r1[n] = du - v.dx;
    r2[n] = dv - coupling_term(family.coupling, u.value, u.dx);
  });
  ResidualAccumulator acc({"eq1", "eq2"});
  for (std::size_t n = 0; n < grid.size(); ++n) {
    acc.add(0, r1[n]);
    acc.add(1, r2[n]);
  }
  rep.components = acc.finish();
  return rep;
}

ResidualReport sequential_residual(const SolutionFamily& family, const GridSpec& grid) {
  grid.validate();
  if (!family.u_series) {
    throw Unsupported("family " + family.id + " has no monomial-in-t form of u for the two-fold power rule");
  }
  const Rational& alpha = family.alpha;
  struct Term {
    double factor;
    double power;
    XProfile coeff;
  };
  std::vector<Term> terms;
  for (const auto& term : *family.u_series) {
    const Rational p = term.power.eval(alpha);
    const double f1 = power_rule_factor(p, alpha);
    if (f1 == 0.0) continue;
    const Rational p1 = p - alpha;
    if (p1 <= -1) throw Unsupported("intermediate exponent " + to_string(p1) + " is not above -1");
    const double f2 = power_rule_factor(p1, alpha);
    if (f2 == 0.0) continue;
    terms.push_back({f1 * f2, Rational(p1 - alpha).get_d(), term.coeff});
  }
  ResidualReport rep = new_report("sequential_residual", family, grid);
  rep.path = EvalPath::ExactMonomial;
  std::vector<double> r(grid.size());
  parallel_for(grid.size(), [&](std::size_t n) {
    const double x = grid.x(static_cast<int>(n % grid.nx)), t = grid.t(static_cast<int>(n / grid.nx));
    require_domain(family, x, t);
    double lhs = 0.0;
    for (const auto& term : terms) lhs += term.factor * term.coeff(x)[0] * std::pow(t, term.power);
    const Jet u = family.u(x, t);
    const double rhs = u.dx == 0.0 && u.dxx == 0.0
                           ? 0.0
                           : family.coupling.dc(u.value) * u.dx * u.dx + family.coupling.c(u.value) * u.dxx;
    r[n] = lhs - rhs;
  });
  ResidualAccumulator acc({"sequential"});
  for (double v : r) acc.add(0, v);
  rep.components = acc.finish();
  return rep;
}

ReducedFunction ReducedFunction::power(double c, const Rational& p) {
  ReducedFunction r;
  const double pd = p.get_d();
  r.f = [=](double z) { return c * std::pow(z, pd); };
  r.df = [=](double z) { return c * pd * std::pow(z, pd - 1.0); };
  r.monomial = std::make_pair(c, p);
  r.hint = pd;
  return r;
}

ResidualReport reduced_ode_residual(const SimilarityReduction& reduction, const Rational& alpha,
                                    const ReducedFunction& phi, const ReducedFunction& psi,
                                    const std::vector<double>& zs, const QuadratureSpec& spec) {
  if (!reduction.has_invariant_solutions || !reduction.residual) {
    throw Unsupported("element " + reduction.element_id + " has no reduced system");
  }
  if (reduction.fractional) {
    for (double z : zs) {
      if (!(z > 0.0)) throw DomainError("z grid must be positive for a fractional reduction");
    }
  }
  auto deriv = [](const ReducedFunction& g, double z) {
    if (g.df) return g.df(z);
    const double h = 1e-3 * std::max(std::abs(z), 1e-3);
    return (-g.f(z + 2 * h) + 8 * g.f(z + h) - 8 * g.f(z - h) + g.f(z - 2 * h)) / (12 * h);
  };
  const double al = alpha.get_d();
  bool quadrature = false;
  auto frac = [&](const ReducedFunction& g, double z) {
    if (g.monomial) {
      const double fac = power_rule_factor(g.monomial->second, alpha);
      return fac == 0.0 ? 0.0 : g.monomial->first * fac * std::pow(z, Rational(g.monomial->second - alpha).get_d());
    }
    QuadratureSpec s = spec;
    s.hint = std::max(g.hint, -0.999);
    return rl_derivative_numeric(g.f, al, z, s);
  };
  ResidualAccumulator acc({"eq1", "eq2"});
  for (double z : zs) {
    ReducedState st;
    st.z = z;
    st.phi = phi.f(z);
    st.psi = psi.f(z);
    st.dphi = deriv(phi, z);
    st.dpsi = deriv(psi, z);
    if (reduction.fractional) {
      st.frac_phi = frac(phi, z);
      st.frac_psi = frac(psi, z);
      quadrature = quadrature || !phi.monomial || !psi.monomial;
    }
    const auto r = reduction.residual(st);
    acc.add(0, r[0]);
    acc.add(1, r[1]);
  }
  ResidualReport rep;
  rep.check = "reduced_ode_residual";
  rep.subject = reduction.element_id;
  rep.path = !reduction.fractional ? EvalPath::Analytic : quadrature ? EvalPath::Quadrature : EvalPath::ExactMonomial;
  rep.components = acc.finish();
  rep.grid = {zs.front(), zs.back(), static_cast<int>(zs.size()), 0.0, 0.0, 0};
  rep.parameters["alpha"] = to_string(alpha);
  return rep;
}

// ------------------------------------------------------------------ evolve

namespace {

/// (1/Gamma(1-alpha)) * integral_{s_{j-1}}^{s_j} of the linear interpolant
/// times (t_n - s)^(-alpha); a = t_n - s_j, b = a + dt. Returns the weights
/// of the left and right nodal values.
std::pair<double, double> product_weights(double a, double b, double alpha, double g) {
  const double e1 = 1.0 - alpha, e2 = 2.0 - alpha;
  const double k0 = (std::pow(b, e1) - std::pow(a, e1)) / e1;
  const double k1 = (b * k0 - (std::pow(b, e2) - std::pow(a, e2)) / e2) / (b - a);
  return {(k0 - k1) / g, k1 / g};
}

/// Exact (1/Gamma(1-alpha)) integral_0^t w(s)(t-s)^(-alpha) ds for a series.
double exact_integral(const TimeSeries& s, const Rational& alpha, double x, double t) {
  double r = 0.0;
  for (const auto& term : s) {
    const Rational p = term.power.eval(alpha);
    const double g = special::gamma(Rational(p + 1)) / special::gamma(Rational(p + 2 - alpha));
    r += term.coeff(x)[0] * g * std::pow(t, Rational(p + 1 - alpha).get_d());
  }
  return r;
}

}  // namespace

EvolveResult evolve(const SolutionFamily& family, const EvolveOptions& o) {
  if (!family.u_series || !family.v_series) {
    throw Unsupported("evolve needs a family with a monomial-in-t form for the warm start");
  }
  if (!(o.t0 > 0.0) || !(o.t1 > o.t0)) throw InvalidParameter("evolve needs 0 < t0 < t1");
  if (o.steps < 1 || o.nx < 5 || !(o.x1 > o.x0)) throw InvalidParameter("evolve needs steps >= 1 and nx >= 5");
  const Rational& alpha = family.alpha;
  const double al = alpha.get_d();
  if (!(al > 0.0 && al < 1.0)) throw InvalidParameter("evolve needs alpha in (0, 1)");
  const double g1a = std::tgamma(1.0 - al);
  const int nx = o.nx, N = o.steps;
  const double dt = (o.t1 - o.t0) / N, hx = (o.x1 - o.x0) / (nx - 1);

  EvolveResult res;
  res.steps = N;
  res.dt = dt;
  for (int i = 0; i < nx; ++i) res.xs.push_back(o.x0 + hx * i);
  const auto& xs = res.xs;
  for (int i = -2; i <= nx + 1; ++i) require_domain(family, o.x0 + hx * i, o.t0);

  // levels[n][i]: value at t0 + n dt on node i.
  std::vector<std::vector<double>> U(N + 1, std::vector<double>(nx)), V = U;
  for (int i = 0; i < nx; ++i) {
    U[0][i] = family.u(xs[i], o.t0).value;
    V[0][i] = family.v(xs[i], o.t0).value;
  }
  double norm0 = 0.0;
  for (int i = 0; i < nx; ++i) norm0 = std::max({norm0, std::abs(U[0][i]), std::abs(V[0][i])});
  const double limit = 1e6 * std::max(norm0, 1.0);

  std::vector<double> Jprev_u(nx), Jprev_v(nx);
  for (int i = 0; i < nx; ++i) {
    Jprev_u[i] = exact_integral(*family.u_series, alpha, xs[i], o.t0);
    Jprev_v[i] = exact_integral(*family.v_series, alpha, xs[i], o.t0);
  }
  const GaussRule gj = gauss_jacobi(30, -al, 0.0);
  const double d[5] = {1.0 / (12 * hx), -8.0 / (12 * hx), 0.0, 8.0 / (12 * hx), -1.0 / (12 * hx)};

  auto record = [&](int n) {
    for (int i = 0; i < nx; ++i) res.trajectory.push_back({o.t0 + n * dt, xs[i], U[n][i], V[n][i]});
  };
  if (o.record) record(0);

  for (int n = 1; n <= N; ++n) {
    const double tn = o.t0 + n * dt;
    // Memory from (0, t0]: full exact integral minus the exact tail over (t0, tn].
    std::vector<double> Mu(nx), Mv(nx);
    const double half = (tn - o.t0) / 2.0, tail_scale = std::pow(half, 1.0 - al) / g1a;
    parallel_for(static_cast<std::size_t>(nx), [&](std::size_t i) {
      double tu = 0.0, tv = 0.0;
      for (std::size_t q = 0; q < gj.nodes.size(); ++q) {
        const double s = o.t0 + half * (1.0 + gj.nodes[q]);
        tu += gj.weights[q] * family.u(xs[i], s).value;
        tv += gj.weights[q] * family.v(xs[i], s).value;
      }
      Mu[i] = exact_integral(*family.u_series, alpha, xs[i], tn) - tail_scale * tu;
      Mv[i] = exact_integral(*family.v_series, alpha, xs[i], tn) - tail_scale * tv;
    });
    double bnn = 0.0;
    for (int j = 1; j <= n; ++j) {
      const auto [wl, wr] = product_weights((n - j) * dt, (n - j + 1) * dt, al, g1a);
      for (int i = 0; i < nx; ++i) {
        Mu[i] += wl * U[j - 1][i] + (j < n ? wr * U[j][i] : 0.0);
        Mv[i] += wl * V[j - 1][i] + (j < n ? wr * V[j][i] : 0.0);
      }
      if (j == n) bnn = wr;
    }

    // Every node is evolved. Stencil points outside the grid take the
    // nearest edge value plus the family's exact increment, so data with
    // an x-symmetry keeps it.
    auto exact_u = [&](int i) { return family.u(o.x0 + hx * i, tn).value; };
    auto exact_v = [&](int i) { return family.v(o.x0 + hx * i, tn).value; };
    const int nu = nx;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * nu, 2 * nu);
    Eigen::VectorXd rhs(2 * nu);
    for (int i = 0; i < nx; ++i) {
      const double c = family.coupling.c(U[n - 1][i]);
      A(i, i) = bnn / dt;
      A(nu + i, nu + i) = bnn / dt;
      double bu = -(Mu[i] - Jprev_u[i]) / dt, bv = -(Mv[i] - Jprev_v[i]) / dt;
      for (int s = -2; s <= 2; ++s) {
        if (s == 0) continue;
        int k = i + s;
        const double w = d[s + 2];
        if (k < 0 || k > nx - 1) {
          const int e = k < 0 ? 0 : nx - 1;
          bu += w * (exact_v(k) - exact_v(e));
          bv += c * w * (exact_u(k) - exact_u(e));
          k = e;
        }
        A(i, nu + k) -= w;
        A(nu + i, k) -= c * w;
      }
      rhs(i) = bu;
      rhs(nu + i) = bv;
    }
    const Eigen::VectorXd sol = A.partialPivLu().solve(rhs);
    double norm = 0.0;
    for (int i = 0; i < nx; ++i) {
      U[n][i] = sol(i);
      V[n][i] = sol(nu + i);
    }
    for (int i = 0; i < nx; ++i) {
      Jprev_u[i] = Mu[i] + bnn * U[n][i];
      Jprev_v[i] = Mv[i] + bnn * V[n][i];
      norm = std::max({norm, std::abs(U[n][i]), std::abs(V[n][i])});
    }
    if (!std::isfinite(norm) || norm > limit) {
      throw Instability("solution norm " + std::to_string(norm) + " exceeds 1e6 times the initial norm at t=" +
                        std::to_string(tn));
    }
    if (o.record) record(n);
  }

  double eu = 0.0, ev = 0.0, su = 0.0, sv = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double ue = family.u(xs[i], o.t1).value, ve = family.v(xs[i], o.t1).value;
    eu = std::max(eu, std::abs(U[N][i] - ue));
    ev = std::max(ev, std::abs(V[N][i] - ve));
    su = std::max(su, std::abs(ue));
    sv = std::max(sv, std::abs(ve));
  }
  res.error_u = su > 0.0 ? eu / su : eu;
  res.error_v = sv > 0.0 ? ev / sv : ev;
  res.u = U[N];
  res.v = V[N];
  if (!o.record) {
    record(N);
  }
  return res;
}

double convergence_order(const std::vector<std::pair<double, double>>& he) {
  if (he.size() < 2) throw InvalidParameter("convergence order needs at least two step sizes");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [h, e] : he) {
    if (!(h > 0.0) || !(e > 0.0)) throw InvalidParameter("step sizes and errors must be positive");
    const double lx = std::log(h), ly = std::log(e);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(he.size());
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw InvalidParameter("step sizes must differ");
  return (n * sxy - sx * sy) / den;
}

}  // namespace fraclie
