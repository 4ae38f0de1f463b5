#include "fraclie/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fraclie/errors.hpp"
#include "fraclie/fractional.hpp"
#include "fraclie/special.hpp"

namespace fraclie {

namespace {

double gam(const Rational& x) { return special::gamma(x); }

void require_unit_alpha(const Rational& alpha) {
  if (!(alpha > 0 && alpha < 1)) throw InvalidParameter("alpha must lie in (0, 1), got " + to_string(alpha));
}

void require_sign(const Rational& v, const char* name, bool allow_zero) {
  if (v == 1 || v == -1 || (allow_zero && v == 0)) return;
  throw InvalidParameter(std::string(name) + " must be " + (allow_zero ? "0, 1 or -1" : "1 or -1") + ", got " +
                         to_string(v));
}

/// c * (x - shift)^e with its first two x-derivatives.
XProfile power_profile(double c, const Rational& e, double shift) {
  const Rational e1 = e - 1, e2 = e - 2;
  const double ed = e.get_d(), e1d = e1.get_d();
  return [=](double x) -> std::array<double, 3> {
    const double y = x - shift;
    if (c == 0.0) return {0.0, 0.0, 0.0};
    const double d1 = e == 0 ? 0.0 : c * ed * real_power(y, e1, "x");
    const double d2 = (e == 0 || e == 1) ? 0.0 : c * ed * e1d * real_power(y, e2, "x");
    return {c * real_power(y, e, "x"), d1, d2};
  };
}

XProfile affine_profile(double c0, double c1) {
  return [=](double x) -> std::array<double, 3> { return {c0 + c1 * x, c1, 0.0}; };
}

JetFn series_jet(const TimeSeries& series, const Rational& alpha) {
  std::vector<double> powers;
  for (const auto& term : series) powers.push_back(term.power.eval(alpha).get_d());
  return [series, powers](double x, double t) {
    Jet j;
    for (std::size_t i = 0; i < series.size(); ++i) {
      const auto a = series[i].coeff(x);
      const double p = powers[i];
      const double tp = std::pow(t, p);
      j.value += a[0] * tp;
      j.dx += a[1] * tp;
      j.dxx += a[2] * tp;
      j.dt += a[0] * p * tp / t;
    }
    return j;
  };
}

double min_power(const TimeSeries& s, const Rational& alpha) {
  double p = std::numeric_limits<double>::infinity();
  for (const auto& term : s) p = std::min(p, term.power.eval(alpha).get_d());
  return std::isfinite(p) ? p : 0.0;
}

VectorField element_field(const ClassificationCase& c, const std::string& label, const std::vector<Rational>& params) {
  const auto list = optimal_system(c);
  const auto& el = find_element(list, label);
  el.check_params(params);
  return x_algebra(c).field(el.x_coords(params));
}

std::string element_id(const ClassificationCase& c, const std::string& label) {
  return "Case" + c.label() + "-" + label;
}

/// Arguments of Gamma(1 - alpha/m), Gamma(1 - (m+1) alpha/m), Gamma(1 - (2m+1) alpha/m).
std::array<Rational, 3> power_gamma_args(const Rational& m, const Rational& alpha) {
  return {Rational(1 - alpha / m), Rational(1 - (m + 1) * alpha / m), Rational(1 - (2 * m + 1) * alpha / m)};
}

/// With check_degenerate = false the excluded m = alpha/(1-2alpha) is left
/// to the pole scan: there 1 - (2m+1)alpha/m is zero.
void check_power_hypothesis(const Rational& m, const Rational& alpha, bool check_degenerate) {
  if (m == 0) throw InvalidParameter("m must be nonzero");
  if (!exponent_hypothesis(m, alpha)) {
    throw HypothesisViolated("need m < 0 or m > alpha/(1-alpha); m=" + to_string(m) + ", alpha=" + to_string(alpha));
  }
  if (check_degenerate && alpha * 2 != 1 && m == alpha / (1 - 2 * alpha)) {
    throw HypothesisViolated("need m != alpha/(1-2alpha); m=" + to_string(m));
  }
}

void scan_power_poles(const Rational& m, const Rational& alpha) {
  const auto g = power_gamma_args(m, alpha);
  scan_gamma_poles({{g[0], "Gamma(1-alpha/m)"}, {g[1], "Gamma(1-(m+1)alpha/m)"}, {g[2], "Gamma(1-(2m+1)alpha/m)"}});
}

struct PowerPair {
  double A = 0.0, B = 0.0;
};

PowerPair power_pair(const Rational& m, const Rational& k, const Rational& alpha) {
  require_unit_alpha(alpha);
  if (k == 0) throw InvalidParameter("k must be nonzero");
  if (m == -1) throw SingularParameter("m = -1 makes the factor (m+1) vanish");
  if (m * 2 == -1) throw SingularParameter("m = -1/2 makes the factor (2m+1) vanish");
  check_power_hypothesis(m, alpha, false);
  scan_power_poles(m, alpha);
  const auto g = power_gamma_args(m, alpha);
  const double md = m.get_d();
  const double radicand = md * md * gam(g[0]) / (Rational(k * k).get_d() * (md + 1.0) * gam(g[2]));
  PowerPair p;
  p.A = signed_root_power(radicand, Rational(1 / (2 * m)), "A^(2m)");
  p.B = p.A * gam(g[0]) / gam(g[1]) * md / (md + 1.0);
  return p;
}

std::map<std::string, std::string> echo(std::initializer_list<std::pair<const char*, Rational>> items) {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : items) out[k] = to_string(v);
  return out;
}

SolutionFamily shifted_power_family(const std::string& id, const Rational& m, const Rational& k, const Rational& alpha,
                                    const Rational& c2) {
  const PowerPair p = power_pair(m, k, alpha);
  const double shift = c2.get_d();
  SolutionFamily f;
  f.id = id;
  f.alpha = alpha;
  f.case_ = ClassificationCase::regular(k, m);
  f.coupling = coupling_for(f.case_, alpha);
  f.u_series = TimeSeries{{ExponentExpr(0, Rational(-1 / m)), power_profile(p.A, Rational(1 / m), shift)}};
  f.v_series =
      TimeSeries{{ExponentExpr(0, Rational(-(m + 1) / m)), power_profile(p.B, Rational((m + 1) / m), shift)}};
  f.u = series_jet(*f.u_series, alpha);
  f.v = series_jet(*f.v_series, alpha);
  f.u_hint = min_power(*f.u_series, alpha);
  f.v_hint = min_power(*f.v_series, alpha);
  const bool integral_powers = is_integer(Rational(1 / m)) && is_integer(Rational((m + 1) / m));
  f.in_domain = [=](double x, double t) { return t > 0.0 && (integral_powers || x > shift); };
  f.reference_grid = {shift + 1.0, shift + 2.0, 21, 0.5, 2.0, 21};
  return f;
}

}  // namespace

double signed_root_power(double base, const Rational& exponent, const std::string& what) {
  if (!std::isfinite(base)) throw SingularParameter(what + " is not finite");
  if (base > 0.0) return std::pow(base, exponent.get_d());
  if (base == 0.0) {
    if (exponent > 0) return 0.0;
    throw DomainError(what + " is zero under a nonpositive exponent");
  }
  if (mpz_odd_p(exponent.get_den().get_mpz_t()) == 0) {
    throw NonrealRoot(what + " = " + std::to_string(base) + " is negative under the power " + to_string(exponent));
  }
  const double r = std::pow(-base, exponent.get_d());
  return mpz_odd_p(exponent.get_num().get_mpz_t()) ? -r : r;
}

void scan_gamma_poles(const std::vector<std::pair<Rational, std::string>>& arguments) {
  for (const auto& [arg, label] : arguments) {
    special::require_regular_gamma_argument(arg, label.c_str());
  }
}

bool exponent_hypothesis(const Rational& m, const Rational& alpha) { return m < 0 || m > alpha / (1 - alpha); }

// ------------------------------------------------------------------ lemma 2

Lemma2Solution lemma2_solve(const Lemma2Params& p) {
  require_unit_alpha(p.alpha);
  check_power_hypothesis(p.m, p.alpha, true);
  const Rational P = p.m * p.a1 - (p.m + 1) * p.a2 * p.alpha;
  const Rational Q = p.m * p.b1 - p.b2 * p.alpha;
  if (P == 0) throw HypothesisViolated("need m a1 - (m+1) a2 alpha != 0");
  if (Q == 0) throw HypothesisViolated("need m b1 - b2 alpha != 0");
  scan_power_poles(p.m, p.alpha);
  const auto g = power_gamma_args(p.m, p.alpha);
  const double md = p.m.get_d();
  Lemma2Solution s;
  s.params = p;
  s.lambda1 = ExponentExpr(0, Rational(-1 / p.m));
  s.lambda2 = ExponentExpr(0, Rational(-(p.m + 1) / p.m));
  const double radicand = md * md * gam(g[0]) / (gam(g[2]) * P.get_d() * Q.get_d());
  s.c1 = signed_root_power(radicand, Rational(1 / (2 * p.m)), "c1^(2m)");
  s.c2 = s.c1 * gam(g[0]) / gam(g[1]) * md / P.get_d();
  return s;
}

std::array<double, 2> lemma2_residual(const Lemma2Solution& s, double z) {
  const auto& p = s.params;
  const Rational l1 = s.lambda1.eval(p.alpha), l2 = s.lambda2.eval(p.alpha);
  const double frac_phi = s.c1 * rl_derivative_t(MonomialSum::power(Var::T, s.lambda1), p.alpha).evaluate(p.alpha, 1.0, z);
  const double frac_psi = s.c2 * rl_derivative_t(MonomialSum::power(Var::T, s.lambda2), p.alpha).evaluate(p.alpha, 1.0, z);
  const double phi = s.c1 * std::pow(z, l1.get_d());
  const double psi = s.c2 * std::pow(z, l2.get_d());
  const double dphi = l1.get_d() * phi / z;
  const double dpsi = l2.get_d() * psi / z;
  const double a1 = p.a1.get_d() * psi, a2 = p.a2.get_d() * z * dpsi;
  const double pw = real_power(phi, Rational(2 * p.m), "phi");
  const double b1 = pw * p.b1.get_d() * phi, b2 = pw * p.b2.get_d() * z * dphi;
  auto rel = [](double r, std::initializer_list<double> terms) {
    double s = 0.0;
    for (double t : terms) s = std::max(s, std::abs(t));
    return s > 0.0 ? r / s : r;
  };
  return {rel(frac_phi - a1 - a2, {frac_phi, a1, a2}), rel(frac_psi - b1 - b2, {frac_psi, b1, b2})};
}

// ----------------------------------------------------------------- families

SolutionFamily family_5_1(const Rational& a, const Rational& c1, const Rational& c2, const Rational& alpha) {
  require_unit_alpha(alpha);
  require_sign(a, "a", true);
  SolutionFamily f;
  f.id = "5.1";
  f.parameters = echo({{"a", a}, {"c1", c1}, {"c2", c2}, {"alpha", alpha}});
  f.alpha = alpha;
  f.case_ = ClassificationCase::generic();
  f.coupling = coupling_for(f.case_, alpha);
  scan_gamma_poles({{alpha, "Gamma(alpha)"}, {Rational(2 * alpha), "Gamma(2alpha)"}});
  const double C = a.get_d() * gam(alpha) / gam(Rational(2 * alpha));
  TimeSeries u;
  if (C != 0.0) u.push_back({ExponentExpr(-1, 2), affine_profile(C, 0.0)});
  if (c1 != 0) u.push_back({ExponentExpr::alpha_minus(1), affine_profile(c1.get_d(), 0.0)});
  f.u_series = u;
  f.v_series = TimeSeries{{ExponentExpr::alpha_minus(1), affine_profile(c2.get_d(), a.get_d())}};
  f.u = series_jet(*f.u_series, alpha);
  f.v = series_jet(*f.v_series, alpha);
  f.u_hint = min_power(*f.u_series, alpha);
  f.v_hint = min_power(*f.v_series, alpha);
  f.in_domain = [](double, double t) { return t > 0.0; };
  f.reference_grid = {0.0, 1.0, 21, 0.5, 2.0, 21};
  f.generator_id = element_id(f.case_, "U1");
  f.generator = element_field(f.case_, "U1", {a});
  const double printed = a.get_d() / gam(alpha);
  f.notes.push_back({"NOTE-5.1-coefficient",
                     "leading coefficient of u computed from the power rule differs from the printed a/Gamma(alpha)",
                     {{"computed", C}, {"printed", printed}}});
  return f;
}

SolutionFamily family_19(const Rational& m, const Rational& k, const Rational& alpha) {
  SolutionFamily f = shifted_power_family("19", m, k, alpha, 0);
  f.parameters = echo({{"m", m}, {"k", k}, {"alpha", alpha}});
  // The pair is invariant under U4 for every a; a = 1 gives the pure scaling X4.
  f.generator_id = element_id(f.case_, "U4");
  f.generator = element_field(f.case_, "U4", {Rational(1)});
  return f;
}

SolutionFamily family_21(const Rational& m, const Rational& k, const Rational& alpha, const Rational& c2) {
  SolutionFamily f = shifted_power_family("21", m, k, alpha, c2);
  f.parameters = echo({{"m", m}, {"k", k}, {"alpha", alpha}, {"c2", c2}});
  f.generator_id = element_id(f.case_, "U5");
  f.generator = element_field(f.case_, "U5", {});
  return f;
}

SolutionFamily family_22(const Rational& k, const Rational& alpha, const Rational& c1, const Rational& c2) {
  require_unit_alpha(alpha);
  if (k == 0) throw InvalidParameter("k must be nonzero");
  if (!(c1 > 0)) throw InvalidParameter("c1 must be positive, got " + to_string(c1));
  SolutionFamily f;
  f.id = "22";
  f.parameters = echo({{"k", k}, {"alpha", alpha}, {"c1", c1}, {"c2", c2}});
  f.alpha = alpha;
  f.case_ = ClassificationCase::regular(k, make_rational(-1, 2));
  f.coupling = coupling_for(f.case_, alpha);
  const double k2 = Rational(k * k).get_d();
  const double g1 = gam(Rational(1 + alpha)), g2 = gam(Rational(1 + 2 * alpha));
  const double sc = std::sqrt(c1.get_d());
  const double w = sc * g1 / (2.0 * k2);
  const double K = c1.get_d() / (2.0 * k2) * g1 * g1 / g2;
  const double shift = c2.get_d();
  auto tangent = [=](double x) {
    const double arg = w * (x - shift);
    if (std::abs(std::cos(arg)) < 1e-6) throw DomainError("tangent argument too close to a pole at x=" + std::to_string(x));
    return std::tan(arg);
  };
  XProfile up = [=](double x) -> std::array<double, 3> {
    const double tn = tangent(x), s = 1.0 + tn * tn;
    return {K * s, K * 2.0 * w * tn * s, K * 2.0 * w * w * s * (s + 2.0 * tn * tn)};
  };
  XProfile vp = [=](double x) -> std::array<double, 3> {
    const double tn = tangent(x), s = 1.0 + tn * tn;
    return {sc * tn, sc * w * s, sc * 2.0 * w * w * tn * s};
  };
  f.u_series = TimeSeries{{ExponentExpr(0, 2), up}};
  f.v_series = TimeSeries{{ExponentExpr(0, 1), vp}};
  f.u = series_jet(*f.u_series, alpha);
  f.v = series_jet(*f.v_series, alpha);
  f.u_hint = min_power(*f.u_series, alpha);
  f.v_hint = min_power(*f.v_series, alpha);
  f.in_domain = [=](double x, double t) { return t > 0.0 && std::abs(std::cos(w * (x - shift))) >= 1e-6; };
  f.reference_grid = {shift + 0.1, shift + 0.4, 21, 0.5, 2.0, 21};
  f.generator_id = element_id(f.case_, "U5");
  f.generator = element_field(f.case_, "U5", {});
  return f;
}

SolutionFamily family_5_4(const Rational& a1, const Rational& a2, const Rational& c, const Rational& k,
                          const Rational& alpha) {
  require_unit_alpha(alpha);
  require_sign(a2, "a2", false);
  SolutionFamily f;
  f.id = "5.4";
  f.parameters = echo({{"a1", a1}, {"a2", a2}, {"c", c}, {"k", k}, {"alpha", alpha}});
  f.alpha = alpha;
  f.case_ = ClassificationCase::degenerate(k);
  f.case_.validate(alpha);
  f.coupling = coupling_for(f.case_, alpha);
  scan_gamma_poles({{alpha, "Gamma(alpha)"}, {Rational(2 * alpha), "Gamma(2alpha)"}});
  const double C = a1.get_d() * gam(alpha) / gam(Rational(2 * alpha));
  TimeSeries u;
  if (C != 0.0) u.push_back({ExponentExpr(-1, 2), affine_profile(C, 0.0)});
  f.u_series = u;
  f.v_series = TimeSeries{{ExponentExpr::alpha_minus(1), affine_profile(a2.get_d() * c.get_d(), a1.get_d())}};
  f.u = series_jet(*f.u_series, alpha);
  f.v = series_jet(*f.v_series, alpha);
  f.u_hint = min_power(*f.u_series, alpha);
  f.v_hint = min_power(*f.v_series, alpha);
  f.in_domain = [](double, double t) { return t > 0.0; };
  f.reference_grid = {0.0, 1.0, 21, 0.5, 2.0, 21};
  f.generator_id = element_id(f.case_, "U2");
  f.generator = element_field(f.case_, "U2", {a1, a2});
  return f;
}

SolutionFamily family_5_5(const Rational& a, const Rational& c1, const Rational& c2, const Rational& k,
                          const Rational& alpha) {
  require_unit_alpha(alpha);
  require_sign(a, "a", false);
  if (k == 0) throw InvalidParameter("k must be nonzero");
  SolutionFamily f;
  f.id = "5.5";
  f.parameters = echo({{"a", a}, {"c1", c1}, {"c2", c2}, {"k", k}, {"alpha", alpha}});
  f.alpha = alpha;
  f.case_ = ClassificationCase::degenerate(k);
  f.case_.validate(alpha);
  f.coupling = coupling_for(f.case_, alpha);
  scan_gamma_poles({{alpha, "Gamma(alpha)"}, {Rational(alpha + 1), "Gamma(alpha+1)"}, {Rational(2 * alpha), "Gamma(2alpha)"}});

  const double al = alpha.get_d(), ad = a.get_d(), k2 = Rational(k * k).get_d();
  const double ga = gam(alpha), ga1 = gam(Rational(alpha + 1)), g2a = gam(Rational(2 * alpha));
  const double slope = -ad * ga1 / (k2 * (1.0 - 2.0 * al));  // L(x) = slope x + c1
  const double c1d = c1.get_d(), c2d = c2.get_d();
  const double K = k2 * (2.0 * al - 1.0) / (2.0 * ad * (1.0 - al)) * g2a / (ga * ga1);
  const Rational e_phi = 1 - 2 * alpha, e_psi = 2 - 2 * alpha;
  auto base = [=](double x) {
    const double L = slope * x + c1d;
    if (!(L > 0.0)) throw DomainError("power base " + std::to_string(L) + " is not positive at x=" + std::to_string(x));
    return L;
  };
  XProfile phi = [=](double x) -> std::array<double, 3> {
    const double L = base(x), e = e_phi.get_d();
    return {std::pow(L, e), e * std::pow(L, e - 1.0) * slope, e * (e - 1.0) * std::pow(L, e - 2.0) * slope * slope};
  };
  auto psi = [=](double x) -> std::array<double, 3> {
    const double L = base(x), e = e_psi.get_d();
    return {K * std::pow(L, e), K * e * std::pow(L, e - 1.0) * slope,
            K * e * (e - 1.0) * std::pow(L, e - 2.0) * slope * slope};
  };
  f.u_series = TimeSeries{{ExponentExpr(-1, 2), phi}};
  f.u = series_jet(*f.u_series, alpha);
  f.v = [=](double x, double t) {
    const auto p = psi(x);
    const double tp = std::pow(t, al - 1.0), lt = std::log(t);
    const double g = p[0] + c2d - ad * al * lt;
    Jet j;
    j.value = g * tp;
    j.dx = p[1] * tp;
    j.dxx = p[2] * tp;
    j.dt = (g * (al - 1.0) - ad * al) * tp / t;
    return j;
  };
  f.u_hint = 2.0 * al - 1.0;
  f.v_hint = al - 1.0;
  f.in_domain = [=](double x, double t) { return t > 0.0 && slope * x + c1d > 0.0; };
  f.reference_grid = {0.1, 0.9, 21, 0.5, 2.0, 21};
  f.generator_id = element_id(f.case_, "U4");
  f.generator = element_field(f.case_, "U4", {a});
  return f;
}

// ----------------------------------------------------------- implicit curve

ImplicitCurve::ImplicitCurve(Params p) : p_(std::move(p)) {
  require_unit_alpha(p_.alpha);
  if (p_.k == 0) throw InvalidParameter("k must be nonzero");
  if (p_.m == -1) throw SingularParameter("m = -1 makes the exponent 1/(2m+2) undefined");
  check_power_hypothesis(p_.m, p_.alpha, false);
  scan_power_poles(p_.m, p_.alpha);
  if (!(p_.psi_hi >= p_.psi_lo)) throw InvalidParameter("psi range must be ordered");
  if (p_.samples < 2) throw InvalidParameter("need at least 2 samples");
  const auto g = power_gamma_args(p_.m, p_.alpha);
  g1_ = gam(g[0]) / gam(g[1]);
  g2_ = gam(g[1]) / gam(g[2]);
  const double md = p_.m.get_d();
  ratio_ = (md + 1.0) * g2_ / (Rational(p_.k * p_.k).get_d() * g1_);
  px_ = 1.0 / (g1_ * signed_root_power(ratio_, Rational(1 / (2 * p_.m + 2)), "phi radicand constant"));

  const int n = p_.psi_hi > p_.psi_lo ? p_.samples : 1;
  for (int i = 0; i < n; ++i) psis_.push_back(n == 1 ? p_.psi_lo : p_.psi_lo + (p_.psi_hi - p_.psi_lo) * i / (n - 1));
  xs_.push_back(x_of_psi(psis_.front()));
  for (int i = 1; i < n; ++i) xs_.push_back(xs_.back() + integral(psis_[i - 1], psis_[i]));
  for (double x : xs_) {
    if (!std::isfinite(x)) throw QuadratureFailure("x(psi) is not finite on the range");
  }
  if (n > 1) {
    const bool up = xs_[1] > xs_[0];
    for (int i = 1; i < n; ++i) {
      if ((xs_[i] > xs_[i - 1]) != up || xs_[i] == xs_[i - 1]) {
        throw NonMonotone("x(psi) is not strictly monotone near psi=" + std::to_string(psis_[i]));
      }
    }
    if (!up) {
      std::reverse(xs_.begin(), xs_.end());
      std::reverse(psis_.begin(), psis_.end());
    }
  }
}

double ImplicitCurve::phi_of_psi(double psi) const {
  return signed_root_power(ratio_ * (psi * psi + p_.c1.get_d()), Rational(1 / (2 * p_.m + 2)), "phi^(2m+2)");
}

double ImplicitCurve::integral(double a, double b) const {
  if (a == b) return 0.0;
  if (a > b) return -integral(b, a);
  if (p_.c1 == 0 && a < 0.0 && b > 0.0) return integral(a, 0.0) + integral(0.0, b);
  auto f = [this](double th) {
    const double v = 1.0 / (g1_ * phi_of_psi(th));
    return std::isfinite(v) ? v : 0.0;
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0.0, l1 = 0.0;
  const double r = ts.integrate(f, a, b, 1e-13, &err, &l1);
  if (!std::isfinite(r) || err > 1e-9 * std::max(1.0, l1)) {
    throw QuadratureFailure("x(psi) integral did not converge on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return r;
}

double ImplicitCurve::x_of_psi(double psi) const { return p_.c2.get_d() + integral(p_.psi0, psi); }

double ImplicitCurve::psi_of_x(double x) const {
  const double span = xs_.back() - xs_.front();
  const double slack = 1e-12 * std::max(1.0, std::abs(span));
  if (x < xs_.front() - slack || x > xs_.back() + slack) {
    throw DomainError("x=" + std::to_string(x) + " lies outside the tabulated range");
  }
  if (xs_.size() == 1) return psis_.front();
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = it == xs_.begin() ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
  i = std::min(i, xs_.size() - 2);
  const double h = xs_[i + 1] - xs_[i];
  const double s = (x - xs_[i]) / h;
  const double d0 = g1_ * phi_of_psi(psis_[i]), d1 = g1_ * phi_of_psi(psis_[i + 1]);
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  double psi = h00 * psis_[i] + h10 * h * d0 + h01 * psis_[i + 1] + h11 * h * d1;
  const double lo = std::min(psis_[i], psis_[i + 1]), hi = std::max(psis_[i], psis_[i + 1]);
  psi = std::clamp(psi, lo, hi);
  for (int iter = 0; iter < 3; ++iter) {
    const double slope = g1_ * phi_of_psi(psi);  // dpsi/dx
    if (slope == 0.0 || !std::isfinite(slope)) break;
    const double xi = xs_[i] + integral(psis_[i], psi);
    psi = std::clamp(psi - (xi - x) * slope, lo, hi);
  }
  return psi;
}

SolutionFamily family_20(const ImplicitCurve& curve) {
  const auto& p = curve.params();
  SolutionFamily f;
  f.id = "20";
  f.parameters = echo({{"m", p.m}, {"k", p.k}, {"alpha", p.alpha}, {"c1", p.c1}, {"c2", p.c2}});
  f.parameters["psi0"] = std::to_string(p.psi0);
  f.parameters["psi_lo"] = std::to_string(p.psi_lo);
  f.parameters["psi_hi"] = std::to_string(p.psi_hi);
  f.alpha = p.alpha;
  f.case_ = ClassificationCase::regular(p.k, p.m);
  f.coupling = coupling_for(f.case_, p.alpha);
  const double g1 = curve.g1(), g2 = curve.g2(), k2 = Rational(p.k * p.k).get_d(), md = p.m.get_d();
  const Rational two_m = 2 * p.m;
  // Shared pointer keeps the tabulation alive inside the evaluators.
  auto c = std::make_shared<ImplicitCurve>(curve);
  auto state = [=](double x) {
    // Residual quadrature evaluates many t at one x; skip the re-inversion.
    thread_local const ImplicitCurve* last_curve = nullptr;
    thread_local double last_x = 0.0;
    thread_local std::array<double, 5> last{};
    if (last_curve == c.get() && last_x == x) return last;
    const double psi = c->psi_of_x(x), phi = c->phi_of_psi(psi);
    const double pw = real_power(phi, two_m, "phi");
    const double dpsi = g1 * phi;
    const double dphi = g2 * psi / (k2 * pw);
    const double ddphi = g2 / k2 * (dpsi / pw - 2.0 * md * psi * dphi / (pw * phi));
    last = {phi, dphi, ddphi, psi, dpsi};
    last_curve = c.get();
    last_x = x;
    return last;
  };
  XProfile up = [=](double x) -> std::array<double, 3> {
    const auto s = state(x);
    return {s[0], s[1], s[2]};
  };
  XProfile vp = [=](double x) -> std::array<double, 3> {
    const auto s = state(x);
    return {s[3], s[4], g1 * s[1]};
  };
  f.u_series = TimeSeries{{ExponentExpr(0, Rational(-1 / p.m)), up}};
  f.v_series = TimeSeries{{ExponentExpr(0, Rational(-(p.m + 1) / p.m)), vp}};
  f.u = series_jet(*f.u_series, p.alpha);
  f.v = series_jet(*f.v_series, p.alpha);
  f.u_hint = min_power(*f.u_series, p.alpha);
  f.v_hint = min_power(*f.v_series, p.alpha);
  const double x0 = curve.x_min(), x1 = curve.x_max();
  f.in_domain = [=](double x, double t) { return t > 0.0 && x >= x0 && x <= x1; };
  const double pad = 0.05 * (x1 - x0);
  f.reference_grid = {x0 + pad, x1 - pad, 21, 0.5, 2.0, 21};
  f.generator_id = element_id(f.case_, "U5");
  f.generator = element_field(f.case_, "U5", {});
  return f;
}

// ---------------------------------------------------------------- sign flip

SolutionFamily sign_flip(const SolutionFamily& f) {
  if (!f.case_.is_power_law() || f.case_.subcase != ClassificationCase::Subcase::Regular ||
      f.case_.k * f.case_.k != 1 || f.case_.m * 2 != 1) {
    throw InvalidParameter("sign flip needs the coupling b(u)^2 = u (k = 1, m = 1/2)");
  }
  SolutionFamily g = f;
  const std::string suffix = "-flipped";
  const bool flipped = f.id.size() > suffix.size() && f.id.ends_with(suffix);
  g.id = flipped ? f.id.substr(0, f.id.size() - suffix.size()) : f.id + suffix;
  g.coupling = flipped ? coupling_for(f.case_, f.alpha) : transonic_coupling();
  auto negate = [](const JetFn& h) {
    return JetFn([h](double x, double t) {
      Jet j = h(x, t);
      return Jet{-j.value, -j.dx, -j.dt, -j.dxx};
    });
  };
  auto negate_series = [](const std::optional<TimeSeries>& s) -> std::optional<TimeSeries> {
    if (!s) return s;
    TimeSeries out;
    for (const auto& term : *s) {
      XProfile c = term.coeff;
      out.push_back({term.power, [c](double x) {
                       auto a = c(x);
                       return std::array<double, 3>{-a[0], -a[1], -a[2]};
                     }});
    }
    return out;
  };
  g.u = negate(f.u);
  g.v = negate(f.v);
  g.u_series = negate_series(f.u_series);
  g.v_series = negate_series(f.v_series);
  return g;
}

// ------------------------------------------------------------------ factory

SolutionFamily make_family(const std::string& id, const std::map<std::string, Rational>& params) {
  auto get = [&](const char* name, std::optional<Rational> fallback = std::nullopt) -> Rational {
    if (auto it = params.find(name); it != params.end()) return it->second;
    if (fallback) return *fallback;
    throw InvalidParameter(std::string("family ") + id + " needs parameter " + name);
  };
  const Rational zero(0), one(1);
  if (id == "5.1") return family_5_1(get("a"), get("c1", zero), get("c2", zero), get("alpha"));
  if (id == "19") return family_19(get("m"), get("k", one), get("alpha"));
  if (id == "21") return family_21(get("m"), get("k", one), get("alpha"), get("c2", zero));
  if (id == "22") return family_22(get("k", one), get("alpha"), get("c1", one), get("c2", zero));
  if (id == "5.4") return family_5_4(get("a1"), get("a2", one), get("c", zero), get("k", one), get("alpha"));
  if (id == "5.5") return family_5_5(get("a", one), get("c1"), get("c2", zero), get("k", one), get("alpha"));
  if (id == "20") {
    ImplicitCurve::Params p;
    p.m = get("m");
    p.k = get("k", one);
    p.alpha = get("alpha");
    p.c1 = get("c1", zero);
    p.c2 = get("c2", zero);
    p.psi0 = get("psi0", zero).get_d();
    p.psi_lo = get("psi_lo", zero).get_d();
    p.psi_hi = get("psi_hi", one).get_d();
    return family_20(ImplicitCurve(p));
  }
  throw InvalidParameter("unknown family id '" + id + "'");
}

}  // namespace fraclie
