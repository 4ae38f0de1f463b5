#ifndef FRACLIE_SOLUTIONS_HPP
#define FRACLIE_SOLUTIONS_HPP

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fraclie/catalog.hpp"
#include "fraclie/grid.hpp"
#include "fraclie/monomial.hpp"

namespace fraclie {

/// Value, first and second x-derivative of a coefficient function.
using XProfile = std::function<std::array<double, 3>(double x)>;

/// coeff(x) * t^power
struct TimeTerm {
  ExponentExpr power;
  XProfile coeff;
};

/// Finite sum of TimeTerms: lets the fractional derivative in t be taken
/// exactly with the power rule.
using TimeSeries = std::vector<TimeTerm>;

/// Informational record attached to a family.
struct Note {
  std::string id;
  std::string text;
  std::map<std::string, double> values;
};

struct SolutionFamily {
  std::string id;
  std::map<std::string, std::string> parameters;
  Rational alpha;
  ClassificationCase case_;
  Coupling coupling;

  JetFn u, v;
  std::optional<TimeSeries> u_series, v_series;
  /// Leading t-exponent of u and v near t = 0 (quadrature grading hint).
  double u_hint = 0.0, v_hint = 0.0;
  std::function<bool(double x, double t)> in_domain;

  GridSpec reference_grid;
  std::string generator_id;  // optimal-system element whose invariant solution this is
  VectorField generator;
  std::vector<Note> notes;
};

/// Real power that also accepts a negative base when the exponent has an
/// odd denominator; otherwise throws NonrealRoot naming `what`.
double signed_root_power(double base, const Rational& exponent, const std::string& what);

/// Throws SingularParameter when any argument is a gamma pole.
void scan_gamma_poles(const std::vector<std::pair<Rational, std::string>>& arguments);

/// True when m < 0 or m > alpha / (1 - alpha).
bool exponent_hypothesis(const Rational& m, const Rational& alpha);

struct Lemma2Params {
  Rational m, alpha, a1, a2, b1, b2;
};

struct Lemma2Solution {
  ExponentExpr lambda1, lambda2;
  double c1 = 0.0, c2 = 0.0;
  Lemma2Params params;
};

/// phi = c1 z^lambda1, psi = c2 z^lambda2 solving
///   D^alpha phi = a1 psi + a2 z psi',  D^alpha psi = phi^(2m) (b1 phi + b2 z phi').
Lemma2Solution lemma2_solve(const Lemma2Params& p);

/// Both equations' left minus right side at z, each divided by the size of
/// its largest term. The fractional side uses the exact power rule.
std::array<double, 2> lemma2_residual(const Lemma2Solution& s, double z);

/// Case-1 U1 solution; a in {0, 1, -1}. Carries a NOTE comparing the
/// computed leading coefficient with a/Gamma(alpha).
SolutionFamily family_5_1(const Rational& a, const Rational& c1, const Rational& c2, const Rational& alpha);
/// Separable power solution (Case-2.1 U4).
SolutionFamily family_19(const Rational& m, const Rational& k, const Rational& alpha);
/// family_19 shifted by c2 in x (Case-2.1 U5 with c1 = 0).
SolutionFamily family_21(const Rational& m, const Rational& k, const Rational& alpha, const Rational& c2);
/// Tangent solution for m = -1/2 (Case-2.1 U5).
SolutionFamily family_22(const Rational& k, const Rational& alpha, const Rational& c1, const Rational& c2);
/// Case-2.2 U2 solution; a2 in {1, -1}.
SolutionFamily family_5_4(const Rational& a1, const Rational& a2, const Rational& c, const Rational& k,
                          const Rational& alpha);
/// Case-2.2 U4 solution with the logarithmic term; a in {1, -1}.
SolutionFamily family_5_5(const Rational& a, const Rational& c1, const Rational& c2, const Rational& k,
                          const Rational& alpha);

/// Implicit Case-2.1 U5 solution: x(psi) by quadrature, phi(psi) closed
/// form, psi(x) by monotone Hermite interpolation refined by Newton steps.
class ImplicitCurve {
 public:
  struct Params {
    Rational m, k, alpha, c1, c2;
    double psi0 = 0.0;
    double psi_lo = 0.0, psi_hi = 1.0;
    int samples = 801;
  };

  explicit ImplicitCurve(Params p);

  double x_of_psi(double psi) const;
  double psi_of_x(double x) const;
  double phi_of_psi(double psi) const;
  double x_min() const { return xs_.front(); }
  double x_max() const { return xs_.back(); }
  /// Gamma ratios of the reduced system: psi' = g1 phi, k^2 phi^(2m) phi' = g2 psi.
  double g1() const { return g1_; }
  double g2() const { return g2_; }
  /// The constant in front of the integral in x(psi).
  double x_prefactor() const { return px_; }
  const Params& params() const { return p_; }

 private:
  double integral(double a, double b) const;
  Params p_;
  double g1_ = 0.0, g2_ = 0.0, ratio_ = 0.0, px_ = 0.0;
  std::vector<double> psis_, xs_;
};

/// (u, v) built from the implicit curve on [x_min, x_max].
SolutionFamily family_20(const ImplicitCurve& curve);

/// (-u, -v): maps solutions with b(u)^2 = u to the transonic system.
/// Requires the power law with k = 1, m = 1/2.
SolutionFamily sign_flip(const SolutionFamily& f);

/// Builds a family by id ("5.1", "19", "20", "21", "22", "5.4", "5.5") from
/// string parameters; unknown ids throw InvalidParameter.
SolutionFamily make_family(const std::string& id, const std::map<std::string, Rational>& params);

}  // namespace fraclie

#endif
