#ifndef FRACLIE_FRACTIONAL_HPP
#define FRACLIE_FRACTIONAL_HPP

#include <map>
#include <string>
#include <vector>

#include "fraclie/monomial.hpp"

namespace fraclie {

/// Shape of one term of a gamma-annotated sum:
///   x^x_exp * t^t_exp * prod Gamma(numer_i) / prod Gamma(denom_j).
/// Argument lists are sorted and share no common entry.
struct GammaKey {
  ExponentExpr x_exp;
  ExponentExpr t_exp;
  std::vector<ExponentExpr> numer;
  std::vector<ExponentExpr> denom;

  friend bool operator==(const GammaKey&, const GammaKey&) = default;
  friend auto operator<=>(const GammaKey&, const GammaKey&) = default;
};

/// Sum of x/t monomials whose coefficients are (rational function of alpha)
/// times a ratio of gamma values. This is the result type of the exact
/// fractional power rule; gamma values are only evaluated on demand.
class GammaSum {
 public:
  GammaSum() = default;
  /// Lifts an x/t monomial sum (every gamma list empty). Throws
  /// UnsupportedOperand if u or v appears.
  static GammaSum lift(const MonomialSum& f);

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::map<GammaKey, ScalarExpr>& terms() const { return terms_; }

  void add_term(GammaKey key, const ScalarExpr& coeff);

  friend GammaSum operator+(const GammaSum& a, const GammaSum& b);
  friend GammaSum operator*(const ScalarExpr& s, const GammaSum& a);
  friend bool operator==(const GammaSum& a, const GammaSum& b) { return a.terms_ == b.terms_; }

  /// Value at (x, t) for the given alpha.
  double evaluate(const Rational& alpha, double x, double t) const;

  std::string to_string() const;

 private:
  std::map<GammaKey, ScalarExpr> terms_;
};

/// Gamma(p + 1) / Gamma(p + 1 - alpha), the power-rule factor for t^p.
/// Returns 0 when p + 1 - alpha is a gamma pole; throws
/// UndefinedDerivative when p <= -1.
double power_rule_factor(const Rational& p, const Rational& alpha);

/// Riemann-Liouville derivative of order alpha in t, applied term by term:
///   c x^e t^p  ->  c Gamma(p+1)/Gamma(p+1-alpha) x^e t^(p-alpha).
/// Terms whose denominator argument is a gamma pole vanish exactly.
/// Requires 0 < alpha < 1 for the integral definition used by the numeric
/// oracle, but the rule itself is applied for any non-integer alpha.
GammaSum rl_derivative_t(const MonomialSum& f, const Rational& alpha);
GammaSum rl_derivative_t(const GammaSum& f, const Rational& alpha);

}  // namespace fraclie

#endif
