#ifndef FRACLIE_MONOMIAL_HPP
#define FRACLIE_MONOMIAL_HPP

#include <array>
#include <compare>
#include <map>
#include <string>

#include "fraclie/rational.hpp"
#include "fraclie/scalar_expr.hpp"

namespace fraclie {

/// Exponent affine in alpha: offset + slope * alpha.
struct ExponentExpr {
  Rational offset{0};
  Rational slope{0};

  ExponentExpr() = default;
  ExponentExpr(const Rational& a, const Rational& b = Rational(0)) : offset(a), slope(b) {}  // NOLINT
  ExponentExpr(long a) : offset(a) {}                                                         // NOLINT

  static ExponentExpr alpha_minus(long n) { return ExponentExpr(Rational(-n), Rational(1)); }

  Rational eval(const Rational& alpha) const { return offset + slope * alpha; }
  bool is_zero() const { return offset == 0 && slope == 0; }
  /// Exponent as a polynomial in alpha (for folding into coefficients).
  ScalarExpr as_scalar() const { return ScalarExpr::linear(offset, slope); }

  friend ExponentExpr operator+(const ExponentExpr& a, const ExponentExpr& b) {
    return {a.offset + b.offset, a.slope + b.slope};
  }
  friend ExponentExpr operator-(const ExponentExpr& a, const ExponentExpr& b) {
    return {a.offset - b.offset, a.slope - b.slope};
  }
  friend ExponentExpr operator*(const Rational& s, const ExponentExpr& e) {
    return {s * e.offset, s * e.slope};
  }
  friend bool operator==(const ExponentExpr& a, const ExponentExpr& b) {
    return a.offset == b.offset && a.slope == b.slope;
  }
  friend std::strong_ordering operator<=>(const ExponentExpr& a, const ExponentExpr& b) {
    if (int c = cmp(a.offset, b.offset); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    if (int c = cmp(a.slope, b.slope); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string to_string() const;
};

enum class Var : int { X = 0, T = 1, U = 2, V = 3 };
constexpr std::array<Var, 4> kAllVars = {Var::X, Var::T, Var::U, Var::V};
const char* var_name(Var v);

using Exponents = std::array<ExponentExpr, 4>;

/// One term coefficient * x^e0 * t^e1 * u^e2 * v^e3.
struct Monomial {
  ScalarExpr coeff;
  Exponents exponents;
};

/// Finite sum of monomials with distinct exponent vectors and nonzero
/// coefficients, kept in lexicographic exponent order.
class MonomialSum {
 public:
  MonomialSum() = default;
  MonomialSum(const ScalarExpr& c);  // NOLINT(google-explicit-constructor): constant
  MonomialSum(long c) : MonomialSum(ScalarExpr(c)) {}  // NOLINT

  /// coeff * var^power
  static MonomialSum power(Var var, const ExponentExpr& power, const ScalarExpr& coeff = ScalarExpr(1));
  static MonomialSum term(const ScalarExpr& coeff, const Exponents& exponents);

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::map<Exponents, ScalarExpr>& terms() const { return terms_; }
  /// Coefficient of the given exponent vector (zero if absent).
  ScalarExpr coefficient(const Exponents& e) const;
  /// True if every exponent of `var` is identically zero.
  bool independent_of(Var var) const;

  MonomialSum operator-() const;
  friend MonomialSum operator+(const MonomialSum& f, const MonomialSum& g);
  friend MonomialSum operator-(const MonomialSum& f, const MonomialSum& g);
  friend MonomialSum operator*(const MonomialSum& f, const MonomialSum& g);
  friend MonomialSum operator*(const ScalarExpr& s, const MonomialSum& f);
  friend bool operator==(const MonomialSum& f, const MonomialSum& g) { return f.terms_ == g.terms_; }

  std::string to_string() const;

 private:
  void add_term(const Exponents& e, const ScalarExpr& c);
  std::map<Exponents, ScalarExpr> terms_;
};

MonomialSum add(const MonomialSum& f, const MonomialSum& g);
MonomialSum multiply(const MonomialSum& f, const MonomialSum& g);
MonomialSum differentiate(const MonomialSum& f, Var var);

/// Point in (x, t, u, v) order.
using Point = std::array<double, 4>;

/// Real power with the library's domain rules: a negative base needs an
/// integer exponent, and a zero base needs a nonnegative exponent.
double real_power(double base, const Rational& exponent, const char* what = "base");

/// Floating-point value at the given alpha and point. Throws DomainError
/// where real_power does and PoleError if a coefficient's denominator
/// vanishes at alpha.
double evaluate(const MonomialSum& f, const Rational& alpha, const Point& point);

}  // namespace fraclie

#endif
