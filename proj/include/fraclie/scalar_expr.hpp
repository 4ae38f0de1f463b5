#ifndef FRACLIE_SCALAR_EXPR_HPP
#define FRACLIE_SCALAR_EXPR_HPP

#include <string>
#include <utility>
#include <vector>

#include "fraclie/rational.hpp"

namespace fraclie {

/// Dense univariate polynomial in alpha with exact rational coefficients.
/// Coefficients are stored lowest degree first with no trailing zeros.
class Poly {
 public:
  Poly() = default;
  Poly(const Rational& c);  // NOLINT(google-explicit-constructor)
  explicit Poly(std::vector<Rational> coeffs);

  /// The polynomial `alpha`.
  static Poly alpha();
  /// a + b * alpha
  static Poly linear(const Rational& a, const Rational& b);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational leading() const;
  Rational coeff(int i) const;

  Rational eval(const Rational& x) const;
  double eval(double x) const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

  /// Quotient and remainder; throws std::domain_error on division by zero.
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
  /// Monic greatest common divisor (zero only if both inputs are zero).
  static Poly gcd(Poly a, Poly b);
  Poly monic() const;

  std::string to_string(const char* var = "α") const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Rational function of alpha in canonical form: coprime numerator and
/// monic denominator. Structural equality is mathematical equality.
class ScalarExpr {
 public:
  ScalarExpr() : num_(), den_(Rational(1)) {}
  ScalarExpr(const Rational& c) : num_(c), den_(Rational(1)) {}  // NOLINT
  ScalarExpr(long c) : ScalarExpr(Rational(c)) {}                // NOLINT
  ScalarExpr(Poly num, Poly den);

  static ScalarExpr alpha() { return ScalarExpr(Poly::alpha(), Poly(Rational(1))); }
  static ScalarExpr linear(const Rational& a, const Rational& b) {
    return ScalarExpr(Poly::linear(a, b), Poly(Rational(1)));
  }

  const Poly& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
  /// Value of a constant expression; throws std::logic_error otherwise.
  Rational constant_value() const;

  /// Exact value at alpha = x; throws PoleError if the denominator vanishes.
  Rational eval(const Rational& x) const;
  double eval_double(const Rational& x) const { return eval(x).get_d(); }
  double eval(double x) const;
  bool has_pole_at(const Rational& x) const { return den_.eval(x) == 0; }

  ScalarExpr operator-() const { return ScalarExpr(-num_, den_); }
  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
  ScalarExpr& operator+=(const ScalarExpr& o) { return *this = *this + o; }
  ScalarExpr& operator-=(const ScalarExpr& o) { return *this = *this - o; }
  ScalarExpr& operator*=(const ScalarExpr& o) { return *this = *this * o; }
  friend bool operator==(const ScalarExpr& a, const ScalarExpr& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::string to_string(const char* var = "α") const;

 private:
  void canonicalize();
  Poly num_;
  Poly den_;
};

}  // namespace fraclie

#endif
