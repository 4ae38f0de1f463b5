#include "fraclie/scalar_expr.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "fraclie/errors.hpp"

namespace fraclie {

Poly::Poly(const Rational& c) : coeffs_{c} { trim(); }

Poly::Poly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Poly Poly::alpha() { return Poly(std::vector<Rational>{Rational(0), Rational(1)}); }

Poly Poly::linear(const Rational& a, const Rational& b) {
  return Poly(std::vector<Rational>{a, b});
}

void Poly::trim() {
  for (auto& c : coeffs_) c.canonicalize();
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational Poly::leading() const { return coeffs_.empty() ? Rational(0) : coeffs_.back(); }

Rational Poly::coeff(int i) const {
  return (i >= 0 && i < static_cast<int>(coeffs_.size())) ? coeffs_[i] : Rational(0);
}

Rational Poly::eval(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double Poly::eval(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Poly(std::move(c));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> rem = a.coeffs_;
  const int db = b.degree();
  if (a.degree() < db) return {Poly(), a};
  std::vector<Rational> quot(a.degree() - db + 1, Rational(0));
  const Rational lead = b.leading();
  for (int i = a.degree(); i >= db; --i) {
    Rational f = rem[i] / lead;
    quot[i - db] = f;
    if (f == 0) continue;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * b.coeffs_[j];
  }
  return {Poly(std::move(quot)), Poly(std::move(rem))};
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  Poly r = *this;
  const Rational lead = leading();
  for (auto& c : r.coeffs_) c /= lead;
  return r;
}

Poly Poly::gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

namespace {

std::string rational_text(const Rational& q) { return q.get_str(); }

}  // namespace

std::string Poly::to_string(const char* var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  // "1-α" reads better than "-α+1"
  const bool ascending = degree() >= 1 && leading() < 0 && coeffs_[0] > 0;
  for (int step = 0; step <= degree(); ++step) {
    const int i = ascending ? step : degree() - step;
    const Rational& c = coeffs_[i];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? "-" : "+");
    }
    first = false;
    if (i == 0) {
      os << rational_text(mag);
      continue;
    }
    if (mag != 1) {
      if (mag.get_den() == 1) {
        os << rational_text(mag);
      } else {
        os << mag.get_num().get_str();
      }
    }
    os << var;
    if (i > 1) os << "^" << i;
    if (mag.get_den() != 1) os << "/" << mag.get_den().get_str();
  }
  return os.str();
}

ScalarExpr::ScalarExpr(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw PoleError("rational function with zero denominator");
  canonicalize();
}

void ScalarExpr::canonicalize() {
  if (num_.is_zero()) {
    den_ = Poly(Rational(1));
    return;
  }
  Poly g = Poly::gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = Poly::divmod(num_, g).first;
    den_ = Poly::divmod(den_, g).first;
  }
  const Rational lead = den_.leading();
  if (lead != 1) {
    num_ = num_ * Poly(Rational(1) / lead);
    den_ = den_ * Poly(Rational(1) / lead);
  }
}

Rational ScalarExpr::constant_value() const {
  if (!is_constant()) throw std::logic_error("not a constant: " + to_string());
  return num_.coeff(0) / den_.coeff(0);
}

Rational ScalarExpr::eval(const Rational& x) const {
  Rational d = den_.eval(x);
  if (d == 0) throw PoleError("denominator " + den_.to_string() + " vanishes at α = " + x.get_str());
  Rational r = num_.eval(x) / d;
  r.canonicalize();
  return r;
}

double ScalarExpr::eval(double x) const { return num_.eval(x) / den_.eval(x); }

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.den_ == b.den_) return ScalarExpr(a.num_ + b.num_, a.den_);
  return ScalarExpr(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return a + (-b); }

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.is_zero() || b.is_zero()) return ScalarExpr();
  return ScalarExpr(a.num_ * b.num_, a.den_ * b.den_);
}

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
  if (b.is_zero()) throw PoleError("division by the zero rational function");
  return ScalarExpr(a.num_ * b.den_, a.den_ * b.num_);
}

std::string ScalarExpr::to_string(const char* var) const {
  if (den_.degree() == 0) {
    // den_ is monic, so it is exactly 1
    return num_.to_string(var);
  }
  // Display with integer coefficients; a sign common to the numerator moves
  // into the denominator when that gives a positive constant term there.
  mpz_class scale = 1;
  for (const Poly* p : {&num_, &den_})
    for (const auto& c : p->coeffs()) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), c.get_den().get_mpz_t());
  Poly num = num_ * Poly(Rational(scale)), den = den_ * Poly(Rational(scale));
  const bool num_negative = std::all_of(num.coeffs().begin(), num.coeffs().end(), [](const Rational& c) { return c <= 0; });
  std::string sign;
  if (num_negative && den.coeff(0) < 0) {
    num = -num;
    den = -den;
  } else if (num_negative) {
    num = -num;
    sign = "-";
  }
  auto wrap = [](const Poly& p, const char* v) {
    std::string s = p.to_string(v);
    const bool compound = p.coeffs().size() > 1 &&
        std::count_if(p.coeffs().begin(), p.coeffs().end(), [](const Rational& c) { return c != 0; }) > 1;
    return compound ? "(" + s + ")" : s;
  };
  return sign + wrap(num, var) + "/" + wrap(den, var);
}

}  // namespace fraclie
