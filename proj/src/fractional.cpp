#include "fraclie/fractional.hpp"

#include <algorithm>
#include <sstream>

#include "fraclie/errors.hpp"
#include "fraclie/special.hpp"

namespace fraclie {

namespace {

void cancel_common(std::vector<ExponentExpr>& numer, std::vector<ExponentExpr>& denom) {
  std::sort(numer.begin(), numer.end());
  std::sort(denom.begin(), denom.end());
  std::vector<ExponentExpr> n2, d2;
  std::size_t i = 0, j = 0;
  while (i < numer.size() && j < denom.size()) {
    if (numer[i] == denom[j]) {
      ++i;
      ++j;
    } else if (numer[i] < denom[j]) {
      n2.push_back(numer[i++]);
    } else {
      d2.push_back(denom[j++]);
    }
  }
  n2.insert(n2.end(), numer.begin() + static_cast<long>(i), numer.end());
  d2.insert(d2.end(), denom.begin() + static_cast<long>(j), denom.end());
  numer = std::move(n2);
  denom = std::move(d2);
}

}  // namespace

GammaSum GammaSum::lift(const MonomialSum& f) {
  GammaSum r;
  for (const auto& [e, c] : f.terms()) {
    if (!e[2].is_zero() || !e[3].is_zero()) {
      throw UnsupportedOperand("fractional t-derivative of a term containing u or v");
    }
    r.add_term(GammaKey{e[0], e[1], {}, {}}, c);
  }
  return r;
}

void GammaSum::add_term(GammaKey key, const ScalarExpr& coeff) {
  if (coeff.is_zero()) return;
  cancel_common(key.numer, key.denom);
  auto [it, inserted] = terms_.try_emplace(std::move(key), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

GammaSum operator+(const GammaSum& a, const GammaSum& b) {
  GammaSum r = a;
  for (const auto& [k, c] : b.terms_) r.add_term(k, c);
  return r;
}

GammaSum operator*(const ScalarExpr& s, const GammaSum& a) {
  GammaSum r;
  for (const auto& [k, c] : a.terms_) r.add_term(k, s * c);
  return r;
}

double GammaSum::evaluate(const Rational& alpha, double x, double t) const {
  double sum = 0.0;
  for (const auto& [k, c] : terms_) {
    double v = c.eval(alpha).get_d();
    for (const auto& g : k.numer) v *= special::gamma(g.eval(alpha));
    for (const auto& g : k.denom) v /= special::gamma(g.eval(alpha));
    v *= real_power(x, k.x_exp.eval(alpha), "x");
    v *= real_power(t, k.t_exp.eval(alpha), "t");
    sum += v;
  }
  return sum;
}

std::string GammaSum::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    for (const auto& g : k.numer) os << "·Γ(" << g.to_string() << ")";
    for (const auto& g : k.denom) os << "/Γ(" << g.to_string() << ")";
    if (!k.x_exp.is_zero()) os << "·x^(" << k.x_exp.to_string() << ")";
    if (!k.t_exp.is_zero()) os << "·t^(" << k.t_exp.to_string() << ")";
  }
  return os.str();
}

double power_rule_factor(const Rational& p, const Rational& alpha) {
  if (p <= -1) throw UndefinedDerivative("t^p with p = " + p.get_str() + " <= -1");
  const Rational lower = p + 1 - alpha;
  if (is_nonpositive_integer(lower)) return 0.0;
  return special::gamma(Rational(p + 1)) / special::gamma(lower);
}

GammaSum rl_derivative_t(const GammaSum& f, const Rational& alpha) {
  const ExponentExpr a_shift(Rational(0), Rational(1));  // alpha
  GammaSum r;
  for (const auto& [k, c] : f.terms()) {
    const Rational p = k.t_exp.eval(alpha);
    if (p <= -1) {
      throw UndefinedDerivative("t^(" + k.t_exp.to_string() + ") has exponent " + p.get_str() + " <= -1");
    }
    const ExponentExpr upper = k.t_exp + ExponentExpr(1);
    const ExponentExpr lower = upper - a_shift;
    if (is_nonpositive_integer(lower.eval(alpha))) continue;  // 1/Gamma pole annihilates the term
    GammaKey nk = k;
    nk.t_exp = k.t_exp - a_shift;
    nk.numer.push_back(upper);
    nk.denom.push_back(lower);
    r.add_term(std::move(nk), c);
  }
  return r;
}

GammaSum rl_derivative_t(const MonomialSum& f, const Rational& alpha) {
  return rl_derivative_t(GammaSum::lift(f), alpha);
}

}  // namespace fraclie
