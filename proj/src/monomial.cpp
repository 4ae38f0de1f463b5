#include "fraclie/monomial.hpp"

#include <cmath>
#include <sstream>

#include "fraclie/errors.hpp"

namespace fraclie {

std::string ExponentExpr::to_string() const {
  if (slope == 0) return offset.get_str();
  std::ostringstream os;
  if (slope == 1) {
    os << "α";
  } else if (slope == -1) {
    os << "-α";
  } else if (slope.get_den() == 1) {
    os << slope.get_str() << "α";
  } else {
    os << slope.get_num().get_str() << "α/" << slope.get_den().get_str();
  }
  if (offset > 0) os << "+" << offset.get_str();
  if (offset < 0) os << offset.get_str();
  return os.str();
}

const char* var_name(Var v) {
  switch (v) {
    case Var::X: return "x";
    case Var::T: return "t";
    case Var::U: return "u";
    case Var::V: return "v";
  }
  return "?";
}

MonomialSum::MonomialSum(const ScalarExpr& c) {
  if (!c.is_zero()) terms_.emplace(Exponents{}, c);
}

MonomialSum MonomialSum::power(Var var, const ExponentExpr& power, const ScalarExpr& coeff) {
  Exponents e{};
  e[static_cast<int>(var)] = power;
  return term(coeff, e);
}

MonomialSum MonomialSum::term(const ScalarExpr& coeff, const Exponents& exponents) {
  MonomialSum s;
  s.add_term(exponents, coeff);
  return s;
}

void MonomialSum::add_term(const Exponents& e, const ScalarExpr& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

ScalarExpr MonomialSum::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? ScalarExpr() : it->second;
}

bool MonomialSum::independent_of(Var var) const {
  for (const auto& [e, c] : terms_)
    if (!e[static_cast<int>(var)].is_zero()) return false;
  return true;
}

MonomialSum MonomialSum::operator-() const {
  MonomialSum r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

MonomialSum operator+(const MonomialSum& f, const MonomialSum& g) {
  MonomialSum r = f;
  for (const auto& [e, c] : g.terms_) r.add_term(e, c);
  return r;
}

MonomialSum operator-(const MonomialSum& f, const MonomialSum& g) { return f + (-g); }

MonomialSum operator*(const MonomialSum& f, const MonomialSum& g) {
  MonomialSum r;
  for (const auto& [ef, cf] : f.terms_) {
    for (const auto& [eg, cg] : g.terms_) {
      Exponents e;
      for (int i = 0; i < 4; ++i) e[i] = ef[i] + eg[i];
      r.add_term(e, cf * cg);
    }
  }
  return r;
}

MonomialSum operator*(const ScalarExpr& s, const MonomialSum& f) {
  MonomialSum r;
  if (s.is_zero()) return r;
  for (const auto& [e, c] : f.terms_) r.add_term(e, s * c);
  return r;
}

std::string MonomialSum::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    bool has_var = false;
    for (auto v : kAllVars) has_var = has_var || !e[static_cast<int>(v)].is_zero();
    const std::string cs = c.to_string();
    if (!has_var || cs != "1") os << "(" << cs << ")";
    for (auto v : kAllVars) {
      const auto& p = e[static_cast<int>(v)];
      if (p.is_zero()) continue;
      os << var_name(v);
      if (!(p.slope == 0 && p.offset == 1)) os << "^(" << p.to_string() << ")";
    }
  }
  return os.str();
}

MonomialSum add(const MonomialSum& f, const MonomialSum& g) { return f + g; }

MonomialSum multiply(const MonomialSum& f, const MonomialSum& g) { return f * g; }

MonomialSum differentiate(const MonomialSum& f, Var var) {
  const int i = static_cast<int>(var);
  MonomialSum r;
  for (const auto& [e, c] : f.terms()) {
    if (e[i].is_zero()) continue;
    Exponents ne = e;
    ne[i] = e[i] - ExponentExpr(1);
    r = r + MonomialSum::term(c * e[i].as_scalar(), ne);
  }
  return r;
}

double real_power(double base, const Rational& exponent, const char* what) {
  if (exponent == 0) return 1.0;
  const bool integral = is_integer(exponent);
  if (base < 0.0 && !integral) {
    throw DomainError(std::string("negative ") + what + " under non-integer exponent " + exponent.get_str());
  }
  if (base == 0.0) {
    if (exponent < 0) throw DomainError(std::string("zero ") + what + " under negative exponent");
    return 0.0;
  }
  if (integral && exponent.get_num().fits_slong_p()) {
    return std::pow(base, static_cast<double>(exponent.get_num().get_si()));
  }
  return std::pow(base, exponent.get_d());
}

double evaluate(const MonomialSum& f, const Rational& alpha, const Point& point) {
  double sum = 0.0;
  for (const auto& [e, c] : f.terms()) {
    double term = c.eval(alpha).get_d();
    for (auto v : kAllVars) {
      const int i = static_cast<int>(v);
      term *= real_power(point[i], e[i].eval(alpha), var_name(v));
    }
    sum += term;
  }
  return sum;
}

}  // namespace fraclie
