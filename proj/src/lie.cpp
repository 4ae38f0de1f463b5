#include "fraclie/lie.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fraclie/errors.hpp"

namespace fraclie {

// ---------------------------------------------------------------- fields

bool VectorField::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const MonomialSum& c) { return c.is_zero(); });
}

MonomialSum VectorField::apply(const MonomialSum& f) const {
  MonomialSum r;
  for (auto v : kAllVars) {
    const auto& c = coeff(v);
    if (c.is_zero()) continue;
    r = r + c * differentiate(f, v);
  }
  return r;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  return {a.xi() + b.xi(), a.tau() + b.tau(), a.mu() + b.mu(), a.phi() + b.phi()};
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  return {a.xi() - b.xi(), a.tau() - b.tau(), a.mu() - b.mu(), a.phi() - b.phi()};
}

VectorField operator*(const ScalarExpr& s, const VectorField& a) {
  return {s * a.xi(), s * a.tau(), s * a.mu(), s * a.phi()};
}

std::string VectorField::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (auto v : kAllVars) {
    const auto& c = coeff(v);
    if (c.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "[" << c.to_string() << "]∂" << var_name(v);
  }
  return first ? "0" : os.str();
}

VectorField bracket(const VectorField& X, const VectorField& Y) {
  return {X.apply(Y.xi()) - Y.apply(X.xi()), X.apply(Y.tau()) - Y.apply(X.tau()),
          X.apply(Y.mu()) - Y.apply(X.mu()), X.apply(Y.phi()) - Y.apply(X.phi())};
}

// -------------------------------------------------------------- elements

AlgebraElement AlgebraElement::unit(std::size_t dim, std::size_t i) {
  AlgebraElement e = zero(dim);
  e.coords.at(i) = ScalarExpr(1);
  return e;
}

bool AlgebraElement::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](const ScalarExpr& c) { return c.is_zero(); });
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement r = a;
  for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += b.coords.at(i);
  return r;
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement r = a;
  for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] -= b.coords.at(i);
  return r;
}

AlgebraElement operator*(const ScalarExpr& s, const AlgebraElement& a) {
  AlgebraElement r = a;
  for (auto& c : r.coords) c = s * c;
  return r;
}

AlgebraElement LieAlgebra::bracket_of_basis(std::size_t i, std::size_t j) const {
  return {c_.at(i).at(j)};
}

AlgebraElement LieAlgebra::bracket(const AlgebraElement& a, const AlgebraElement& b) const {
  AlgebraElement r = AlgebraElement::zero(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (a.coords[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim(); ++j) {
      if (b.coords[j].is_zero()) continue;
      const ScalarExpr w = a.coords[i] * b.coords[j];
      for (std::size_t k = 0; k < dim(); ++k) {
        if (!c_[i][j][k].is_zero()) r.coords[k] += w * c_[i][j][k];
      }
    }
  }
  return r;
}

VectorField LieAlgebra::field(const AlgebraElement& a) const {
  VectorField f;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!a.coords.at(i).is_zero()) f = f + a.coords[i] * basis_[i];
  }
  return f;
}

AlgebraElement LieAlgebra::element(std::initializer_list<ScalarExpr> coords) const {
  if (coords.size() != dim()) throw std::invalid_argument("element dimension mismatch");
  return {std::vector<ScalarExpr>(coords)};
}

std::string LieAlgebra::format(const AlgebraElement& a) const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < dim(); ++i) {
    const ScalarExpr& c = a.coords.at(i);
    if (c.is_zero()) continue;
    std::string cs = c.to_string();
    bool negative = !cs.empty() && cs[0] == '-' && cs.find_first_of("+-", 1) == std::string::npos;
    if (negative) cs = cs.substr(1);
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    if (cs != "1") os << (cs.find_first_of("+-/") != std::string::npos ? "(" + cs + ")" : cs) << "·";
    os << names_[i];
  }
  return first ? "0" : os.str();
}

// ---------------------------------------------------------- decomposition

namespace {

using Key = std::pair<int, Exponents>;

std::map<Key, ScalarExpr> flatten(const VectorField& f) {
  std::map<Key, ScalarExpr> out;
  for (auto v : kAllVars) {
    for (const auto& [e, c] : f.coeff(v).terms()) out.emplace(Key{static_cast<int>(v), e}, c);
  }
  return out;
}

}  // namespace

AlgebraElement decompose(const VectorField& Z, const std::vector<VectorField>& basis) {
  const std::size_t n = basis.size();
  std::vector<std::map<Key, ScalarExpr>> cols;
  std::map<Key, std::size_t> row_of;
  for (const auto& b : basis) {
    cols.push_back(flatten(b));
    for (const auto& [k, c] : cols.back()) row_of.try_emplace(k, 0);
  }
  const auto target = flatten(Z);
  for (const auto& [k, c] : target) {
    if (!row_of.count(k)) {
      throw NotInSpan("term " + std::string(var_name(static_cast<Var>(k.first))) + "-component of " +
                      Z.to_string() + " lies outside the basis support");
    }
  }
  std::size_t r = 0;
  for (auto& [k, idx] : row_of) idx = r++;
  const std::size_t rows = row_of.size();

  // augmented matrix [A | z]
  std::vector<std::vector<ScalarExpr>> m(rows, std::vector<ScalarExpr>(n + 1));
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& [k, c] : cols[j]) m[row_of[k]][j] = c;
  for (const auto& [k, c] : target) m[row_of[k]][n] = c;

  std::vector<std::size_t> pivot_row(n);
  std::size_t prow = 0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = prow;
    while (p < rows && m[p][col].is_zero()) ++p;
    if (p == rows) throw std::invalid_argument("basis fields are linearly dependent");
    std::swap(m[p], m[prow]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == prow || m[i][col].is_zero()) continue;
      const ScalarExpr f = m[i][col] / m[prow][col];
      for (std::size_t j = col; j <= n; ++j) m[i][j] -= f * m[prow][j];
    }
    pivot_row[col] = prow++;
  }
  for (std::size_t i = prow; i < rows; ++i) {
    if (!m[i][n].is_zero()) throw NotInSpan(Z.to_string() + " is not in the span of the basis");
  }
  AlgebraElement out = AlgebraElement::zero(n);
  for (std::size_t col = 0; col < n; ++col) {
    const auto& row = m[pivot_row[col]];
    out.coords[col] = row[n] / row[col];
  }
  return out;
}

AlgebraElement decompose(const VectorField& Z, const LieAlgebra& algebra) {
  return decompose(Z, algebra.basis());
}

bool jacobi_holds(const LieAlgebra& a) {
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const auto ei = AlgebraElement::unit(n, i), ej = AlgebraElement::unit(n, j),
                   ek = AlgebraElement::unit(n, k);
        const auto s = a.bracket(ei, a.bracket(ej, ek)) + a.bracket(ej, a.bracket(ek, ei)) +
                       a.bracket(ek, a.bracket(ei, ej));
        if (!s.is_zero()) return false;
      }
  return true;
}

LieAlgebra structure_constants(std::vector<std::string> names, std::vector<VectorField> basis) {
  const std::size_t n = basis.size();
  std::vector<std::vector<std::vector<ScalarExpr>>> c(
      n, std::vector<std::vector<ScalarExpr>>(n, std::vector<ScalarExpr>(n)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const VectorField b = bracket(basis[i], basis[j]);
      try {
        c[i][j] = decompose(b, basis).coords;
      } catch (const NotInSpan& e) {
        throw NotClosed("[" + names[i] + ", " + names[j] + "] = " + b.to_string() + " leaves the span");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (!(c[i][j][k] + c[j][i][k]).is_zero()) throw std::logic_error("structure constants not antisymmetric");
  LieAlgebra alg(std::move(names), std::move(basis), std::move(c));
  if (!jacobi_holds(alg)) throw std::logic_error("structure constants violate the Jacobi identity");
  return alg;
}

Matrix ad_matrix(const AlgebraElement& Y, const LieAlgebra& algebra) {
  const std::size_t n = algebra.dim();
  Matrix m(n, std::vector<ScalarExpr>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const auto col = algebra.bracket(Y, AlgebraElement::unit(n, j));
    for (std::size_t k = 0; k < n; ++k) m[k][j] = col.coords[k];
  }
  return m;
}

bool direct_sum_check(const LieAlgebra& a, const std::vector<std::size_t>& first,
                      const std::vector<std::size_t>& second) {
  auto contains = [](const std::vector<std::size_t>& s, std::size_t i) {
    return std::find(s.begin(), s.end(), i) != s.end();
  };
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (contains(first, i) == contains(second, i)) {
      throw std::invalid_argument("partition must cover every basis index exactly once");
    }
  }
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      const bool same = contains(first, i) == contains(first, j);
      const auto& part = contains(first, i) ? first : second;
      for (std::size_t k = 0; k < a.dim(); ++k) {
        const ScalarExpr& c = a.constant(i, j, k);
        if (c.is_zero()) continue;
        if (!same) return false;               // cross bracket
        if (!contains(part, k)) return false;  // part not closed
      }
    }
  }
  return true;
}

// --------------------------------------------------------------- ExpPoly

ExpPoly ExpPoly::constant(const ScalarExpr& c) {
  ExpPoly p;
  p.add(ScalarExpr(), 0, c);
  return p;
}

ExpPoly ExpPoly::monomial(const ScalarExpr& c, int power, const ScalarExpr& rate) {
  ExpPoly p;
  p.add(rate, power, c);
  return p;
}

void ExpPoly::add(const ScalarExpr& rate, int power, const ScalarExpr& c) {
  if (c.is_zero()) return;
  auto it = std::find_if(terms_.begin(), terms_.end(), [&](const Term& t) { return t.rate == rate; });
  if (it == terms_.end()) {
    terms_.push_back({rate, {}});
    it = std::prev(terms_.end());
  }
  if (static_cast<int>(it->poly.size()) <= power) it->poly.resize(power + 1);
  it->poly[power] += c;
  while (!it->poly.empty() && it->poly.back().is_zero()) it->poly.pop_back();
  if (it->poly.empty()) terms_.erase(it);
}

double ExpPoly::eval(const Rational& alpha, double eps) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double p = 0.0;
    for (auto k = t.poly.rbegin(); k != t.poly.rend(); ++k) p = p * eps + k->eval_double(alpha);
    sum += p * std::exp(t.rate.eval_double(alpha) * eps);
  }
  return sum;
}

ExpPoly operator+(const ExpPoly& a, const ExpPoly& b) {
  ExpPoly r = a;
  for (const auto& t : b.terms_)
    for (std::size_t k = 0; k < t.poly.size(); ++k) r.add(t.rate, static_cast<int>(k), t.poly[k]);
  return r;
}

ExpPoly operator*(const ScalarExpr& s, const ExpPoly& a) {
  ExpPoly r;
  for (const auto& t : a.terms_)
    for (std::size_t k = 0; k < t.poly.size(); ++k) r.add(t.rate, static_cast<int>(k), s * t.poly[k]);
  return r;
}

bool operator==(const ExpPoly& a, const ExpPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (const auto& t : a.terms_) {
    auto it = std::find_if(b.terms_.begin(), b.terms_.end(), [&](const ExpPoly::Term& u) {
      return u.rate == t.rate && u.poly == t.poly;
    });
    if (it == b.terms_.end()) return false;
  }
  return true;
}

namespace {

// Splits a coefficient string into sign and magnitude when the sign applies
// to the whole expression.
std::pair<bool, std::string> split_sign(const ScalarExpr& c) {
  const ScalarExpr neg = -c;
  const std::string s = c.to_string(), n = neg.to_string();
  if (!s.empty() && s[0] == '-' && !(n.empty() || n[0] == '-')) return {true, n};
  return {false, s};
}

std::string factor(const std::string& s) {
  return s.find_first_of("+-/") != std::string::npos ? "(" + s + ")" : s;
}

}  // namespace

std::string ExpPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    for (std::size_t k = 0; k < t.poly.size(); ++k) {
      if (t.poly[k].is_zero()) continue;
      const auto [negative, mag] = split_sign(t.poly[k]);
      if (first) {
        if (negative) os << "-";
      } else {
        os << (negative ? " - " : " + ");
      }
      first = false;
      std::vector<std::string> parts;
      if (mag != "1" || (k == 0 && t.rate.is_zero())) parts.push_back(factor(mag));
      if (k > 0) parts.push_back("ε" + (k > 1 ? "^" + std::to_string(k) : std::string()));
      if (!t.rate.is_zero()) {
        const std::string rs = t.rate.to_string();
        parts.push_back(rs == "1" ? "e^(ε)" : rs == "-1" ? "e^(-ε)" : "e^(" + factor(rs) + "ε)");
      }
      for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "·" : "") << parts[i];
    }
  }
  return os.str();
}

std::string format_exp_element(const ExpPolyElement& e, const LieAlgebra& algebra) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    const std::string s = e[i].to_string();
    if (s == "1") os << algebra.names()[i];
    else os << (e[i].terms().size() > 1 || s.find(" + ") != std::string::npos ? "(" + s + ")" : s) << "·" << algebra.names()[i];
  }
  return first ? "0" : os.str();
}

// -------------------------------------------------------- adjoint action

namespace {

std::vector<ScalarExpr> mat_vec(const Matrix& m, const std::vector<ScalarExpr>& v) {
  std::vector<ScalarExpr> r(v.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!m[i][j].is_zero() && !v[j].is_zero()) r[i] += m[i][j] * v[j];
  return r;
}

bool all_zero(const std::vector<ScalarExpr>& v) {
  return std::all_of(v.begin(), v.end(), [](const ScalarExpr& c) { return c.is_zero(); });
}

// exp(-eps M) v in closed form, when M v = lambda v or M is nilpotent on v.
std::optional<ExpPolyElement> closed_form_on(const Matrix& m, const std::vector<ScalarExpr>& v) {
  const std::size_t n = v.size();
  ExpPolyElement out(n);
  std::vector<ScalarExpr> w = mat_vec(m, v);
  if (all_zero(w)) {
    for (std::size_t i = 0; i < n; ++i) out[i] = ExpPoly::constant(v[i]);
    return out;
  }
  // eigenvector test
  std::size_t pivot = n;
  for (std::size_t i = 0; i < n && pivot == n; ++i)
    if (!v[i].is_zero()) pivot = i;
  if (pivot < n) {
    const ScalarExpr lambda = w[pivot] / v[pivot];
    bool eigen = true;
    for (std::size_t i = 0; i < n && eigen; ++i) eigen = (w[i] == lambda * v[i]);
    if (eigen) {
      for (std::size_t i = 0; i < n; ++i) out[i] = ExpPoly::monomial(v[i], 0, -lambda);
      return out;
    }
  }
  // nilpotent series sum_k (-eps)^k / k! M^k v
  std::vector<std::vector<ScalarExpr>> seq{v, w};
  for (std::size_t k = 2; k <= n + 1; ++k) {
    auto next = mat_vec(m, seq.back());
    if (all_zero(next)) {
      Rational fact(1);
      for (std::size_t j = 0; j < seq.size(); ++j) {
        if (j > 0) fact *= static_cast<long>(j);
        const ScalarExpr c = ScalarExpr(Rational((j % 2 == 0) ? 1 : -1) / fact);
        for (std::size_t i = 0; i < n; ++i)
          out[i] = out[i] + ExpPoly::monomial(c * seq[j][i], static_cast<int>(j), ScalarExpr());
      }
      return out;
    }
    seq.push_back(std::move(next));
  }
  return std::nullopt;
}

using DMatrix = std::vector<std::vector<double>>;

DMatrix dmul(const DMatrix& a, const DMatrix& b) {
  const std::size_t n = a.size();
  DMatrix r(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

DMatrix expm(DMatrix a) {
  const std::size_t n = a.size();
  double norm = 0.0;
  for (const auto& row : a) {
    double s = 0.0;
    for (double x : row) s += std::abs(x);
    norm = std::max(norm, s);
  }
  int squarings = 0;
  while (norm > 0.25) {
    norm /= 2.0;
    ++squarings;
  }
  const double scale = std::ldexp(1.0, -squarings);
  for (auto& row : a)
    for (double& x : row) x *= scale;
  DMatrix result(n, std::vector<double>(n, 0.0)), term(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) result[i][i] = term[i][i] = 1.0;
  for (int k = 1; k <= 24; ++k) {
    term = dmul(term, a);
    for (auto& row : term)
      for (double& x : row) x /= k;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) result[i][j] += term[i][j];
  }
  for (int s = 0; s < squarings; ++s) result = dmul(result, result);
  return result;
}

}  // namespace

std::optional<ExpPolyElement> adjoint_closed_form(const AlgebraElement& Y, const AlgebraElement& Z,
                                                  const LieAlgebra& algebra) {
  const Matrix m = ad_matrix(Y, algebra);
  if (auto whole = closed_form_on(m, Z.coords)) return whole;
  const std::size_t n = algebra.dim();
  ExpPolyElement out(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (Z.coords[j].is_zero()) continue;
    auto part = closed_form_on(m, AlgebraElement::unit(n, j).coords);
    if (!part) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i) out[i] = out[i] + Z.coords[j] * (*part)[i];
  }
  return out;
}

ExpPolyElement adjoint_action(const AlgebraElement& Y, const AlgebraElement& Z, const LieAlgebra& algebra) {
  auto r = adjoint_closed_form(Y, Z, algebra);
  if (!r) throw NoClosedForm("ad_" + algebra.format(Y) + " is neither diagonal nor nilpotent on " + algebra.format(Z));
  return *r;
}

std::vector<double> adjoint_action(const AlgebraElement& Y, const AlgebraElement& Z, double eps,
                                   const Rational& alpha, const LieAlgebra& algebra) {
  const std::size_t n = algebra.dim();
  std::vector<double> out(n, 0.0);
  if (auto cf = adjoint_closed_form(Y, Z, algebra)) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (*cf)[i].eval(alpha, eps);
    return out;
  }
  const Matrix m = ad_matrix(Y, algebra);
  DMatrix a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = -eps * m[i][j].eval_double(alpha);
  const DMatrix e = expm(std::move(a));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] += e[i][j] * Z.coords[j].eval_double(alpha);
  return out;
}

// ------------------------------------------------------------ equivalence

namespace {

struct Evaluated {
  bool valid = false;
  double scale = 0.0;
  std::optional<double> free_value;
  double mismatch = 0.0;  // max over fixed coordinates of |A/s - T|
  double residual = 0.0;  // max |A - s T|
};

}  // namespace

EquivalenceOutcome equivalence_solve(const AlgebraElement& source, const EquivalenceTarget& target,
                                     const AlgebraElement& conjugator, const LieAlgebra& algebra,
                                     const Rational& alpha) {
  const std::size_t n = algebra.dim();
  std::vector<double> t(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) t[i] = target.fixed.coords.at(i).eval_double(alpha);
  auto is_free = [&](std::size_t i) { return target.free_index && *target.free_index == i; };

  std::size_t norm_index = n;
  for (std::size_t i = 0; i < n && norm_index == n; ++i)
    if (!is_free(i) && t[i] != 0.0) norm_index = i;
  if (norm_index == n) return {std::nullopt, "target has no nonzero fixed coordinate"};

  const auto closed = adjoint_closed_form(conjugator, source, algebra);
  auto act = [&](double eps) {
    std::vector<double> a(n);
    if (closed) {
      for (std::size_t i = 0; i < n; ++i) a[i] = (*closed)[i].eval(alpha, eps);
    } else {
      a = adjoint_action(conjugator, source, eps, alpha, algebra);
    }
    return a;
  };
  auto evaluate = [&](double eps) {
    Evaluated ev;
    const auto a = act(eps);
    ev.scale = a[norm_index] / t[norm_index];
    if (!std::isfinite(ev.scale) || ev.scale == 0.0) return ev;
    if (ev.scale < 0.0 && !target.allow_negative_scale) return ev;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_free(i)) {
        ev.free_value = a[i] / ev.scale;
        continue;
      }
      ev.mismatch = std::max(ev.mismatch, std::abs(a[i] / ev.scale - t[i]));
      ev.residual = std::max(ev.residual, std::abs(a[i] - ev.scale * t[i]));
    }
    if (ev.free_value && target.free_sign != 0 && (*ev.free_value) * target.free_sign <= 0.0) return ev;
    ev.valid = true;
    return ev;
  };
  auto accept = [&](double eps, bool closed_form) -> std::optional<Equivalence> {
    const Evaluated ev = evaluate(eps);
    if (!ev.valid || ev.mismatch > 1e-10) return std::nullopt;
    return Equivalence{eps, ev.scale, ev.free_value, ev.residual, closed_form};
  };

  if (auto s = accept(0.0, true)) return {s, ""};

  // exact route: single-exponential coordinates give eps = log(ratio) / (rate difference)
  if (closed) {
    const auto& c0 = (*closed)[norm_index];
    auto single = [](const ExpPoly& p) {
      return p.terms().size() == 1 && p.terms()[0].poly.size() == 1;
    };
    if (single(c0)) {
      const double r0 = c0.terms()[0].rate.eval_double(alpha);
      const double k0 = c0.terms()[0].poly[0].eval_double(alpha);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == norm_index || is_free(j) || t[j] == 0.0 || !single((*closed)[j])) continue;
        const double rj = (*closed)[j].terms()[0].rate.eval_double(alpha);
        const double kj = (*closed)[j].terms()[0].poly[0].eval_double(alpha);
        const double ratio = t[j] * k0 / (t[norm_index] * kj);
        if (ratio <= 0.0 || rj == r0) continue;
        if (auto s = accept(std::log(ratio) / (rj - r0), true)) return {s, ""};
      }
    }
  }

  // numeric route: sign changes of each fixed-coordinate mismatch on [-40, 40]
  std::optional<Equivalence> best;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == norm_index || is_free(j)) continue;
    auto g = [&](double eps) {
      const auto a = act(eps);
      const double s = a[norm_index] / t[norm_index];
      return a[j] / s - t[j];
    };
    constexpr int kSamples = 8000;
    constexpr double kRange = 40.0;
    double prev_eps = -kRange, prev = g(prev_eps);
    for (int i = 1; i <= kSamples; ++i) {
      const double eps = -kRange + 2.0 * kRange * i / kSamples;
      const double cur = g(eps);
      if (std::isfinite(prev) && std::isfinite(cur) && prev * cur <= 0.0) {
        double lo = prev_eps, hi = eps, glo = prev;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
          const double mid = 0.5 * (lo + hi);
          const double gm = g(mid);
          if (glo * gm <= 0.0) {
            hi = mid;
          } else {
            lo = mid;
            glo = gm;
          }
        }
        if (auto s = accept(0.5 * (lo + hi), false)) {
          if (!best || std::abs(s->eps) < std::abs(best->eps)) best = s;
        }
      }
      prev_eps = eps;
      prev = cur;
    }
    if (best) return {best, ""};
  }
  return {std::nullopt, "no eps in [-40, 40] maps the source onto a positive multiple of the target"};
}

}  // namespace fraclie
