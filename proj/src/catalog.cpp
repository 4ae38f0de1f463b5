#include "fraclie/catalog.hpp"

#include <cmath>
#include <map>

#include "fraclie/errors.hpp"
#include "fraclie/special.hpp"

namespace fraclie {

namespace {

const ScalarExpr kAlpha = ScalarExpr::alpha();

ScalarExpr sx(long n, long d = 1) { return ScalarExpr(make_rational(n, d)); }

MonomialSum var(Var v, const ExponentExpr& e = ExponentExpr(1), const ScalarExpr& c = ScalarExpr(1)) {
  return MonomialSum::power(v, e, c);
}

AlgebraElement coords(std::vector<ScalarExpr> c) { return AlgebraElement{std::move(c)}; }

double rp(double base, const Rational& e, const char* what) { return real_power(base, e, what); }

double gamma_ratio(const Rational& num, const Rational& den) {
  special::require_regular_gamma_argument(num, num.get_str().c_str());
  special::require_regular_gamma_argument(den, den.get_str().c_str());
  return special::gamma(num) / special::gamma(den);
}

struct ReductionText {
  std::string z, u, v, eq1, eq2, validity;
};

const std::map<std::string, ReductionText>& reduction_texts() {
  static const std::map<std::string, ReductionText> texts = {
      {"Case1-U1",
       {"t", "φ(z)", "ψ(z) + a·x·t^(α-1)", "D^α φ = a z^(α-1)", "D^α ψ = 0", ""}},
      {"Case1-U2",
       {"t·x^(-1/α)", "φ(z)", "ψ(z)", "D^α φ = -(1/α) z ψ'", "D^α ψ = -(1/α) z b²(φ) φ'", "x > 0"}},
      {"Case2.1-U1",
       {"t", "φ(z)", "ψ(z) + a·x·t^(α-1)", "D^α φ = a z^(α-1)", "D^α ψ = 0", ""}},
      {"Case2.1-U2",
       {"t·exp(a x/α)", "exp(a x/m)·φ(z)", "a·exp((m+1) a x/m)·ψ(z)", "D^α φ = ((m+1)/m) ψ + (1/α) z ψ'",
        "D^α ψ = k² φ^(2m) (φ/m + (1/α) z φ')", ""}},
      {"Case2.1-U3",
       {"t·x^(-(m+1)/D)", "x^((α-1)/D)·φ(z)", "x^((m+1)(α-1)/D)·ψ(z) + (a/D)·t^(α-1)·ln x",
        "D^α φ = ((m+1)/D)((α-1) ψ - z ψ') + (a/D) z^(α-1)", "D^α ψ = (k²/D) φ^(2m) ((α-1) φ - (m+1) z φ')",
        "D = 2mα+α-m ≠ 0, x > 0"}},
      {"Case2.1-U4",
       {"t·x^((a-1)/α)", "x^(a/m)·φ(z)", "x^((m+1)a/m)·ψ(z)", "D^α φ = ((m+1)a/m) ψ + ((a-1)/α) z ψ'",
        "D^α ψ = k² φ^(2m) ((a/m) φ + ((a-1)/α) z φ')", "x > 0"}},
      {"Case2.1-U5",
       {"x", "t^(-α/m)·φ(x)", "t^(-(m+1)α/m)·ψ(x)", "ψ' = Γ(1-α/m)/Γ(1-(m+1)α/m) φ",
        "k² φ^(2m) φ' = Γ(1-(m+1)α/m)/Γ(1-(2m+1)α/m) ψ", "m < 0 or m > α/(1-α)"}},
      {"Case2.2-U1",
       {"t", "φ(z)", "ψ(z) + a·x·t^(α-1)", "D^α φ = a z^(α-1)", "D^α ψ = 0", ""}},
      {"Case2.2-U2",
       {"t·exp(a2 x/α)", "exp(a2 (1-2α) x/α)·φ(z)", "a2·exp(a2 (1-α) x/α)·ψ(z) + a1·x·t^(α-1)",
        "D^α φ = (1/α)((1-α) ψ + z ψ') + a1 z^(α-1)", "D^α ψ = (k²/α) φ^(2α/(1-2α)) ((1-2α) φ + z φ')", ""}},
      {"Case2.2-U3",
       {"t·x^((a-1)/α)", "x^(a(1-2α)/α)·φ(z)", "x^(a(1-α)/α)·ψ(z)", "D^α φ = (1/α)(a(1-α) ψ + (a-1) z ψ')",
        "D^α ψ = (k²/α) φ^(2α/(1-2α)) (a(1-2α) φ + (a-1) z φ')", "x > 0"}},
      {"Case2.2-U4",
       {"x", "t^(2α-1)·φ(x)", "t^(α-1)·ψ(x) - a·α·t^(α-1)·ln t", "ψ' = Γ(2α)/Γ(α) φ",
        "k² φ^(2α/(1-2α)) φ' = -a Γ(α+1)", ""}},
  };
  return texts;
}

}  // namespace

// ------------------------------------------------------------------ cases

ClassificationCase ClassificationCase::generic() { return {}; }

ClassificationCase ClassificationCase::regular(const Rational& k, const Rational& m) {
  if (k == 0) throw InvalidCase("power law requires k != 0");
  if (m == 0) throw InvalidCase("power law requires m != 0");
  ClassificationCase c;
  c.kind = Kind::PowerLaw;
  c.subcase = Subcase::Regular;
  c.k = k;
  c.m = m;
  return c;
}

ClassificationCase ClassificationCase::degenerate(const Rational& k) {
  if (k == 0) throw InvalidCase("power law requires k != 0");
  ClassificationCase c;
  c.kind = Kind::PowerLaw;
  c.subcase = Subcase::Degenerate;
  c.k = k;
  c.m = 0;
  return c;
}

ClassificationCase ClassificationCase::classify(const Rational& k, const Rational& m, const Rational& alpha) {
  ClassificationCase c = regular(k, m);
  if (c.d_expr().eval(alpha) == 0) return degenerate(k);
  return c;
}

std::string ClassificationCase::label() const {
  if (kind == Kind::Generic) return "1";
  return subcase == Subcase::Regular ? "2.1" : "2.2";
}

ScalarExpr ClassificationCase::m_expr() const {
  if (kind == Kind::Generic) throw InvalidCase("generic case has no exponent m");
  if (subcase == Subcase::Regular) return ScalarExpr(m);
  return ScalarExpr(Poly::alpha(), Poly::linear(1, -2));
}

Rational ClassificationCase::m_at(const Rational& alpha) const { return m_expr().eval(alpha); }

ScalarExpr ClassificationCase::d_expr() const {
  const ScalarExpr mm = m_expr();
  return sx(2) * mm * kAlpha + kAlpha - mm;
}

void ClassificationCase::validate(const Rational& alpha) const {
  if (!(alpha > 0 && alpha < 1)) throw InvalidParameter("catalog requires 0 < α < 1, got " + alpha.get_str());
  if (kind == Kind::PowerLaw && subcase == Subcase::Degenerate && alpha == make_rational(1, 2)) {
    throw InvalidCase("degenerate subcase m = α/(1-2α) requires α ≠ 1/2");
  }
}

Coupling coupling_for(const ClassificationCase& c, const Rational& alpha) {
  if (!c.is_power_law()) {
    return {[](double u) { return 1.0 + u * u; }, [](double u) { return 2.0 * u; }, "1 + u^2"};
  }
  const Rational m = c.m_at(alpha);
  const double k2 = Rational(c.k * c.k).get_d();
  const Rational e = 2 * m;
  const Rational e1 = e - 1;
  return {[=](double u) { return k2 * rp(u, e, "u"); },
          [=](double u) { return k2 * e.get_d() * rp(u, e1, "u"); },
          "k^2 u^(2m), k=" + c.k.get_str() + ", m=" + m.get_str()};
}

Coupling transonic_coupling() {
  return {[](double u) { return -u; }, [](double) { return -1.0; }, "-u"};
}

// ------------------------------------------------------------- generators

SymmetryRecord generators(const ClassificationCase& c) {
  SymmetryRecord r{c, {"X1", "X2", "X3"}, {}};
  r.fields.emplace_back(MonomialSum(1), MonomialSum(), MonomialSum(), MonomialSum());
  r.fields.emplace_back(MonomialSum(), MonomialSum(), MonomialSum(), var(Var::T, ExponentExpr::alpha_minus(1)));
  r.fields.emplace_back(var(Var::X), var(Var::T, 1, sx(1) / kAlpha), MonomialSum(), MonomialSum());
  if (c.is_power_law()) {
    const ScalarExpr m = c.m_expr();
    r.names.push_back("X4");
    r.fields.emplace_back(var(Var::X), MonomialSum(), var(Var::U, 1, sx(1) / m), var(Var::V, 1, (sx(1) + m) / m));
  }
  return r;
}

std::vector<KernelMember> kernel_solutions(const Rational& alpha, int n) {
  if (n < 1 || !(alpha > n - 1 && alpha < n)) {
    throw InvalidParameter("kernel basis needs n - 1 < α < n (α = " + alpha.get_str() + ", n = " + std::to_string(n) + ")");
  }
  std::vector<KernelMember> out;
  for (int j = 1; j <= n; ++j) {
    const ExponentExpr e = ExponentExpr::alpha_minus(j);
    const Rational p = e.eval(alpha);
    out.push_back({var(Var::T, e), p, p > -1});
  }
  return out;
}

LieAlgebra x_algebra(const ClassificationCase& c) {
  auto r = generators(c);
  return structure_constants(r.names, r.fields);
}

std::vector<AlgebraElement> y_in_x(const ClassificationCase& c) {
  if (!c.is_power_law()) throw InvalidCase("the Y basis exists only for the power law");
  if (c.subcase == ClassificationCase::Subcase::Regular) {
    const ScalarExpr m = c.m_expr(), d = c.d_expr();
    return {coords({0, 0, -(m + 1) * kAlpha / d, -(m * (kAlpha - 1)) / d}), coords({-1, 0, 0, 0}),
            coords({0, 0, m * kAlpha / d, -(m * kAlpha) / d}), coords({0, -1, 0, 0})};
  }
  return {coords({1, 0, 0, 0}), coords({0, 1, 0, 0}), coords({0, 0, 0, 1}), coords({0, 0, -1, 1})};
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> y_partition(const ClassificationCase& c) {
  if (c.subcase == ClassificationCase::Subcase::Regular) return {{0, 1}, {2, 3}};
  return {{0, 1, 2}, {3}};
}

LieAlgebra basis_change(const ClassificationCase& c) {
  const auto gens = generators(c);
  const auto ys = y_in_x(c);
  std::vector<VectorField> fields;
  for (const auto& y : ys) {
    VectorField f;
    for (std::size_t i = 0; i < 4; ++i)
      if (!y.coords[i].is_zero()) f = f + y.coords[i] * gens.fields[i];
    fields.push_back(f);
  }
  return structure_constants({"Y1", "Y2", "Y3", "Y4"}, fields);
}

LieAlgebra basis_change(const ClassificationCase& c, const Rational& alpha) {
  if (!c.is_power_law()) throw InvalidCase("basis change applies to the power law only");
  c.validate(alpha);
  if (c.subcase == ClassificationCase::Subcase::Regular && c.d_expr().eval(alpha) == 0) {
    throw DegenerateDenominator("2mα+α-m = 0 at m = " + c.m.get_str() + ", α = " + alpha.get_str());
  }
  return basis_change(c);
}

// --------------------------------------------------------- optimal system

bool param_allowed(ParamDomain d, const Rational& v) {
  switch (d) {
    case ParamDomain::Real: return true;
    case ParamDomain::Sign: return v == 1 || v == -1;
    case ParamDomain::SignOrZero: return v == 0 || v == 1 || v == -1;
  }
  return false;
}

std::string domain_string(ParamDomain d) {
  switch (d) {
    case ParamDomain::Real: return "real";
    case ParamDomain::Sign: return "{1,-1}";
    case ParamDomain::SignOrZero: return "{0,1,-1}";
  }
  return "?";
}

void OptimalSystemElement::check_params(const std::vector<Rational>& values) const {
  if (values.size() != params.size()) {
    throw InvalidParameter(id + " expects " + std::to_string(params.size()) + " parameter(s)");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!param_allowed(params[i].domain, values[i])) {
      throw InvalidParameter(id + ": " + params[i].name + " = " + values[i].get_str() + " not in " +
                             domain_string(params[i].domain));
    }
  }
}

std::vector<OptimalSystemElement> optimal_system(const ClassificationCase& c) {
  using P = std::vector<Rational>;
  std::vector<OptimalSystemElement> out;
  auto push = [&](std::string label, std::vector<ParamSlot> params, std::string xf, std::string yf,
                  std::function<AlgebraElement(const P&)> xc, std::function<AlgebraElement(const P&)> yc,
                  bool solutions = true) {
    OptimalSystemElement e;
    e.id = "Case" + c.label() + "-" + label;
    e.label = std::move(label);
    e.params = std::move(params);
    e.x_formula = std::move(xf);
    e.y_formula = std::move(yf);
    e.x_coords = std::move(xc);
    e.y_coords = std::move(yc);
    e.has_invariant_solutions = solutions;
    if (auto it = reduction_texts().find(e.id); it != reduction_texts().end()) e.validity = it->second.validity;
    out.push_back(std::move(e));
  };
  const ParamSlot a_tri{"a", ParamDomain::SignOrZero}, a_sign{"a", ParamDomain::Sign}, a_real{"a", ParamDomain::Real};

  if (!c.is_power_law()) {
    push("U1", {a_tri}, "X1 + a·X2", "", [](const P& p) { return coords({1, ScalarExpr(p[0]), 0}); }, nullptr);
    push("U2", {}, "X3", "", [](const P&) { return coords({0, 0, 1}); }, nullptr);
    push("U3", {}, "X2", "", [](const P&) { return coords({0, 1, 0}); }, nullptr, false);
    return out;
  }
  if (c.subcase == ClassificationCase::Subcase::Regular) {
    const ScalarExpr m = c.m_expr(), d = c.d_expr(), ma = m * kAlpha;
    push("U1", {a_tri}, "-X1 - a·X2", "Y2 + a·Y4",
         [](const P& p) { return coords({-1, -ScalarExpr(p[0]), 0, 0}); },
         [](const P& p) { return coords({0, 1, 0, ScalarExpr(p[0])}); });
    push("U2", {a_sign}, "-X1 + a·X3 - a·X4", "Y2 + ((2mα+α-m)a/(mα))·Y3",
         [](const P& p) { return coords({-1, 0, ScalarExpr(p[0]), -ScalarExpr(p[0])}); },
         [=](const P& p) { return coords({0, 1, d * ScalarExpr(p[0]) / ma, 0}); });
    push("U3", {a_sign}, "-a·X2 - (m+1)α·X3 - m(α-1)·X4", "(2mα+α-m)·Y1 + a·Y4",
         [=](const P& p) { return coords({0, -ScalarExpr(p[0]), -(m + 1) * kAlpha, -(m * (kAlpha - 1))}); },
         [=](const P& p) { return coords({d, 0, 0, ScalarExpr(p[0])}); });
    push("U4", {a_real}, "(a-1)·X3 - a·X4", "Y1 + (((2mα+α-m)a-mα+m)/(mα))·Y3",
         [](const P& p) { return coords({0, 0, ScalarExpr(p[0] - 1), -ScalarExpr(p[0])}); },
         [=](const P& p) { return coords({1, 0, (d * ScalarExpr(p[0]) - ma + m) / ma, 0}); });
    push("U5", {}, "X3 - X4", "((2mα+α-m)/(mα))·Y3", [](const P&) { return coords({0, 0, 1, -1}); },
         [=](const P&) { return coords({0, 0, d / ma, 0}); });
    push("U6", {}, "-X2", "Y4", [](const P&) { return coords({0, -1, 0, 0}); },
         [](const P&) { return coords({0, 0, 0, 1}); }, false);
    return out;
  }
  push("U1", {a_tri}, "X1 + a·X2", "Y1 + a·Y2", [](const P& p) { return coords({1, ScalarExpr(p[0]), 0, 0}); },
       [](const P& p) { return coords({1, ScalarExpr(p[0]), 0, 0}); });
  push("U2", {{"a1", ParamDomain::Real}, {"a2", ParamDomain::Sign}}, "X1 + a1·X2 - a2·X3 + a2·X4",
       "Y1 + a1·Y2 + a2·Y4",
       [](const P& p) { return coords({1, ScalarExpr(p[0]), -ScalarExpr(p[1]), ScalarExpr(p[1])}); },
       [](const P& p) { return coords({1, ScalarExpr(p[0]), 0, ScalarExpr(p[1])}); });
  push("U3", {a_real}, "(1-a)·X3 + a·X4", "Y3 + (a-1)·Y4",
       [](const P& p) { return coords({0, 0, ScalarExpr(1 - p[0]), ScalarExpr(p[0])}); },
       [](const P& p) { return coords({0, 0, 1, ScalarExpr(p[0] - 1)}); });
  push("U4", {a_tri}, "a·X2 - X3 + X4", "a·Y2 + Y4",
       [](const P& p) { return coords({0, ScalarExpr(p[0]), -1, 1}); },
       [](const P& p) { return coords({0, ScalarExpr(p[0]), 0, 1}); });
  push("U5", {}, "X2", "Y2", [](const P&) { return coords({0, 1, 0, 0}); },
       [](const P&) { return coords({0, 1, 0, 0}); }, false);
  return out;
}

const OptimalSystemElement& find_element(const std::vector<OptimalSystemElement>& list, const std::string& label) {
  for (const auto& e : list)
    if (e.label == label || e.id == label) return e;
  throw InvalidParameter("no optimal-system element " + label);
}

// -------------------------------------------------------------- reductions

double SimilarityReduction::u(double x, double t, const std::function<double(double)>& phi) const {
  return pu(x, t) * phi(z(x, t)) + qu(x, t);
}

double SimilarityReduction::v(double x, double t, const std::function<double(double)>& psi) const {
  return pv(x, t) * psi(z(x, t)) + qv(x, t);
}

SimilarityReduction similarity_reduction(const OptimalSystemElement& element, const ClassificationCase& c,
                                         const Rational& alpha, const std::vector<Rational>& params) {
  element.check_params(params);
  SimilarityReduction r;
  r.element_id = element.id;
  if (!element.has_invariant_solutions) {
    r.has_invariant_solutions = false;
    r.z_formula = "";
    r.u_formula = r.v_formula = "There are no invariant solutions.";
    return r;
  }
  const auto& text = reduction_texts().at(element.id);
  r.z_formula = text.z;
  r.u_formula = text.u;
  r.v_formula = text.v;
  r.reduced_formula = {text.eq1, text.eq2};
  r.validity = text.validity;

  const double al = alpha.get_d();
  const Rational am1 = alpha - 1;
  const auto zero = [](double, double) { return 0.0; };
  const auto one = [](double, double) { return 1.0; };
  r.qu = zero;
  r.qv = zero;
  r.pu = one;
  r.pv = one;
  const std::string& lbl = element.label;

  if (lbl == "U1") {
    const Rational a = params[0];
    const double ad = a.get_d();
    r.z = [](double, double t) { return t; };
    r.qv = [=](double x, double t) { return ad * x * rp(t, am1, "t"); };
    r.residual = [=](const ReducedState& s) {
      return std::array<double, 2>{s.frac_phi - ad * rp(s.z, am1, "z"), s.frac_psi};
    };
    return r;
  }

  if (!c.is_power_law()) {  // Case 1, U2
    const Coupling b2 = coupling_for(c, alpha);
    const Rational e = -1 / alpha;
    r.z = [=](double x, double t) { return t * rp(x, e, "x"); };
    r.residual = [=](const ReducedState& s) {
      return std::array<double, 2>{s.frac_phi + s.z * s.dpsi / al, s.frac_psi + s.z * b2.c(s.phi) * s.dphi / al};
    };
    return r;
  }

  const Rational m = c.m_at(alpha);
  const double md = m.get_d();
  const double k2 = Rational(c.k * c.k).get_d();
  const Rational two_m = 2 * m;
  auto pow2m = [=](double phi) { return rp(phi, two_m, "φ"); };

  if (c.subcase == ClassificationCase::Subcase::Regular) {
    const Rational d = c.d_expr().eval(alpha);
    const double dd = d.get_d();
    if (lbl == "U2") {
      const double a = params[0].get_d();
      r.z = [=](double x, double t) { return t * std::exp(a * x / al); };
      r.pu = [=](double x, double) { return std::exp(a * x / md); };
      r.pv = [=](double x, double) { return a * std::exp((md + 1) * a * x / md); };
      r.residual = [=](const ReducedState& s) {
        return std::array<double, 2>{s.frac_phi - ((md + 1) / md * s.psi + s.z * s.dpsi / al),
                                     s.frac_psi - k2 * pow2m(s.phi) * (s.phi / md + s.z * s.dphi / al)};
      };
      return r;
    }
    if (lbl == "U3") {
      if (d == 0) throw DegenerateDenominator("U3 form needs 2mα+α-m ≠ 0");
      const double a = params[0].get_d();
      const Rational ez = -(m + 1) / d, eu = am1 / d, ev = (m + 1) * am1 / d;
      r.z = [=](double x, double t) { return t * rp(x, ez, "x"); };
      r.pu = [=](double x, double) { return rp(x, eu, "x"); };
      r.pv = [=](double x, double) { return rp(x, ev, "x"); };
      r.qv = [=](double x, double t) {
        if (!(x > 0)) throw DomainError("ln x needs x > 0");
        return a / dd * rp(t, am1, "t") * std::log(x);
      };
      r.residual = [=](const ReducedState& s) {
        const double rhs1 = (md + 1) / dd * ((al - 1) * s.psi - s.z * s.dpsi) + a / dd * rp(s.z, am1, "z");
        const double rhs2 = k2 / dd * pow2m(s.phi) * ((al - 1) * s.phi - (md + 1) * s.z * s.dphi);
        return std::array<double, 2>{s.frac_phi - rhs1, s.frac_psi - rhs2};
      };
      return r;
    }
    if (lbl == "U4") {
      const Rational a = params[0];
      const double ad = a.get_d();
      const Rational ez = (a - 1) / alpha, eu = a / m, ev = (m + 1) * a / m;
      r.z = [=](double x, double t) { return t * rp(x, ez, "x"); };
      r.pu = [=](double x, double) { return rp(x, eu, "x"); };
      r.pv = [=](double x, double) { return rp(x, ev, "x"); };
      r.residual = [=](const ReducedState& s) {
        const double rhs1 = (md + 1) * ad / md * s.psi + (ad - 1) / al * s.z * s.dpsi;
        const double rhs2 = k2 * pow2m(s.phi) * (ad / md * s.phi + (ad - 1) / al * s.z * s.dphi);
        return std::array<double, 2>{s.frac_phi - rhs1, s.frac_psi - rhs2};
      };
      return r;
    }
    if (lbl == "U5") {
      r.fractional = false;
      const double g1 = gamma_ratio(1 - alpha / m, 1 - (m + 1) * alpha / m);
      const double g2 = gamma_ratio(1 - (m + 1) * alpha / m, 1 - (2 * m + 1) * alpha / m);
      const Rational eu = -alpha / m, ev = -(m + 1) * alpha / m;
      r.z = [](double x, double) { return x; };
      r.pu = [=](double, double t) { return rp(t, eu, "t"); };
      r.pv = [=](double, double t) { return rp(t, ev, "t"); };
      r.residual = [=](const ReducedState& s) {
        return std::array<double, 2>{s.dpsi - g1 * s.phi, k2 * pow2m(s.phi) * s.dphi - g2 * s.psi};
      };
      return r;
    }
  } else {
    if (lbl == "U2") {
      const Rational a1 = params[0];
      const double a1d = a1.get_d(), a2 = params[1].get_d();
      r.z = [=](double x, double t) { return t * std::exp(a2 * x / al); };
      r.pu = [=](double x, double) { return std::exp(a2 * (1 - 2 * al) * x / al); };
      r.pv = [=](double x, double) { return a2 * std::exp(a2 * (1 - al) * x / al); };
      r.qv = [=](double x, double t) { return a1d * x * rp(t, am1, "t"); };
      r.residual = [=](const ReducedState& s) {
        const double rhs1 = ((1 - al) * s.psi + s.z * s.dpsi) / al + a1d * rp(s.z, am1, "z");
        const double rhs2 = k2 / al * pow2m(s.phi) * ((1 - 2 * al) * s.phi + s.z * s.dphi);
        return std::array<double, 2>{s.frac_phi - rhs1, s.frac_psi - rhs2};
      };
      return r;
    }
    if (lbl == "U3") {
      const Rational a = params[0];
      const double ad = a.get_d();
      const Rational ez = (a - 1) / alpha, eu = a * (1 - 2 * alpha) / alpha, ev = a * (1 - alpha) / alpha;
      r.z = [=](double x, double t) { return t * rp(x, ez, "x"); };
      r.pu = [=](double x, double) { return rp(x, eu, "x"); };
      r.pv = [=](double x, double) { return rp(x, ev, "x"); };
      r.residual = [=](const ReducedState& s) {
        const double rhs1 = (ad * (1 - al) * s.psi + (ad - 1) * s.z * s.dpsi) / al;
        const double rhs2 = k2 / al * pow2m(s.phi) * (ad * (1 - 2 * al) * s.phi + (ad - 1) * s.z * s.dphi);
        return std::array<double, 2>{s.frac_phi - rhs1, s.frac_psi - rhs2};
      };
      return r;
    }
    if (lbl == "U4") {
      r.fractional = false;
      const double a = params[0].get_d();
      const double g = gamma_ratio(2 * alpha, alpha);
      const double ga1 = special::gamma(Rational(alpha + 1));
      const Rational eu = 2 * alpha - 1;
      r.z = [](double x, double) { return x; };
      r.pu = [=](double, double t) { return rp(t, eu, "t"); };
      r.pv = [=](double, double t) { return rp(t, am1, "t"); };
      r.qv = [=](double, double t) {
        if (!(t > 0)) throw DomainError("ln t needs t > 0");
        return -a * al * rp(t, am1, "t") * std::log(t);
      };
      r.residual = [=](const ReducedState& s) {
        return std::array<double, 2>{s.dpsi - g * s.phi, k2 * pow2m(s.phi) * s.dphi + a * ga1};
      };
      return r;
    }
  }
  throw InvalidParameter("no reduction recorded for " + element.id);
}

// ------------------------------------------------------ invariance surface

ResidualReport invariance_surface_residual(const VectorField& X, const Rational& alpha, const JetFn& u,
                                           const JetFn& v, const GridSpec& grid) {
  grid.validate();
  std::vector<std::array<double, 2>> res(grid.size());
  parallel_for(grid.size(), [&](std::size_t idx) {
    const double x = grid.x(static_cast<int>(idx % grid.nx));
    const double t = grid.t(static_cast<int>(idx / grid.nx));
    const Jet ju = u(x, t), jv = v(x, t);
    const Point p{x, t, ju.value, jv.value};
    const double xi = evaluate(X.xi(), alpha, p), tau = evaluate(X.tau(), alpha, p);
    const double mu = evaluate(X.mu(), alpha, p), phi = evaluate(X.phi(), alpha, p);
    res[idx] = {xi * ju.dx + tau * ju.dt - mu, xi * jv.dx + tau * jv.dt - phi};
  });
  ResidualAccumulator acc({"u", "v"});
  for (const auto& r : res) {
    acc.add(0, r[0]);
    acc.add(1, r[1]);
  }
  ResidualReport rep;
  rep.check = "invariance_surface";
  rep.subject = X.to_string();
  rep.path = EvalPath::Analytic;
  rep.components = acc.finish();
  rep.grid = grid;
  rep.parameters["alpha"] = alpha.get_str();
  return rep;
}

// ------------------------------------------------------------------ tables

CommutatorTable expected_commutator_table(const ClassificationCase& c) {
  const std::size_t n = c.is_power_law() ? 4 : 3;
  CommutatorTable t(n, std::vector<AlgebraElement>(n, AlgebraElement::zero(n)));
  auto set = [&](std::size_t i, std::size_t j, std::size_t k, const ScalarExpr& v) {
    t[i][j].coords[k] = v;
    t[j][i].coords[k] = -v;
  };
  const ScalarExpr r = (sx(1) - kAlpha) / kAlpha;
  if (!c.is_power_law()) {
    set(0, 2, 0, 1);
    set(1, 2, 1, r);
  } else if (c.subcase == ClassificationCase::Subcase::Regular) {
    set(0, 1, 1, 1);
    set(2, 3, 3, 1);
  } else {
    set(0, 2, 0, 1);
    set(1, 2, 1, r);
  }
  return t;
}

AdjointTable expected_adjoint_table(const ClassificationCase& c) {
  if (!c.is_power_law()) throw InvalidCase("adjoint tables are listed for Case 2 only");
  const std::size_t n = 4;
  AdjointTable t(n, std::vector<ExpPolyElement>(n, ExpPolyElement(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[i][j][j] = ExpPoly::constant(1);
  const ScalarExpr r = (sx(1) - kAlpha) / kAlpha;
  if (c.subcase == ClassificationCase::Subcase::Regular) {
    t[0][1][1] = ExpPoly::monomial(1, 0, -1);  // e^{-eps} Y2
    t[1][0][1] = ExpPoly::monomial(1, 1, 0);   // Y1 + eps Y2
    t[2][3][3] = ExpPoly::monomial(1, 0, -1);
    t[3][2][3] = ExpPoly::monomial(1, 1, 0);
  } else {
    t[0][2][0] = ExpPoly::monomial(-1, 1, 0);  // Y3 - eps Y1
    t[1][2][1] = ExpPoly::monomial(-r, 1, 0);
    t[2][0][0] = ExpPoly::monomial(1, 0, 1);   // e^{eps} Y1
    t[2][1][1] = ExpPoly::monomial(1, 0, r);
  }
  return t;
}

std::vector<std::string> compare_commutators(const LieAlgebra& algebra, const CommutatorTable& expected) {
  std::vector<std::string> diffs;
  if (expected.size() != algebra.dim()) return {"dimension mismatch"};
  for (std::size_t i = 0; i < algebra.dim(); ++i) {
    for (std::size_t j = 0; j < algebra.dim(); ++j) {
      const auto got = algebra.bracket_of_basis(i, j);
      if (!(got == expected[i][j])) {
        diffs.push_back("[" + algebra.names()[i] + ", " + algebra.names()[j] + "]: computed " + algebra.format(got) +
                        ", expected " + algebra.format(expected[i][j]));
      }
    }
  }
  return diffs;
}

std::vector<std::string> compare_adjoint(const LieAlgebra& algebra, const AdjointTable& expected) {
  std::vector<std::string> diffs;
  const std::size_t n = algebra.dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto got = adjoint_closed_form(AlgebraElement::unit(n, i), AlgebraElement::unit(n, j), algebra);
      if (!got) {
        diffs.push_back("Ad(e^(ε" + algebra.names()[i] + "))" + algebra.names()[j] + ": no closed form");
        continue;
      }
      bool same = true;
      for (std::size_t k = 0; k < n; ++k) same = same && ((*got)[k] == expected[i][j][k]);
      if (!same) {
        diffs.push_back("Ad(e^(ε" + algebra.names()[i] + "))" + algebra.names()[j] + ": computed " +
                        format_exp_element(*got, algebra) + ", expected " +
                        format_exp_element(expected[i][j], algebra));
      }
    }
  }
  return diffs;
}

// -------------------------------------------------------------------- json

nlohmann::json catalog_json(const ClassificationCase& c) {
  using nlohmann::json;
  json doc;
  doc["schema"] = "fraclie-catalog/1";
  doc["case"] = c.label();
  if (c.is_power_law()) {
    doc["k"] = c.k.get_str();
    doc["m"] = c.m_expr().to_string();
  }
  const auto gens = generators(c);
  for (std::size_t i = 0; i < gens.fields.size(); ++i) {
    doc["generators"].push_back({{"name", gens.names[i]}, {"field", gens.fields[i].to_string()}});
  }
  const LieAlgebra alg = c.is_power_law() ? basis_change(c) : x_algebra(c);
  json table = json::array();
  for (std::size_t i = 0; i < alg.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < alg.dim(); ++j) row.push_back(alg.format(alg.bracket_of_basis(i, j)));
    table.push_back(row);
  }
  doc["commutators"] = {{"basis", alg.names()}, {"rows", table}};
  if (c.is_power_law()) {
    const auto x = x_algebra(c);
    json ys = json::array();
    const auto yx = y_in_x(c);
    for (std::size_t i = 0; i < yx.size(); ++i) ys.push_back({{"name", alg.names()[i]}, {"x", x.format(yx[i])}});
    doc["y_basis"] = ys;
    json adj = json::array();
    for (std::size_t i = 0; i < alg.dim(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < alg.dim(); ++j) {
        row.push_back(format_exp_element(
            adjoint_action(AlgebraElement::unit(alg.dim(), i), AlgebraElement::unit(alg.dim(), j), alg), alg));
      }
      adj.push_back(row);
    }
    doc["adjoint"] = adj;
  }
  for (const auto& e : optimal_system(c)) {
    json el{{"id", e.id}, {"label", e.label}, {"x", e.x_formula}, {"invariant_solutions", e.has_invariant_solutions}};
    if (!e.y_formula.empty()) el["y"] = e.y_formula;
    if (!e.validity.empty()) el["validity"] = e.validity;
    el["params"] = json::array();
    for (const auto& p : e.params) el["params"].push_back({{"name", p.name}, {"domain", domain_string(p.domain)}});
    if (auto it = reduction_texts().find(e.id); it != reduction_texts().end()) {
      el["reduction"] = {{"z", it->second.z},
                         {"u", it->second.u},
                         {"v", it->second.v},
                         {"system", {it->second.eq1, it->second.eq2}}};
    }
    doc["optimal_system"].push_back(el);
  }
  return doc;
}

}  // namespace fraclie
