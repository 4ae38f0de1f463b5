#include "fraclie/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "fraclie/catalog.hpp"
#include "fraclie/commands.hpp"
#include "fraclie/equivalences.hpp"
#include "fraclie/fractional.hpp"
#include "fraclie/numeric.hpp"
#include "fraclie/solutions.hpp"

namespace fraclie {

namespace {

// Pinned tolerances.
constexpr double kPowerRuleRel = 1e-6;
constexpr double kKernelAbs = 1e-8;
constexpr double kExactResidual = 1e-8;
constexpr double kQuadratureResidual = 1e-5;
constexpr double kImplicitMatch = 1e-6;
constexpr double kLemmaResidual = 1e-10;
constexpr double kIsc = 1e-8;
constexpr double kSequential = 1e-8;
constexpr double kCoincidence = 1e-10;
constexpr double kMinErrorRatio = 1.5;
constexpr double kMaxFinestError = 1e-2;
constexpr double kNoteRel = 1e-12;
constexpr int kRandomPowerCases = 20;
constexpr int kMinLemmaTuples = 5;

Rational R(long p, long q = 1) { return make_rational(p, q); }

std::string sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << v;
  return s.str();
}

struct Outcome {
  Verdict verdict;
  std::string detail;
};

Outcome judge(bool ok, std::string detail) { return {ok ? Verdict::Pass : Verdict::Fail, std::move(detail)}; }

// Worst observed value and the case that produced it.
struct Worst {
  double value = 0.0;
  std::string where;
  void see(double v, const std::string& w) {
    if (!(v <= value)) {  // also captures NaN
      value = v;
      where = w;
    }
  }
};

// ------------------------------------------------------------------------ 1

Outcome crit_tables() {
  std::vector<std::string> diffs;
  const auto generic = ClassificationCase::generic();
  for (const auto& d : compare_commutators(x_algebra(generic), expected_commutator_table(generic))) diffs.push_back("1: " + d);
  for (const auto& c : {ClassificationCase::regular(R(1), R(2)), ClassificationCase::degenerate(R(1))}) {
    const LieAlgebra alg = basis_change(c);
    for (const auto& d : compare_commutators(alg, expected_commutator_table(c))) diffs.push_back(c.label() + ": " + d);
    for (const auto& d : compare_adjoint(alg, expected_adjoint_table(c))) diffs.push_back(c.label() + ": " + d);
  }
  if (diffs.empty()) return {Verdict::Pass, "commutators for 1, 2.1 (m=2), 2.2 and both adjoint tables match exactly"};
  return {Verdict::Fail, std::to_string(diffs.size()) + " entries differ, first: " + diffs.front()};
}

// ------------------------------------------------------------------------ 2

Outcome crit_power_rule(unsigned seed) {
  Worst rel, kernel;
  int cases = 0;
  auto check = [&](const Rational& p, const Rational& alpha, double t) {
    const double a = alpha.get_d(), pd = p.get_d();
    QuadratureSpec spec;
    spec.hint = pd;
    const double exact = power_rule_factor(p, alpha) * std::pow(t, pd - a);
    const double numeric = rl_derivative_numeric([pd](double s) { return std::pow(s, pd); }, a, t, spec);
    std::ostringstream w;
    w << "p=" << p << " α=" << alpha << " t=" << t;
    if (exact == 0.0) {
      kernel.see(std::abs(numeric), w.str());
    } else {
      rel.see(std::abs(numeric - exact) / std::abs(exact), w.str());
    }
    ++cases;
  };
  const Rational ps[] = {R(-1, 2), R(-1, 4), R(0), R(1, 3), R(1, 2), R(1), R(2), R(3)};
  const Rational alphas[] = {R(1, 4), R(1, 3), R(1, 2), R(2, 3), R(3, 4)};
  const double ts[] = {0.5, 1.0, 2.0};
  for (const auto& p : ps)
    for (const auto& a : alphas)
      for (double t : ts) check(p, a, t);
  // t^(alpha-1) lies in the kernel.
  for (const auto& a : alphas)
    for (double t : ts) check(a - 1, a, t);
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> den(2, 7), num(-5, 20), adist(1, 6);
  for (int i = 0; i < kRandomPowerCases; ++i) {
    const int d = den(rng);
    Rational p(num(rng), d);
    p.canonicalize();
    if (p <= R(-1, 2)) p = -p;
    Rational alpha(adist(rng), 7);
    alpha.canonicalize();
    check(p, alpha, std::uniform_real_distribution<double>(0.25, 3.0)(rng));
  }
  const bool ok = rel.value <= kPowerRuleRel && kernel.value <= kKernelAbs;
  return judge(ok, std::to_string(cases) + " cases, max rel " + sci(rel.value) + " (" + rel.where + "), kernel max " +
                       sci(kernel.value) + " (" + kernel.where + ")");
}

// ------------------------------------------------------------------------ 3

struct NamedFamily {
  std::string label;
  std::function<SolutionFamily()> make;
};

ImplicitCurve curve_like_21() {
  ImplicitCurve::Params p;
  p.m = R(2);
  p.k = R(1);
  p.alpha = R(1, 3);
  p.c1 = R(0);
  p.c2 = R(0);
  p.psi_lo = 0.0;
  p.psi_hi = 3.0;
  return ImplicitCurve(p);
}

ImplicitCurve curve_like_22() {
  ImplicitCurve::Params p;
  p.m = R(-1, 2);
  p.k = R(1);
  p.alpha = R(1, 2);
  p.c1 = R(1);
  p.c2 = R(0);
  p.psi_lo = -2.0;
  p.psi_hi = 2.0;
  return ImplicitCurve(p);
}

ImplicitCurve curve_generic() {
  ImplicitCurve::Params p;
  p.m = R(2);
  p.k = R(1);
  p.alpha = R(1, 3);
  p.c1 = R(1);
  p.c2 = R(0);
  p.psi_lo = -1.0;
  p.psi_hi = 2.0;
  return ImplicitCurve(p);
}

std::vector<NamedFamily> all_families() {
  return {
      {"5.1(a=1)", [] { return family_5_1(R(1), R(2), R(3), R(1, 3)); }},
      {"5.1(a=0)", [] { return family_5_1(R(0), R(2), R(3), R(1, 3)); }},
      {"19", [] { return family_19(R(2), R(1), R(1, 3)); }},
      {"21", [] { return family_21(R(1, 2), R(1), R(1, 5), R(1, 2)); }},
      {"21-flipped", [] { return sign_flip(family_21(R(1, 2), R(1), R(1, 5), R(0))); }},
      {"22", [] { return family_22(R(1), R(1, 2), R(1), R(0)); }},
      {"5.4", [] { return family_5_4(R(-1), R(1), R(2), R(1), R(1, 3)); }},
      {"5.5", [] { return family_5_5(R(1), R(3), R(0), R(1), R(1, 3)); }},
      {"20", [] { return family_20(curve_generic()); }},
  };
}

double implicit_mismatch(const SolutionFamily& implicit, const SolutionFamily& closed) {
  const GridSpec& g = implicit.reference_grid;
  double worst = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.nt; ++j) {
      const double x = g.x(i), t = g.t(j);
      const double du = std::abs(implicit.u(x, t).value - closed.u(x, t).value);
      const double dv = std::abs(implicit.v(x, t).value - closed.v(x, t).value);
      const double su = std::max(1.0, std::abs(closed.u(x, t).value));
      const double sv = std::max(1.0, std::abs(closed.v(x, t).value));
      worst = std::max({worst, du / su, dv / sv});
    }
  }
  return worst;
}

Outcome crit_residuals() {
  Worst exact, quad;
  for (const auto& nf : all_families()) {
    if (nf.label == "20") continue;  // compared against 21 and 22 below
    const SolutionFamily f = nf.make();
    const ResidualReport r = residual_system(f, f.reference_grid);
    (r.path == EvalPath::ExactMonomial ? exact : quad).see(r.max(), nf.label);
  }
  const double m21 = implicit_mismatch(family_20(curve_like_21()), family_21(R(2), R(1), R(1, 3), R(0)));
  const double m22 = implicit_mismatch(family_20(curve_like_22()), family_22(R(1), R(1, 2), R(1), R(0)));
  const SolutionFamily f20 = family_20(curve_generic());
  const double r20 = residual_system(f20, f20.reference_grid).max();
  const bool ok = exact.value <= kExactResidual && quad.value <= kQuadratureResidual && r20 <= kExactResidual &&
                  m21 <= kImplicitMatch && m22 <= kImplicitMatch;
  return judge(ok, "exact-path max " + sci(exact.value) + " (" + exact.where + "), quadrature-path max " +
                       sci(quad.value) + " (" + quad.where + "), 20 residual " + sci(r20) + ", 20 vs 21 " + sci(m21) +
                       ", 20 vs 22 " + sci(m22));
}

// ------------------------------------------------------------------------ 4

Outcome crit_lemma2() {
  struct U4 {
    Rational m, alpha, a, k;
  };
  std::vector<Lemma2Params> tuples;
  for (const U4& u : {U4{R(2), R(1, 3), R(1), R(1)}, U4{R(2), R(1, 3), R(2), R(1)}, U4{R(-1, 4), R(1, 2), R(1), R(1)},
                      U4{R(-1, 3), R(1, 3), R(3), R(1)}, U4{R(1), R(1, 4), R(1, 2), R(1)},
                      U4{R(3, 2), R(1, 3), R(1), R(1, 2)}}) {
    const Rational k2 = u.k * u.k;
    tuples.push_back({u.m, u.alpha, (u.m + 1) * u.a / u.m, (u.a - 1) / u.alpha, k2 * u.a / u.m, k2 * (u.a - 1) / u.alpha});
  }
  tuples.push_back({R(2), R(1, 3), R(2), R(-1, 3), R(1), R(1)});

  Worst res;
  int exact_lambdas = 0;
  for (const auto& p : tuples) {
    const Lemma2Solution s = lemma2_solve(p);
    if (s.lambda1.eval(p.alpha) == -p.alpha / p.m && s.lambda2.eval(p.alpha) == -(p.m + 1) * p.alpha / p.m) ++exact_lambdas;
    for (int i = 0; i <= 20; ++i) {
      const auto r = lemma2_residual(s, 0.25 + 0.1 * i);
      std::ostringstream w;
      w << "m=" << p.m << " α=" << p.alpha;
      res.see(std::max(std::abs(r[0]), std::abs(r[1])), w.str());
    }
  }
  const int n = static_cast<int>(tuples.size());
  const bool ok = n >= kMinLemmaTuples && exact_lambdas == n && res.value <= kLemmaResidual;
  return judge(ok, std::to_string(n) + " tuples, exponents exact for " + std::to_string(exact_lambdas) +
                       ", max residual " + sci(res.value) + " (" + res.where + ")");
}

// ------------------------------------------------------------------------ 5

Outcome crit_isc() {
  Worst w;
  for (const auto& nf : all_families()) {
    const SolutionFamily f = nf.make();
    w.see(invariance_surface_residual(f.generator, f.alpha, f.u, f.v, f.reference_grid).max(),
          nf.label + " under " + f.generator_id);
  }
  return judge(w.value <= kIsc, "max " + sci(w.value) + " (" + w.where + ")");
}

// ------------------------------------------------------------------------ 6

Outcome crit_equivalences() {
  struct Setting {
    ClassificationCase c;
    Rational alpha;
  };
  int total = 0, good = 0, unreachable = 0;
  std::string first_bad;
  for (const Setting& s : {Setting{ClassificationCase::regular(R(1), R(2)), R(1, 3)},
                           Setting{ClassificationCase::regular(R(1), R(1, 2)), R(1, 5)},
                           Setting{ClassificationCase::degenerate(R(1)), R(1, 3)},
                           Setting{ClassificationCase::degenerate(R(1)), R(2, 3)}}) {
    const LieAlgebra alg = basis_change(s.c, s.alpha);
    for (const auto& claim : equivalence_claims(s.c, s.alpha)) {
      const ClaimResult r = check_claim(claim, alg, s.alpha);
      ++total;
      if (r.ok()) {
        ++good;
        if (!claim.expect_solution) ++unreachable;
      } else if (first_bad.empty()) {
        first_bad = s.c.label() + " " + claim.id;
      }
    }
  }
  std::string detail = std::to_string(good) + "/" + std::to_string(total) + " claims hold; " +
                       std::to_string(unreachable) +
                       " literal Y1 + bY3 readings confirmed unreachable, the Y2 + Y3 reading is the one verified";
  if (!first_bad.empty()) detail += "; first failure " + first_bad;
  return judge(good == total, detail);
}

// ------------------------------------------------------------------------ 7

Outcome crit_sequential() {
  Worst w;
  int checked = 0;
  for (const auto& nf : all_families()) {
    const SolutionFamily f = nf.make();
    if (!f.u_series) continue;
    w.see(sequential_residual(f, f.reference_grid).max(), nf.label);
    ++checked;
  }
  return judge(checked > 0 && w.value <= kSequential,
               std::to_string(checked) + " families, max " + sci(w.value) + " (" + w.where + ")");
}

// ------------------------------------------------------------------------ 8

Outcome crit_coincidences() {
  Worst w;
  for (const auto& alpha : {R(1, 3), R(2, 3)}) {
    for (const auto& a : {R(1), R(-1)}) {
      for (const auto& r : coincidence_checks(alpha, R(1), a)) {
        std::ostringstream s;
        s << r.id << " α=" << alpha << " a=" << a;
        w.see(r.max_difference, s.str());
      }
    }
  }
  return judge(w.value <= kCoincidence, "max difference " + sci(w.value) + " (" + w.where + ")");
}

// ------------------------------------------------------------------------ 9

Outcome stepper_ladder(const Rational& m, const Rational& k, const Rational& alpha) {
  const SolutionFamily f = family_19(m, k, alpha);
  std::vector<std::pair<double, double>> he;
  std::ostringstream d;
  d << "family 19 m=" << m << " k=" << k << " α=" << alpha << ", errors";
  for (int steps : {40, 80, 160}) {
    EvolveOptions o;
    o.steps = steps;
    const EvolveResult r = evolve(f, o);
    he.emplace_back(r.dt, r.error());
    d << " " << sci(r.error());
  }
  bool ok = he.back().second <= kMaxFinestError;
  d << ", ratios";
  for (std::size_t i = 1; i < he.size(); ++i) {
    const double ratio = he[i - 1].second / he[i].second;
    ok = ok && ratio >= kMinErrorRatio;
    d << " " << std::fixed << std::setprecision(2) << ratio;
  }
  const double order = convergence_order(he);
  ok = ok && order >= alpha.get_d() && order <= 2.0;
  d << ", order " << std::fixed << std::setprecision(2) << order;
  return judge(ok, d.str());
}

// The stated parameters give a negative radicand under an even root, so
// no real family exists there. That is reported as an expected failure;
// any other outcome runs the ladder as stated.
Outcome crit_stepper_stated() {
  try {
    return stepper_ladder(R(2), R(1), R(1, 2));
  } catch (const NonrealRoot& e) {
    return {Verdict::ExpectedFail, std::string("no real family 19 at m=2, k=1, α=1/2: ") + e.what()};
  }
}

Outcome crit_stepper_substitute() { return stepper_ladder(R(2), R(1), R(1, 3)); }

// ----------------------------------------------------------------------- 10

Outcome crit_note() {
  std::ostringstream out, err;
  const int code = run_cli({"verify", "--family", "5.1", "--a", "1", "--alpha", "1/2", "--format", "json"}, out, err);
  if (code != kExitPass) return {Verdict::Fail, "verify exited " + std::to_string(code) + ": " + err.str()};
  const auto doc = nlohmann::json::parse(out.str());
  const double alpha = 0.5;
  const double computed = std::tgamma(alpha) / std::tgamma(2 * alpha);
  const double printed = 1.0 / std::tgamma(alpha);
  for (const auto& n : doc.at("notes")) {
    if (n.at("id") != "NOTE-5.1-coefficient") continue;
    const double c = n.at("values").at("computed").get<double>();
    const double p = n.at("values").at("printed").get<double>();
    const bool ok = std::abs(c - computed) <= kNoteRel * computed && std::abs(p - printed) <= kNoteRel * printed;
    std::ostringstream s;
    s << std::setprecision(12) << "computed " << c << ", printed " << p;
    return judge(ok, s.str());
  }
  return {Verdict::Fail, "no NOTE-5.1-coefficient record in the verify report"};
}

struct Criterion {
  std::string id;
  std::string name;
  std::function<Outcome(const AcceptanceOptions&)> run;
};

std::vector<Criterion> criteria() {
  return {
      {"1", "tables", [](const AcceptanceOptions&) { return crit_tables(); }},
      {"2", "power-rule", [](const AcceptanceOptions& o) { return crit_power_rule(o.seed); }},
      {"3", "family-residuals", [](const AcceptanceOptions&) { return crit_residuals(); }},
      {"4", "lemma2", [](const AcceptanceOptions&) { return crit_lemma2(); }},
      {"5", "invariance", [](const AcceptanceOptions&) { return crit_isc(); }},
      {"6", "equivalences", [](const AcceptanceOptions&) { return crit_equivalences(); }},
      {"7", "sequential", [](const AcceptanceOptions&) { return crit_sequential(); }},
      {"8", "coincidences", [](const AcceptanceOptions&) { return crit_coincidences(); }},
      {"9", "stepper-stated", [](const AcceptanceOptions&) { return crit_stepper_stated(); }},
      {"9b", "stepper-substitute", [](const AcceptanceOptions&) { return crit_stepper_substitute(); }},
      {"10", "note-record", [](const AcceptanceOptions&) { return crit_note(); }},
  };
}

}  // namespace

const char* verdict_tag(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::ExpectedFail:
      return "XFAIL";
  }
  return "?";
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& out) {
  std::vector<CriterionResult> results;
  for (const auto& c : criteria()) {
    if (!opts.filter.empty() && (c.id + " " + c.name).find(opts.filter) == std::string::npos) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(opts);
    } catch (const std::exception& e) {
      o = {Verdict::Fail, std::string("threw ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back({c.id, c.name, o.verdict, o.detail, secs});
    out << std::left << std::setw(6) << verdict_tag(o.verdict) << std::setw(4) << c.id << std::setw(20) << c.name
        << o.detail << " [" << std::fixed << std::setprecision(2) << secs << "s]\n"
        << std::defaultfloat;
    out.flush();
  }
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (r.verdict == Verdict::Fail) return false;
  return true;
}

}  // namespace fraclie
