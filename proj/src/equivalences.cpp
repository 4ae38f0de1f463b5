#include "fraclie/equivalences.hpp"

#include <cmath>

#include "fraclie/errors.hpp"

namespace fraclie {

namespace {

AlgebraElement coords(std::initializer_list<Rational> values) {
  AlgebraElement e;
  for (const auto& v : values) e.coords.emplace_back(v);
  return e;
}

int sign_of(double v) { return v > 0.0 ? 1 : -1; }

std::string signed_term(int s, const std::string& name) { return (s > 0 ? " + " : " - ") + name; }

}  // namespace

bool ClaimResult::ok() const {
  if (!claim.expect_solution) return !outcome.solution;
  return outcome.solution && reapplied <= 1e-10;
}

std::vector<EquivalenceClaim> equivalence_claims(const ClassificationCase& c, const Rational& alpha,
                                                 const std::vector<Rational>& samples) {
  if (!c.is_power_law()) throw InvalidCase("equivalence claims are stated for Case 2 only");
  c.validate(alpha);
  const auto list = optimal_system(c);
  std::vector<EquivalenceClaim> out;

  if (c.subcase == ClassificationCase::Subcase::Regular) {
    const Rational d = c.d_expr().eval(alpha);
    if (d == 0) throw DegenerateDenominator("2m alpha + alpha - m vanishes; use the degenerate subcase");
    const auto& u2 = find_element(list, "U2");
    const auto& u3 = find_element(list, "U3");
    for (int a : {1, -1}) {
      const Rational ar(a);
      const AlgebraElement src2 = u2.y_coords({ar});
      const int s2 = sign_of(src2.coords[2].eval_double(alpha));
      EquivalenceClaim n2;
      n2.id = "U2(a=" + std::to_string(a) + ")~Y2" + (s2 > 0 ? "+" : "-") + "Y3";
      n2.statement = "Ad(exp(eps Y1)) U2 = s (Y2" + signed_term(s2, "Y3") + "), s > 0";
      n2.source = src2;
      n2.conjugator = coords({1, 0, 0, 0});
      n2.target.fixed = coords({0, 1, Rational(s2), 0});
      out.push_back(n2);

      EquivalenceClaim lit;
      lit.id = "U2(a=" + std::to_string(a) + ")~Y1+bY3 (literal)";
      lit.statement = "Ad(exp(eps Y1)) U2 = s (Y1 + b Y3): Y1 acts on U2 only by rescaling Y2";
      lit.source = src2;
      lit.conjugator = coords({1, 0, 0, 0});
      lit.target.fixed = coords({1, 0, 0, 0});
      lit.target.free_index = 2;
      lit.target.allow_negative_scale = true;
      lit.expect_solution = false;
      out.push_back(lit);

      const AlgebraElement src3 = u3.y_coords({ar});
      const int s3 = sign_of(a * d.get_d());
      EquivalenceClaim n3;
      n3.id = "U3(a=" + std::to_string(a) + ")~Y1" + (s3 > 0 ? "+" : "-") + "Y4";
      n3.statement = "Ad(exp(eps Y3)) U3 = s (Y1" + signed_term(s3, "Y4") + "), s = 2m alpha + alpha - m";
      n3.source = src3;
      n3.conjugator = coords({0, 0, 1, 0});
      n3.target.fixed = coords({1, 0, 0, Rational(s3)});
      n3.target.allow_negative_scale = true;
      out.push_back(n3);
    }
    return out;
  }

  std::vector<Rational> as = samples;
  if (as.empty()) as = {make_rational(1, 2), Rational(2), make_rational(-1, 2), Rational(-2)};
  for (const auto& a : as) {
    if (a == 0) continue;
    const int sa = a > 0 ? 1 : -1;
    for (int e4 : {1, -1}) {
      const char item = sa > 0 ? (e4 > 0 ? 'a' : 'b') : (e4 > 0 ? 'c' : 'd');
      EquivalenceClaim cl;
      cl.id = std::string(1, item) + ") a=" + to_string(a);
      cl.statement = "Ad(exp(eps Y3)) (Y1 + a Y2" + signed_term(e4, "Y4") + ") = s (Y1" + signed_term(sa, "Y2") +
                     " + b Y4), s > 0, b " + (e4 > 0 ? "> 0" : "< 0");
      cl.source = coords({1, a, 0, Rational(e4)});
      cl.conjugator = coords({0, 0, 1, 0});
      cl.target.fixed = coords({1, Rational(sa), 0, 0});
      cl.target.free_index = 3;
      cl.target.free_sign = e4;
      out.push_back(cl);
    }
  }
  return out;
}

ClaimResult check_claim(const EquivalenceClaim& claim, const LieAlgebra& algebra, const Rational& alpha) {
  ClaimResult r{claim, equivalence_solve(claim.source, claim.target, claim.conjugator, algebra, alpha), 0.0};
  if (!r.outcome.solution) return r;
  const auto& s = *r.outcome.solution;
  const auto act = adjoint_action(claim.conjugator, claim.source, s.eps, alpha, algebra);
  for (std::size_t i = 0; i < act.size(); ++i) {
    double t = claim.target.fixed.coords[i].eval_double(alpha);
    if (claim.target.free_index && *claim.target.free_index == i) t = s.free_value.value_or(0.0);
    r.reapplied = std::max(r.reapplied, std::abs(act[i] - s.scale * t));
  }
  return r;
}

std::vector<CoincidenceResult> coincidence_checks(const Rational& alpha, const Rational& k, const Rational& a) {
  if (a != 1 && a != -1) throw InvalidParameter("coincidence checks take a = 1 or -1");
  const ClassificationCase deg = ClassificationCase::degenerate(k);
  deg.validate(alpha);
  const Rational m = alpha / (1 - 2 * alpha);
  const ClassificationCase reg = ClassificationCase::regular(k, m);
  const auto l21 = optimal_system(reg);
  const auto l22 = optimal_system(deg);
  GridSpec grid{0.5, 1.5, 10, 0.5, 2.0, 10};

  auto phi = [](double z) { return 1.0 + z * z; };
  auto psi = [](double z) { return 2.0 + std::sin(z); };
  auto compare = [&](const SimilarityReduction& p, const SimilarityReduction& q) {
    double diff = 0.0;
    for (int i = 0; i < grid.nx; ++i) {
      for (int j = 0; j < grid.nt; ++j) {
        const double x = grid.x(i), t = grid.t(j);
        diff = std::max(diff, std::abs(p.u(x, t, phi) - q.u(x, t, phi)));
        diff = std::max(diff, std::abs(p.v(x, t, psi) - q.v(x, t, psi)));
      }
    }
    return diff;
  };

  std::vector<CoincidenceResult> out;
  {
    const auto r1 = similarity_reduction(find_element(l21, "U1"), reg, alpha, {a});
    const auto r2 = similarity_reduction(find_element(l22, "U1"), deg, alpha, {a});
    out.push_back({"2.1-U1=2.2-U1", "Case 2.1 U1 and Case 2.2 U1 give the same invariant form", compare(r1, r2)});
  }
  {
    const auto r1 = similarity_reduction(find_element(l21, "U4"), reg, alpha, {a});
    const auto r2 = similarity_reduction(find_element(l22, "U3"), deg, alpha, {a});
    out.push_back({"2.1-U4=2.2-U3", "Case 2.1 U4 and Case 2.2 U3 give the same invariant form at equal a",
                   compare(r1, r2)});
  }
  {
    // At D = 0 the Case 2.1 U3 element is c times the Case 2.2 U4 element
    // with parameter -a/c, so the U4 invariant form must satisfy its ISC.
    const Rational c = alpha * (1 - alpha) / (1 - 2 * alpha);
    const double ap = Rational(-a / c).get_d(), al = alpha.get_d();
    const VectorField field = x_algebra(reg).field(find_element(l21, "U3").x_coords({a}));
    JetFn u = [=](double x, double t) {
      const double tp = std::pow(t, 2 * al - 1);
      return Jet{tp * phi(x), tp * 2 * x, (2 * al - 1) * tp / t * phi(x), tp * 2};
    };
    JetFn v = [=](double x, double t) {
      const double tp = std::pow(t, al - 1), lt = std::log(t);
      const double g = psi(x) - ap * al * lt;
      return Jet{tp * g, tp * std::cos(x), (g * (al - 1) - ap * al) * tp / t, -tp * std::sin(x)};
    };
    const auto rep = invariance_surface_residual(field, alpha, u, v, grid);
    out.push_back({"2.1-U3~2.2-U4", "Case 2.2 U4 form with parameter -a/c satisfies the Case 2.1 U3 invariance condition",
                   rep.max()});
  }
  return out;
}

}  // namespace fraclie
