#ifndef FRACLIE_CATALOG_HPP
#define FRACLIE_CATALOG_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fraclie/grid.hpp"
#include "fraclie/lie.hpp"
#include "fraclie/rational.hpp"

namespace fraclie {

/// Generic coupling b(u), or the power law b(u) = k u^m split by whether
/// D = 2 m alpha + alpha - m vanishes. In the degenerate subcase m is
/// alpha / (1 - 2 alpha) and is kept symbolic.
struct ClassificationCase {
  enum class Kind { Generic, PowerLaw };
  enum class Subcase { Regular, Degenerate };

  Kind kind = Kind::Generic;
  Subcase subcase = Subcase::Regular;
  Rational k{1};
  Rational m{1};  // meaningful for Regular only

  static ClassificationCase generic();
  /// Throws InvalidCase when k or m is zero.
  static ClassificationCase regular(const Rational& k, const Rational& m);
  static ClassificationCase degenerate(const Rational& k);
  /// Regular or Degenerate depending on whether D vanishes at alpha.
  static ClassificationCase classify(const Rational& k, const Rational& m, const Rational& alpha);

  bool is_power_law() const { return kind == Kind::PowerLaw; }
  /// "1", "2.1" or "2.2".
  std::string label() const;
  /// m as a function of alpha (constant in the regular subcase).
  ScalarExpr m_expr() const;
  Rational m_at(const Rational& alpha) const;
  /// D = 2 m alpha + alpha - m as a function of alpha.
  ScalarExpr d_expr() const;

  /// Checks 0 < alpha < 1, and alpha != 1/2 for the degenerate subcase.
  void validate(const Rational& alpha) const;
};

/// Right-hand side coupling c(u) = b(u)^2 of the second equation.
struct Coupling {
  std::function<double(double)> c;
  std::function<double(double)> dc;
  std::string label;
};

/// k^2 u^(2m) for the power law; 1 + u^2 as the generic representative.
Coupling coupling_for(const ClassificationCase& c, const Rational& alpha);
/// c(u) = -u: the transonic-flow system reached by the sign flip.
Coupling transonic_coupling();

struct SymmetryRecord {
  ClassificationCase case_;
  std::vector<std::string> names;
  std::vector<VectorField> fields;
};

/// X1 = d/dx, X2 = t^(alpha-1) d/dv, X3 = x d/dx + (t/alpha) d/dt and, for
/// the power law, X4 = x d/dx + (u/m) d/du + ((m+1)/m) v d/dv.
SymmetryRecord generators(const ClassificationCase& c);

struct KernelMember {
  MonomialSum f;
  Rational exponent;  // alpha - j at the given alpha
  bool in_domain;     // exponent > -1, so the integral definition applies
};

/// t^(alpha-1), ..., t^(alpha-n); requires n - 1 < alpha < n.
std::vector<KernelMember> kernel_solutions(const Rational& alpha, int n);

/// Y-basis algebra for Case 2. Throws DegenerateDenominator when the
/// regular branch is requested at an alpha with D = 0, and InvalidCase for
/// a generic case.
LieAlgebra basis_change(const ClassificationCase& c, const Rational& alpha);
/// Symbolic-alpha version (no pole check).
LieAlgebra basis_change(const ClassificationCase& c);
/// Y_i expressed over X_1..X_4.
std::vector<AlgebraElement> y_in_x(const ClassificationCase& c);
/// The direct-sum partition of the Y basis.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> y_partition(const ClassificationCase& c);

/// Algebra spanned by the X generators.
LieAlgebra x_algebra(const ClassificationCase& c);

enum class ParamDomain { Real, Sign, SignOrZero };

struct ParamSlot {
  std::string name;
  ParamDomain domain;
};

bool param_allowed(ParamDomain d, const Rational& value);
std::string domain_string(ParamDomain d);

struct OptimalSystemElement {
  std::string id;     // e.g. "Case2.1-U4"
  std::string label;  // e.g. "U4"
  std::vector<ParamSlot> params;
  std::string x_formula;
  std::string y_formula;  // empty for Case 1
  std::string validity;   // extra constraint on (alpha, m), if any
  bool has_invariant_solutions = true;
  std::function<AlgebraElement(const std::vector<Rational>&)> x_coords;
  std::function<AlgebraElement(const std::vector<Rational>&)> y_coords;  // Case 2 only

  /// Throws InvalidParameter on wrong arity or out-of-range values.
  void check_params(const std::vector<Rational>& values) const;
};

std::vector<OptimalSystemElement> optimal_system(const ClassificationCase& c);
const OptimalSystemElement& find_element(const std::vector<OptimalSystemElement>& list, const std::string& label);

/// State of a candidate reduced solution at one point z.
struct ReducedState {
  double z = 0.0;
  double phi = 0.0, dphi = 0.0;
  double psi = 0.0, dpsi = 0.0;
  double frac_phi = 0.0, frac_psi = 0.0;  // D^alpha_z phi, D^alpha_z psi
};

/// u = Pu(x,t) phi(z) + Qu(x,t), v = Pv(x,t) psi(z) + Qv(x,t).
struct SimilarityReduction {
  std::string element_id;
  bool has_invariant_solutions = true;
  bool fractional = true;  // reduced system is a fractional pair in z
  std::string z_formula, u_formula, v_formula;
  std::array<std::string, 2> reduced_formula;
  std::string validity;
  std::function<double(double, double)> z, pu, qu, pv, qv;
  /// Left minus right side of both reduced equations.
  std::function<std::array<double, 2>(const ReducedState&)> residual;

  double u(double x, double t, const std::function<double(double)>& phi) const;
  double v(double x, double t, const std::function<double(double)>& psi) const;
};

/// Reduction for one optimal-system element at fixed alpha and parameter
/// values. Elements without invariant solutions return a record with
/// has_invariant_solutions = false.
SimilarityReduction similarity_reduction(const OptimalSystemElement& element, const ClassificationCase& c,
                                         const Rational& alpha, const std::vector<Rational>& params);

/// xi u_x + tau u_t - mu and xi v_x + tau v_t - phi over the grid.
ResidualReport invariance_surface_residual(const VectorField& X, const Rational& alpha, const JetFn& u,
                                           const JetFn& v, const GridSpec& grid);

/// Structure constants the tables list: [B_i, B_j] coordinates.
using CommutatorTable = std::vector<std::vector<AlgebraElement>>;
/// Adjoint entries Ad(exp(eps B_i)) B_j.
using AdjointTable = std::vector<std::vector<ExpPolyElement>>;

/// Tables as printed: Case 1 in the X basis, Case 2 in the Y basis.
CommutatorTable expected_commutator_table(const ClassificationCase& c);
AdjointTable expected_adjoint_table(const ClassificationCase& c);  // Case 2 only

/// Differences between a computed algebra and the expected table (empty if equal).
std::vector<std::string> compare_commutators(const LieAlgebra& algebra, const CommutatorTable& expected);
std::vector<std::string> compare_adjoint(const LieAlgebra& algebra, const AdjointTable& expected);

/// Versioned JSON description of the catalog ("fraclie-catalog/1").
nlohmann::json catalog_json(const ClassificationCase& c);

}  // namespace fraclie

#endif
