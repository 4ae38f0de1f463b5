#ifndef FRACLIE_LIE_HPP
#define FRACLIE_LIE_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fraclie/monomial.hpp"
#include "fraclie/scalar_expr.hpp"

namespace fraclie {

/// xi d/dx + tau d/dt + mu d/du + phi d/dv
class VectorField {
 public:
  VectorField() = default;
  VectorField(MonomialSum xi, MonomialSum tau, MonomialSum mu, MonomialSum phi)
      : coeffs_{std::move(xi), std::move(tau), std::move(mu), std::move(phi)} {}

  const MonomialSum& xi() const { return coeffs_[0]; }
  const MonomialSum& tau() const { return coeffs_[1]; }
  const MonomialSum& mu() const { return coeffs_[2]; }
  const MonomialSum& phi() const { return coeffs_[3]; }
  const MonomialSum& coeff(Var v) const { return coeffs_[static_cast<int>(v)]; }

  bool is_zero() const;
  /// X(f) = sum_w X_w df/dw
  MonomialSum apply(const MonomialSum& f) const;

  friend VectorField operator+(const VectorField& a, const VectorField& b);
  friend VectorField operator-(const VectorField& a, const VectorField& b);
  friend VectorField operator*(const ScalarExpr& s, const VectorField& a);
  friend bool operator==(const VectorField&, const VectorField&) = default;

  std::string to_string() const;

 private:
  std::array<MonomialSum, 4> coeffs_;
};

VectorField bracket(const VectorField& X, const VectorField& Y);

using Matrix = std::vector<std::vector<ScalarExpr>>;

/// Coordinates over the basis of some LieAlgebra.
struct AlgebraElement {
  std::vector<ScalarExpr> coords;

  static AlgebraElement zero(std::size_t dim) { return {std::vector<ScalarExpr>(dim)}; }
  static AlgebraElement unit(std::size_t dim, std::size_t i);

  std::size_t dim() const { return coords.size(); }
  bool is_zero() const;
  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator*(const ScalarExpr& s, const AlgebraElement& a);
  friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;
};

/// Finite-dimensional algebra of vector fields with exact structure
/// constants c[i][j][k]: [B_i, B_j] = sum_k c[i][j][k] B_k.
class LieAlgebra {
 public:
  LieAlgebra(std::vector<std::string> names, std::vector<VectorField> basis,
             std::vector<std::vector<std::vector<ScalarExpr>>> constants)
      : names_(std::move(names)), basis_(std::move(basis)), c_(std::move(constants)) {}

  std::size_t dim() const { return basis_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<VectorField>& basis() const { return basis_; }
  const ScalarExpr& constant(std::size_t i, std::size_t j, std::size_t k) const { return c_[i][j][k]; }

  /// Coordinates of [B_i, B_j].
  AlgebraElement bracket_of_basis(std::size_t i, std::size_t j) const;
  /// Bracket computed from the structure constants.
  AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) const;
  VectorField field(const AlgebraElement& a) const;
  AlgebraElement element(std::initializer_list<ScalarExpr> coords) const;

  /// Renders a coordinate vector like "(1-α)/α·X2".
  std::string format(const AlgebraElement& a) const;

 private:
  std::vector<std::string> names_;
  std::vector<VectorField> basis_;
  std::vector<std::vector<std::vector<ScalarExpr>>> c_;
};

/// Exact coordinates of Z over the given fields; throws NotInSpan.
AlgebraElement decompose(const VectorField& Z, const std::vector<VectorField>& basis);
AlgebraElement decompose(const VectorField& Z, const LieAlgebra& algebra);

/// Builds the algebra, verifying closure (NotClosed), antisymmetry and the
/// Jacobi identity (std::logic_error if violated).
LieAlgebra structure_constants(std::vector<std::string> names, std::vector<VectorField> basis);

/// True iff the structure constants satisfy the Jacobi identity exactly.
bool jacobi_holds(const LieAlgebra& algebra);

/// Matrix M of ad_Y in the algebra basis: M * coords(Z) = coords([Y, Z]).
Matrix ad_matrix(const AlgebraElement& Y, const LieAlgebra& algebra);

/// Sum over rates r of P_r(eps) * exp(r * eps) where P_r is a polynomial
/// in eps with rational-function-of-alpha coefficients.
class ExpPoly {
 public:
  struct Term {
    ScalarExpr rate;
    std::vector<ScalarExpr> poly;  // coefficients of eps^0, eps^1, ...
  };

  ExpPoly() = default;
  static ExpPoly constant(const ScalarExpr& c);
  /// c * eps^power * exp(rate * eps)
  static ExpPoly monomial(const ScalarExpr& c, int power, const ScalarExpr& rate);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  double eval(const Rational& alpha, double eps) const;

  friend ExpPoly operator+(const ExpPoly& a, const ExpPoly& b);
  friend ExpPoly operator*(const ScalarExpr& s, const ExpPoly& a);
  friend bool operator==(const ExpPoly& a, const ExpPoly& b);

  std::string to_string() const;

 private:
  void add(const ScalarExpr& rate, int power, const ScalarExpr& c);
  std::vector<Term> terms_;
};

using ExpPolyElement = std::vector<ExpPoly>;

std::string format_exp_element(const ExpPolyElement& e, const LieAlgebra& algebra);

/// Closed form of Ad(exp(eps Y)) Z = exp(-eps ad_Y) Z, symbolic in eps.
/// Found when ad_Y acts nilpotently or diagonally on Z, or on each basis
/// vector in Z's support. Empty if no such closed form exists.
std::optional<ExpPolyElement> adjoint_closed_form(const AlgebraElement& Y, const AlgebraElement& Z,
                                                  const LieAlgebra& algebra);

/// Symbolic adjoint action; throws NoClosedForm when the closed form is
/// not available.
ExpPolyElement adjoint_action(const AlgebraElement& Y, const AlgebraElement& Z, const LieAlgebra& algebra);

/// Numeric adjoint action at a fixed alpha and eps: the closed form when
/// available, otherwise a scaled-and-squared Taylor series to 1e-12.
std::vector<double> adjoint_action(const AlgebraElement& Y, const AlgebraElement& Z, double eps,
                                   const Rational& alpha, const LieAlgebra& algebra);

/// Target of an equivalence claim: fixed coordinates, optionally one free
/// coordinate ("b") whose sign may be constrained.
struct EquivalenceTarget {
  AlgebraElement fixed;                // free coordinate entry is ignored
  std::optional<std::size_t> free_index;
  int free_sign = 0;                   // +1, -1, or 0 for unconstrained
  bool allow_negative_scale = false;
};

struct Equivalence {
  double eps = 0.0;
  double scale = 1.0;
  std::optional<double> free_value;
  double residual = 0.0;               // max |Ad(e^{eps C}) S - scale * T|
  bool closed_form = false;            // eps from an exact log formula
};

struct EquivalenceOutcome {
  std::optional<Equivalence> solution;
  std::string reason;                  // set when no solution was found
};

/// Finds eps (and a scale, and the free coordinate) such that
/// Ad(exp(eps * conjugator)) source = scale * target.
EquivalenceOutcome equivalence_solve(const AlgebraElement& source, const EquivalenceTarget& target,
                                     const AlgebraElement& conjugator, const LieAlgebra& algebra,
                                     const Rational& alpha);

/// True iff both index sets are subalgebras and brackets across them vanish.
bool direct_sum_check(const LieAlgebra& algebra, const std::vector<std::size_t>& first,
                      const std::vector<std::size_t>& second);

}  // namespace fraclie

#endif
