#ifndef FRACLIE_EQUIVALENCES_HPP
#define FRACLIE_EQUIVALENCES_HPP

#include <string>
#include <vector>

#include "fraclie/catalog.hpp"
#include "fraclie/lie.hpp"

namespace fraclie {

/// One stated equivalence of optimal-system elements under a one-parameter
/// adjoint action, in the Y basis.
struct EquivalenceClaim {
  std::string id;
  std::string statement;  // human-readable form of what is checked
  AlgebraElement source;
  AlgebraElement conjugator;
  EquivalenceTarget target;
  bool expect_solution = true;  // false for readings known to be unreachable
};

struct ClaimResult {
  EquivalenceClaim claim;
  EquivalenceOutcome outcome;
  double reapplied = 0.0;  // max |Ad(e^{eps C}) S - scale T| recomputed with the numeric action
  bool ok() const;
};

/// Case 2.1 (regular, D != 0): U2 and U3 normal forms under Y1 and Y3.
/// Also carries the literal "Y1 + a Y3" reading of the U2 claim with
/// expect_solution = false.
/// Case 2.2: items a) to d) for the given sample values of a.
std::vector<EquivalenceClaim> equivalence_claims(const ClassificationCase& c, const Rational& alpha,
                                                 const std::vector<Rational>& samples = {});

ClaimResult check_claim(const EquivalenceClaim& claim, const LieAlgebra& algebra, const Rational& alpha);

struct CoincidenceResult {
  std::string id;
  std::string statement;
  double max_difference = 0.0;
};

/// The Case 2.1 / Case 2.2 overlaps at m = alpha/(1-2alpha), evaluated on
/// a 10 x 10 grid for the given a.
std::vector<CoincidenceResult> coincidence_checks(const Rational& alpha, const Rational& k, const Rational& a);

}  // namespace fraclie

#endif
