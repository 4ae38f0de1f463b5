// Acceptance runner. Default mode: every criterion must pass (expected
// failures allowed). --mutation: with the gamma function perturbed, the
// exact table check must still pass while the numeric checks must fail.
#include <iostream>
#include <map>
#include <string>

#include "fraclie/acceptance.hpp"
#include "fraclie/special.hpp"

int main(int argc, char** argv) {
  using namespace fraclie;
  const bool mutation = argc > 1 && std::string(argv[1]) == "--mutation";
  if (!mutation) {
    const auto results = run_acceptance({}, std::cout);
    const bool ok = all_passed(results);
    std::cout << (ok ? "acceptance: all criteria met\n" : "acceptance: FAILED\n");
    return ok ? 0 : 1;
  }

  special::ScopedGammaMutation mutate(1e-3);
  const auto results = run_acceptance({}, std::cout);
  std::map<std::string, Verdict> by_id;
  for (const auto& r : results) by_id[r.id] = r.verdict;
  const bool tables_pass = by_id["1"] == Verdict::Pass;
  const bool quadrature_fails = by_id["2"] == Verdict::Fail;
  const bool residuals_fail = by_id["3"] == Verdict::Fail;
  std::cout << (tables_pass ? "PASS" : "FAIL") << "  mutation leaves the exact table check passing\n"
            << (quadrature_fails ? "PASS" : "FAIL") << "  mutation is caught by the power-rule check\n"
            << (residuals_fail ? "PASS" : "FAIL") << "  mutation is caught by the family residual check\n";
  return tables_pass && quadrature_fails && residuals_fail ? 0 : 1;
}
