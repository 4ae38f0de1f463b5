#ifndef FRACLIE_ACCEPTANCE_HPP
#define FRACLIE_ACCEPTANCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fraclie {

enum class Verdict { Pass, Fail, ExpectedFail };

const char* verdict_tag(Verdict v);

struct CriterionResult {
  std::string id;    // "1" .. "10", or "9b" for a substitute run
  std::string name;  // short slug used by filters
  Verdict verdict = Verdict::Fail;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::string filter;  // substring of "id name"; empty runs everything
  unsigned seed = 0;   // randomized samples in the quadrature matrix
};

/// Runs the acceptance matrix, printing one line per criterion to `out`
/// as it goes. Expected failures are criteria whose stated parameters have
/// no real solution; they are reported but do not count as failures.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace fraclie

#endif
