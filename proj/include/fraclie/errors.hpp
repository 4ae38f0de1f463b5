#ifndef FRACLIE_ERRORS_HPP
#define FRACLIE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fraclie {

/// Base of every error raised by the library. `kind()` is the stable name
/// used in CLI diagnostics and JSON reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define FRACLIE_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(#Name, what) {}   \
  };

FRACLIE_DEFINE_ERROR(DomainError)
FRACLIE_DEFINE_ERROR(PoleError)
FRACLIE_DEFINE_ERROR(UndefinedDerivative)
FRACLIE_DEFINE_ERROR(UnsupportedOperand)
FRACLIE_DEFINE_ERROR(NotInSpan)
FRACLIE_DEFINE_ERROR(NotClosed)
FRACLIE_DEFINE_ERROR(NoClosedForm)
FRACLIE_DEFINE_ERROR(InvalidCase)
FRACLIE_DEFINE_ERROR(InvalidParameter)
FRACLIE_DEFINE_ERROR(DegenerateDenominator)
FRACLIE_DEFINE_ERROR(HypothesisViolated)
FRACLIE_DEFINE_ERROR(NonrealRoot)
FRACLIE_DEFINE_ERROR(SingularParameter)
FRACLIE_DEFINE_ERROR(NonMonotone)
FRACLIE_DEFINE_ERROR(QuadratureFailure)
FRACLIE_DEFINE_ERROR(Unsupported)
FRACLIE_DEFINE_ERROR(Instability)

#undef FRACLIE_DEFINE_ERROR

}  // namespace fraclie

#endif
