#ifndef FRACLIE_SPECIAL_HPP
#define FRACLIE_SPECIAL_HPP

#include "fraclie/rational.hpp"

namespace fraclie::special {

/// Gamma function for real arguments (Lanczos, g = 7, with reflection).
/// Relative accuracy is about 1e-15 on [-20, 20] away from the poles.
/// Throws PoleError at nonpositive integers.
double gamma(double x);

/// Gamma at an exact rational argument; poles are detected exactly.
double gamma(const Rational& x);

/// Throws SingularParameter naming `label` when `arg` is a gamma pole.
void require_regular_gamma_argument(const Rational& arg, const char* label);

/// Test hook: perturbs the leading Lanczos coefficient while alive.
/// Used only by the mutation check of the self test.
class ScopedGammaMutation {
 public:
  explicit ScopedGammaMutation(double relative_shift);
  ~ScopedGammaMutation();
  ScopedGammaMutation(const ScopedGammaMutation&) = delete;
  ScopedGammaMutation& operator=(const ScopedGammaMutation&) = delete;

 private:
  double previous_;
};

}  // namespace fraclie::special

#endif
