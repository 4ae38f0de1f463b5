#include "fraclie/special.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <numbers>

#include "fraclie/errors.hpp"

namespace fraclie::special {

namespace {

std::atomic<double> g_mutation{0.0};

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos(double x) {
  // x >= 0.5
  x -= 1.0;
  double sum = kLanczos[0];
  const double shift = g_mutation.load(std::memory_order_relaxed);
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    double c = kLanczos[i];
    if (i == 1) c *= 1.0 + shift;
    sum += c / (x + static_cast<double>(i));
  }
  const double t = x + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * sum;
}

}  // namespace

double gamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) {
    throw PoleError("gamma pole at " + std::to_string(x));
  }
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos(1.0 - x));
  }
  return lanczos(x);
}

double gamma(const Rational& x) {
  if (is_nonpositive_integer(x)) throw PoleError("gamma pole at " + x.get_str());
  return gamma(x.get_d());
}

void require_regular_gamma_argument(const Rational& arg, const char* label) {
  if (is_nonpositive_integer(arg)) {
    throw SingularParameter(std::string("gamma pole: ") + label + " = " + arg.get_str());
  }
}

ScopedGammaMutation::ScopedGammaMutation(double relative_shift)
    : previous_(g_mutation.exchange(relative_shift)) {}

ScopedGammaMutation::~ScopedGammaMutation() { g_mutation.store(previous_); }

}  // namespace fraclie::special
