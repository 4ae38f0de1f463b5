#ifndef FRACLIE_RATIONAL_HPP
#define FRACLIE_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace fraclie {

/// Exact rational number (always kept in lowest terms, positive denominator).
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);

/// Parses "p/q" or "p". Decimal and exponent notation are rejected.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

bool is_integer(const Rational& q);

/// True for 0, -1, -2, ... (the poles of the gamma function).
bool is_nonpositive_integer(const Rational& q);

/// Order parameter of the fractional derivative: positive, non-integer.
class AlphaParameter {
 public:
  explicit AlphaParameter(Rational value);
  static AlphaParameter parse(std::string_view text) {
    return AlphaParameter(parse_rational(text));
  }

  const Rational& value() const { return value_; }
  double to_double() const { return value_.get_d(); }
  bool in_unit_interval() const { return value_ > 0 && value_ < 1; }

 private:
  Rational value_;
};

}  // namespace fraclie

#endif
