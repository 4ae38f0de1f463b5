#include "fraclie/rational.hpp"

#include <regex>

#include "fraclie/errors.hpp"

namespace fraclie {

Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  static const std::regex pattern(R"(^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$)");
  std::string s(text);
  std::smatch m;
  if (!std::regex_match(s, m, pattern)) {
    throw InvalidParameter("expected an exact rational \"p/q\", got \"" + s + "\"");
  }
  mpz_class num(m[1].str());
  mpz_class den(m[2].matched ? m[2].str() : std::string("1"));
  if (den == 0) throw InvalidParameter("zero denominator in \"" + s + "\"");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

bool is_nonpositive_integer(const Rational& q) { return is_integer(q) && q <= 0; }

AlphaParameter::AlphaParameter(Rational value) : value_(std::move(value)) {
  value_.canonicalize();
  if (value_ <= 0 || is_integer(value_)) {
    throw InvalidParameter("alpha must be a positive non-integer, got " + value_.get_str());
  }
}

}  // namespace fraclie
