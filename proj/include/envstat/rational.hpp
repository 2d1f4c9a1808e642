#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace envstat {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "3", "-5", "1/2", "-7/3" and plain decimals like "0.25" (converted
// exactly). Throws validation_error on anything else.
Rational parse_rational(const std::string& text);

// "p" when the denominator is 1, "p/q" otherwise.
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

// ln(n) for n >= 1, computed from the top bits so arbitrarily large counts
// never overflow. Throws domain_error for n < 1.
double log_big(const BigInt& n);

}  // namespace envstat
