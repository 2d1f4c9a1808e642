#include "envstat/rational.hpp"

#include <boost/multiprecision/integer.hpp>
#include <cctype>
#include <cmath>

#include "envstat/errors.hpp"

namespace envstat {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw validation_error("empty rational literal");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.erase(s.begin());
  }

  Rational value;
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw validation_error("bad rational literal: '" + text + "'");
    }
    BigInt d(den);
    if (d == 0) throw validation_error("zero denominator in '" + text + "'");
    value = Rational(BigInt(num), d);
  } else if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || !all_digits(frac)) {
      throw validation_error("bad rational literal: '" + text + "'");
    }
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    value = Rational(BigInt(whole) * scale + (frac.empty() ? BigInt(0) : BigInt(frac)), scale);
  } else {
    if (!all_digits(s)) throw validation_error("bad rational literal: '" + text + "'");
    value = Rational(BigInt(s));
  }
  return negative ? Rational(-value) : value;
}

std::string format_rational(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

double log_big(const BigInt& n) {
  if (n < 1) throw domain_error("log of a count smaller than 1");
  const unsigned bits = boost::multiprecision::msb(n);
  if (bits <= 62) return std::log(n.convert_to<double>());
  const unsigned shift = bits - 62;
  const BigInt top = n >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * M_LN2;
}

}  // namespace envstat
