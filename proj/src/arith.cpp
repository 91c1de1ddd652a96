#include "nsw/arith.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "nsw/errors.hpp"

namespace nsw {

BigInt floor_of(const Rational& x) {
  BigInt num = boost::multiprecision::numerator(x);
  BigInt den = boost::multiprecision::denominator(x);  // always > 0
  BigInt q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) {
    q -= 1;
  }
  return q;
}

BigInt ceil_of(const Rational& x) { return -floor_of(-x); }

std::int64_t to_int64(const BigInt& x) {
  if (x > std::numeric_limits<std::int64_t>::max() ||
      x < std::numeric_limits<std::int64_t>::min()) {
    throw CapacityError("value " + x.str() + " does not fit in 64 bits");
  }
  return x.convert_to<std::int64_t>();
}

namespace {

BigInt parse_digits(std::string_view s, std::string_view whole) {
  if (s.empty()) {
    throw InvalidInput("malformed number '" + std::string(whole) + "'");
  }
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw InvalidInput("malformed number '" + std::string(whole) + "'");
    }
  }
  // A leading zero would make the string constructor read octal.
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return BigInt(std::string(s));
}

BigInt pow10(long e) {
  BigInt r = 1;
  for (long i = 0; i < e; ++i) r *= 10;
  return r;
}

Rational parse_decimal(std::string_view text, std::string_view whole) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    BigInt mag = parse_digits(exp_part, whole);
    if (mag > 4000) throw InvalidInput("exponent out of range in '" + std::string(whole) + "'");
    exponent = mag.convert_to<long>();
    if (exp_negative) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string digits;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) {
      throw InvalidInput("malformed number '" + std::string(whole) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    digits = std::string(text);
  }
  BigInt mantissa = parse_digits(digits, whole);
  if (negative) mantissa = -mantissa;
  if (exponent >= 0) return Rational(mantissa * pow10(exponent));
  return Rational(mantissa, pow10(-exponent));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const std::string_view whole = text;
  if (text.empty()) throw InvalidInput("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash), whole);
    Rational den = parse_decimal(text.substr(slash + 1), whole);
    if (den == 0) throw InvalidInput("zero denominator in '" + std::string(whole) + "'");
    return num / den;
  }
  return parse_decimal(text, whole);
}

std::string to_string(const Rational& x) {
  const BigInt& den = boost::multiprecision::denominator(x);
  if (den == 1) return boost::multiprecision::numerator(x).str();
  return boost::multiprecision::numerator(x).str() + "/" + den.str();
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

double log_of(const BigInt& x) {
  if (x <= 0) return -std::numeric_limits<double>::infinity();
  const unsigned bits = boost::multiprecision::msb(x) + 1;
  if (bits <= 1000) return std::log(x.convert_to<double>());
  // Keep the top 64 bits and add the shifted-out part as a power of two.
  const unsigned shift = bits - 64;
  BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

}  // namespace nsw
