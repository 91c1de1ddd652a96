#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace nsw {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// floor / ceil of a rational as a big integer.
BigInt floor_of(const Rational& x);
BigInt ceil_of(const Rational& x);

// Narrowing with an overflow check; throws CapacityError on overflow.
std::int64_t to_int64(const BigInt& x);

// Accepts "p/q", integers, and decimals with an optional exponent
// ("1.5", "-2", "3e-2", "0.125E1"). Exact: no binary floating point on the way.
Rational parse_rational(std::string_view text);

// Canonical text: "p" when integral, otherwise "p/q".
std::string to_string(const Rational& x);

double to_double(const Rational& x);

// ln of a positive big integer without overflowing double.
double log_of(const BigInt& x);

}  // namespace nsw
