#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace ucodes {

/// Exact fraction used for every detection probability and density.
using Rational = boost::rational<std::int64_t>;

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

/// Accepts "p/q", "p" and finite decimals such as "0.25".
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

/// Smallest integer >= r.
std::int64_t ceil(const Rational& r);

}  // namespace ucodes
