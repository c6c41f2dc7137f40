#pragma once

#include <cmath>

namespace ucodes {

/// q-ary entropy H_p(x) = x log_p(p-1) - x log_p x - (1-x) log_p(1-x), with
/// the endpoint limits H_p(0) = 0 and H_p(1) = log_p(p-1).
inline double q_ary_entropy(int p, double x) {
  const double lp = std::log(static_cast<double>(p));
  double h = 0;
  if (x > 0) h += x * (std::log(static_cast<double>(p - 1)) - std::log(x)) / lp;
  if (x < 1) h -= (1 - x) * std::log1p(-x) / lp;
  return h;
}

inline double binary_entropy(double x) { return q_ary_entropy(2, x); }

}  // namespace ucodes
