#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace tbrova {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log(sum(exp(v))) with the usual max shift; -inf entries are ignored.
inline double log_sum_exp(std::span<const double> v) {
  double m = neg_inf;
  for (double x : v)
    if (x > m) m = x;
  if (m == neg_inf) return neg_inf;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - m);
  return m + std::log(acc);
}

inline double log_sum_exp(double a, double b) {
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  double m = a > b ? a : b;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace tbrova
