#pragma once

#include <cmath>

namespace ebir {

/// Digamma function psi(x) for x > 0, absolute error below 1e-10.
/// Throws std::domain_error for x <= 0.
double digamma(double x);

/// Standard normal CDF.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

inline double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

} // namespace ebir
