#include "ebir/special.hpp"

#include <cmath>
#include <stdexcept>

namespace ebir {

// Recurrence psi(x) = psi(x+1) - 1/x to push the argument above 10,
// then the asymptotic expansion
//   psi(x) ~ ln x - 1/(2x) - sum_k B_{2k} / (2k x^{2k}).
// With the shift threshold at 10 the truncated series is accurate to
// well below 1e-12.
double digamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("digamma: argument must be positive");
  }
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // B_2/2, B_4/4, ... B_12/12 over x^{2k}
  const double series =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 -
                                              inv2 * (691.0 / 32760.0))))));
  result += std::log(x) - 0.5 * inv - series;
  return result;
}

} // namespace ebir
