#include "mixnorm/special.hpp"

#include <cmath>

namespace mixnorm {

namespace {

// lgamma(z) - [(z - 1/2) log z - z + log(2 pi)/2]
double stirling_tail(double z) {
  const double z2 = 1.0 / (z * z);
  return (1.0 / 12.0 - z2 * (1.0 / 360.0 - z2 * (1.0 / 1260.0 - z2 / 1680.0))) / z;
}

}  // namespace

double log_gamma_ratio(double a, double b) {
  if (a < 20.0) return std::lgamma(a) - std::lgamma(a + b);
  return -b * std::log(a) - (a + b - 0.5) * std::log1p(b / a) + b + stirling_tail(a) -
         stirling_tail(a + b);
}

double beta_function(double a, double b) {
  if (a < b) return beta_function(b, a);
  return std::exp(log_gamma_ratio(a, b) + std::lgamma(b));
}

double binomial(double alpha, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= (alpha - i) / (i + 1.0);
  return c;
}

}  // namespace mixnorm
