#pragma once

namespace mixnorm {

// log Gamma(a) - log Gamma(a + b), accurate when a is large and b moderate.
double log_gamma_ratio(double a, double b);

// Euler Beta function B(a, b).
double beta_function(double a, double b);

// Generalized binomial coefficient binom(alpha, k).
double binomial(double alpha, int k);

}  // namespace mixnorm
