#pragma once

namespace oneshot {

/// Standard normal distribution function.
double normal_cdf(double z);

/// Standard normal quantile (inverse of normal_cdf).
double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Chi-square distribution function with df degrees of freedom.
double chi2_cdf(double x, int df);

/// Chi-square upper tail probability.
double chi2_sf(double x, int df);

/// Upper alpha percentage point of the chi-square distribution.
double chi2_quantile_upper(double alpha, int df);

}  // namespace oneshot
