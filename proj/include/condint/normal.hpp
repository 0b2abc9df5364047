#pragma once

namespace condint {

/// Standard normal CDF.
double normal_cdf(double x) noexcept;

/// Standard normal quantile. Rational approximation refined by one Halley
/// step; absolute error below 1e-9 on (0, 1). Returns -inf / +inf at 0 / 1.
double normal_quantile(double p);

/// Quantile of chi-square with one degree of freedom.
double chi_square1_quantile(double p);

}  // namespace condint
