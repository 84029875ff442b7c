#pragma once

namespace lvct {

double normal_cdf(double x);

/// Inverse standard normal CDF for p in (0, 1). Rational starting
/// approximation plus one Halley step against erfc; absolute error
/// below 1e-12 over (1e-300, 1 - 1e-16).
double normal_quantile(double p);

/// Two-sided critical value z_{level/2}, i.e. normal_quantile(1 - level/2).
double critical_value(double level);

}  // namespace lvct
