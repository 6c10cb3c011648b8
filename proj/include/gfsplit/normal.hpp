#pragma once

namespace gfsplit {

// Standard normal CDF, density, and quantile. The quantile is a rational
// initial guess polished by Newton steps on the CDF until
// |Phi(x) - s| <= 1e-13 (absolute), which holds for s in (1e-300, 1).
double normal_cdf(double x);
double normal_pdf(double x);
double normal_quantile(double s);

}  // namespace gfsplit
