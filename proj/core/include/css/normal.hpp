#ifndef CSS_NORMAL_HPP
#define CSS_NORMAL_HPP

namespace css {

/// Standard normal density.
double std_normal_pdf(double x);

/// Standard normal CDF via erfc; absolute error below 1e-12 over the real line.
double std_normal_cdf(double x);

}  // namespace css

#endif
