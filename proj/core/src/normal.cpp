#include "css/normal.hpp"

#include <cmath>

namespace css {

double std_normal_pdf(double x) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
  static const double inv_sqrt2 = 0.7071067811865475244;
  return 0.5 * std::erfc(-x * inv_sqrt2);
}

}  // namespace css
