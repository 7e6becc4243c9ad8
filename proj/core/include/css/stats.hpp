#ifndef CSS_STATS_HPP
#define CSS_STATS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "css/dataset.hpp"

namespace css {

/// Pearson correlations over an attribute subset. Entries involving a
/// zero-variance column are undefined and flagged rather than zeroed.
struct CorrelationMatrix {
  std::vector<std::string> attributes;
  std::vector<std::vector<double>> values;   // symmetric, unit diagonal
  std::vector<std::vector<bool>> defined;

  double at(int i, int j) const { return values[i][j]; }
  bool is_defined(int i, int j) const { return defined[i][j]; }
};

struct GaussianStats {
  std::vector<std::string> attributes;
  std::vector<double> means;
  std::vector<double> variances;                  // sample, n-1
  std::vector<std::vector<double>> covariances;   // symmetric
};

double sample_mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);
double sample_covariance(std::span<const double> xs, std::span<const double> ys);

/// NaN when either column has zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

CorrelationMatrix correlation_matrix(const Dataset& ds, std::span<const std::string> attrs);
CorrelationMatrix correlation_matrix(const Dataset& ds, std::span<const std::string> attrs,
                                     std::span<const std::uint32_t> rows);

GaussianStats gaussian_stats(const Dataset& ds, std::span<const std::string> attrs);

}  // namespace css

#endif
