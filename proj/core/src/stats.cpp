#include "css/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace css {

double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty column");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / double(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("variance needs at least 2 rows");
  double mu = sample_mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - mu) * (x - mu);
  return s / double(xs.size() - 1);
}

double sample_covariance(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("covariance: length mismatch");
  if (xs.size() < 2) throw std::invalid_argument("covariance needs at least 2 rows");
  double mx = sample_mean(xs), my = sample_mean(ys);
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (xs[i] - mx) * (ys[i] - my);
  return s / double(xs.size() - 1);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  double vx = sample_variance(xs), vy = sample_variance(ys);
  if (vx <= 0.0 || vy <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sample_covariance(xs, ys) / std::sqrt(vx * vy);
}

namespace {

CorrelationMatrix correlation_impl(const Dataset& ds, std::span<const std::string> attrs,
                                   std::span<const std::uint32_t> rows) {
  if (attrs.empty()) throw std::invalid_argument("correlation_matrix: empty attribute set");
  const std::size_t k = attrs.size();

  std::vector<std::vector<double>> cols(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& full = ds.column(attrs[i]);
    if (rows.empty()) {
      cols[i] = full;
    } else {
      cols[i].reserve(rows.size());
      for (auto r : rows) cols[i].push_back(full[r]);
    }
  }
  if (cols.front().size() < 2)
    throw std::invalid_argument("correlation_matrix: needs at least 2 rows");

  CorrelationMatrix m;
  m.attributes.assign(attrs.begin(), attrs.end());
  m.values.assign(k, std::vector<double>(k, 0.0));
  m.defined.assign(k, std::vector<bool>(k, true));

  std::vector<double> var(k);
  for (std::size_t i = 0; i < k; ++i) var[i] = sample_variance(cols[i]);

  for (std::size_t i = 0; i < k; ++i) {
    if (var[i] <= 0.0) m.defined[i][i] = false;
    m.values[i][i] = 1.0;
    for (std::size_t j = i + 1; j < k; ++j) {
      if (var[i] <= 0.0 || var[j] <= 0.0) {
        m.defined[i][j] = m.defined[j][i] = false;
        m.values[i][j] = m.values[j][i] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      double c = sample_covariance(cols[i], cols[j]) / std::sqrt(var[i] * var[j]);
      m.values[i][j] = m.values[j][i] = c;
    }
  }
  return m;
}

}  // namespace

CorrelationMatrix correlation_matrix(const Dataset& ds, std::span<const std::string> attrs) {
  return correlation_impl(ds, attrs, {});
}

CorrelationMatrix correlation_matrix(const Dataset& ds, std::span<const std::string> attrs,
                                     std::span<const std::uint32_t> rows) {
  return correlation_impl(ds, attrs, rows);
}

GaussianStats gaussian_stats(const Dataset& ds, std::span<const std::string> attrs) {
  GaussianStats st;
  st.attributes.assign(attrs.begin(), attrs.end());
  const std::size_t k = attrs.size();
  st.means.resize(k);
  st.variances.resize(k);
  st.covariances.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    const auto& ci = ds.column(attrs[i]);
    st.means[i] = sample_mean(ci);
    st.variances[i] = sample_variance(ci);
    st.covariances[i][i] = st.variances[i];
    for (std::size_t j = i + 1; j < k; ++j) {
      double c = sample_covariance(ci, ds.column(attrs[j]));
      st.covariances[i][j] = st.covariances[j][i] = c;
    }
  }
  return st;
}

}  // namespace css
