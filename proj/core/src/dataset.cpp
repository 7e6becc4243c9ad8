#include "css/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "css/stats.hpp"

namespace css {

Dataset::Dataset(std::vector<std::string> names, std::vector<std::vector<double>> columns)
    : names_(std::move(names)), columns_(std::move(columns)) {
  if (names_.size() != columns_.size())
    throw std::invalid_argument("dataset: name/column count mismatch");
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw std::invalid_argument("dataset: empty attribute name");
    if (!seen.insert(n).second)
      throw std::invalid_argument("dataset: duplicate attribute name '" + n + "'");
  }
  row_count_ = columns_.empty() ? 0 : columns_.front().size();
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c].size() != row_count_)
      throw std::invalid_argument("dataset: ragged column '" + names_[c] + "'");
    for (double v : columns_[c])
      if (!std::isfinite(v))
        throw std::invalid_argument("dataset: non-finite value in column '" + names_[c] + "'");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) index_[names_[i]] = static_cast<int>(i);
}

bool Dataset::has_attribute(const std::string& name) const { return index_.count(name) > 0; }

int Dataset::attribute_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::invalid_argument("unknown attribute '" + name + "'");
  return it->second;
}

const std::vector<double>& Dataset::column(const std::string& name) const {
  return columns_[attribute_index(name)];
}

std::vector<double> Dataset::gather_rows(std::span<const int> attr_indices) const {
  std::vector<double> out(row_count_ * attr_indices.size());
  for (std::size_t r = 0; r < row_count_; ++r)
    for (std::size_t k = 0; k < attr_indices.size(); ++k)
      out[r * attr_indices.size() + k] = columns_[attr_indices[k]][r];
  return out;
}

ZscoreResult normalize_zscore(const Dataset& ds, std::span<const std::string> attrs) {
  std::vector<std::vector<double>> cols;
  cols.reserve(ds.attribute_count());
  for (std::size_t i = 0; i < ds.attribute_count(); ++i) cols.push_back(ds.column(int(i)));

  ZscoreResult result;
  for (const auto& name : attrs) {
    int idx = ds.attribute_index(name);
    auto& col = cols[idx];
    double mu = sample_mean(col);
    double var = sample_variance(col);
    if (var <= 0.0) {
      std::fill(col.begin(), col.end(), 0.0);  // collapsed column, flagged below
      result.zero_variance_attrs.push_back(name);
      continue;
    }
    double sd = std::sqrt(var);
    for (double& v : col) v = (v - mu) / sd;
  }
  result.data = Dataset(std::vector<std::string>(ds.attribute_names()), std::move(cols));
  return result;
}

}  // namespace css
