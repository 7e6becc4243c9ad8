#ifndef CSS_DATASET_HPP
#define CSS_DATASET_HPP

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace css {

/// Immutable column-oriented numeric table. Columns are addressed by unique,
/// non-empty attribute names; all columns share the same length and contain
/// only finite values once constructed through the public factories.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> names, std::vector<std::vector<double>> columns);

  std::size_t row_count() const { return row_count_; }
  std::size_t attribute_count() const { return names_.size(); }
  const std::vector<std::string>& attribute_names() const { return names_; }

  bool has_attribute(const std::string& name) const;
  int attribute_index(const std::string& name) const;  // throws on unknown name

  const std::vector<double>& column(int index) const { return columns_[index]; }
  const std::vector<double>& column(const std::string& name) const;

  /// Row-major copy of the selected attributes (used by algorithms that scan rows).
  std::vector<double> gather_rows(std::span<const int> attr_indices) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  std::unordered_map<std::string, int> index_;
  std::size_t row_count_ = 0;
};

struct ZscoreResult {
  Dataset data;
  std::vector<std::string> zero_variance_attrs;  // normalized to all-zero columns
};

/// Zero-mean unit-variance transform of the selected columns (sample variance,
/// n-1 denominator). Other columns pass through untouched.
ZscoreResult normalize_zscore(const Dataset& ds, std::span<const std::string> attrs);

}  // namespace css

#endif
