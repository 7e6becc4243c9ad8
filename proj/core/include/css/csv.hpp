#ifndef CSS_CSV_HPP
#define CSS_CSV_HPP

#include <string>

#include "css/dataset.hpp"

namespace css {

/// Reads a UTF-8, comma-separated file whose first line is the header.
/// Every remaining cell must parse as a finite number; violations are
/// reported with their row and column.
Dataset load_csv(const std::string& path);

void save_csv(const Dataset& ds, const std::string& path);

}  // namespace css

#endif
