#include "css/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace css {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r')
    cells.back().pop_back();
  return cells;
}

}  // namespace

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file '" + path + "'");
  std::vector<std::string> header = split_line(line);
  const std::size_t width = header.size();

  std::vector<std::vector<double>> columns(width);
  std::size_t row = 1;  // header is line 1
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cells = split_line(line);
    if (cells.size() != width)
      throw std::runtime_error("csv: row " + std::to_string(row) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(width));
    for (std::size_t c = 0; c < width; ++c) {
      const std::string& cell = cells[c];
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v))
        throw std::runtime_error("csv: non-numeric or non-finite cell at row " +
                                 std::to_string(row) + ", column '" + header[c] + "': '" +
                                 cell + "'");
      columns[c].push_back(v);
    }
  }
  return Dataset(std::move(header), std::move(columns));
}

void save_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot write '" + path + "'");
  const auto& names = ds.attribute_names();
  for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
  out << '\n';
  out.precision(17);
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    for (std::size_t c = 0; c < names.size(); ++c)
      out << (c ? "," : "") << ds.column(int(c))[r];
    out << '\n';
  }
  if (!out) throw std::runtime_error("csv: write failed for '" + path + "'");
}

}  // namespace css
