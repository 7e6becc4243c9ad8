#ifndef CSS_PARTITION_HPP
#define CSS_PARTITION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "css/dataset.hpp"

namespace css {

/// Disjoint row groups covering the dataset, produced by exact GROUP BY or
/// K-means on the conditioning attributes.
struct Partitioning {
  enum class Mode { group_by, kmeans };

  Mode mode = Mode::group_by;
  std::vector<std::string> conditioning_set;
  std::vector<std::vector<std::uint32_t>> groups;
  std::size_t requested_m = 0;       // kmeans only
  int dropped_empty_clusters = 0;    // kmeans only
  bool degenerate = false;           // group_by produced one group per row

  std::size_t group_count() const { return groups.size(); }
};

/// One group per distinct value combination of the Z columns (exact float
/// equality; intended for discrete-valued conditioning columns).
Partitioning group_by_values(const Dataset& ds, std::span<const std::string> z);

/// Lloyd's algorithm with k-means++ seeding over the z-scored Z columns.
/// Deterministic for a fixed seed; empty clusters are dropped and reported.
Partitioning kmeans_partition(const Dataset& ds, std::span<const std::string> z,
                              std::size_t m, std::uint64_t seed, int max_iters = 100);

}  // namespace css

#endif
