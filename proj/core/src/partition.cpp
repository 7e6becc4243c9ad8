#include "css/partition.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace css {

Partitioning group_by_values(const Dataset& ds, std::span<const std::string> z) {
  if (z.empty()) throw std::invalid_argument("group_by_values: empty conditioning set");
  std::vector<int> idx;
  for (const auto& a : z) idx.push_back(ds.attribute_index(a));

  Partitioning part;
  part.mode = Partitioning::Mode::group_by;
  part.conditioning_set.assign(z.begin(), z.end());

  std::map<std::vector<double>, std::size_t> key_to_group;  // first-seen row order ties to map order
  std::vector<double> key(idx.size());
  for (std::uint32_t r = 0; r < ds.row_count(); ++r) {
    for (std::size_t k = 0; k < idx.size(); ++k) key[k] = ds.column(idx[k])[r];
    auto [it, inserted] = key_to_group.emplace(key, part.groups.size());
    if (inserted) part.groups.emplace_back();
    part.groups[it->second].push_back(r);
  }
  part.degenerate = part.groups.size() == ds.row_count() && ds.row_count() > 1;
  return part;
}

Partitioning kmeans_partition(const Dataset& ds, std::span<const std::string> z,
                              std::size_t m, std::uint64_t seed, int max_iters) {
  if (z.empty()) throw std::invalid_argument("kmeans_partition: empty conditioning set");
  if (m < 2) throw std::invalid_argument("kmeans_partition: m must be >= 2");
  const std::size_t n = ds.row_count();
  if (m > n) throw std::invalid_argument("kmeans_partition: m exceeds row count");

  // z-scored feature matrix, row-major
  std::vector<std::string> zattrs(z.begin(), z.end());
  ZscoreResult norm = normalize_zscore(ds, zattrs);
  const std::size_t d = zattrs.size();
  std::vector<double> pts(n * d);
  for (std::size_t k = 0; k < d; ++k) {
    const auto& col = norm.data.column(zattrs[k]);
    for (std::size_t r = 0; r < n; ++r) pts[r * d + k] = col[r];
  }

  auto dist2 = [&](std::size_t r, const double* c) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      double diff = pts[r * d + k] - c[k];
      s += diff * diff;
    }
    return s;
  };

  // k-means++ seeding
  std::mt19937_64 rng(seed);
  std::vector<double> centers(m * d);
  {
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    std::size_t r0 = first(rng);
    for (std::size_t k = 0; k < d; ++k) centers[k] = pts[r0 * d + k];
    std::vector<double> best(n, std::numeric_limits<double>::max());
    for (std::size_t c = 1; c < m; ++c) {
      double total = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        double d2 = dist2(r, &centers[(c - 1) * d]);
        if (d2 < best[r]) best[r] = d2;
        total += best[r];
      }
      std::size_t chosen = 0;
      if (total > 0.0) {
        std::uniform_real_distribution<double> u(0.0, total);
        double target = u(rng);
        double acc = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          acc += best[r];
          if (acc >= target) { chosen = r; break; }
        }
      } else {
        std::uniform_int_distribution<std::size_t> any(0, n - 1);
        chosen = any(rng);
      }
      for (std::size_t k = 0; k < d; ++k) centers[c * d + k] = pts[chosen * d + k];
    }
  }

  std::vector<std::uint32_t> assign(n, 0);
  std::vector<double> sums(m * d);
  std::vector<std::size_t> counts(m);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = iter == 0;
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t best_c = 0;
      double best_d = std::numeric_limits<double>::max();
      for (std::size_t c = 0; c < m; ++c) {
        double d2 = dist2(r, &centers[c * d]);
        if (d2 < best_d) { best_d = d2; best_c = c; }  // smallest index wins ties
      }
      if (assign[r] != best_c) { assign[r] = std::uint32_t(best_c); changed = true; }
    }
    if (!changed) break;
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t r = 0; r < n; ++r) {
      ++counts[assign[r]];
      for (std::size_t k = 0; k < d; ++k) sums[assign[r] * d + k] += pts[r * d + k];
    }
    for (std::size_t c = 0; c < m; ++c)
      if (counts[c] > 0)
        for (std::size_t k = 0; k < d; ++k) centers[c * d + k] = sums[c * d + k] / double(counts[c]);
  }

  Partitioning part;
  part.mode = Partitioning::Mode::kmeans;
  part.conditioning_set = zattrs;
  part.requested_m = m;
  std::vector<std::vector<std::uint32_t>> groups(m);
  for (std::size_t r = 0; r < n; ++r) groups[assign[r]].push_back(std::uint32_t(r));
  for (auto& grp : groups) {
    if (grp.empty()) { ++part.dropped_empty_clusters; continue; }
    part.groups.push_back(std::move(grp));
  }
  return part;
}

}  // namespace css
