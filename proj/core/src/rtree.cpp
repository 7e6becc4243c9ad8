#include "css/rtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace css {

namespace {

// Sort-tile-recursive tiling: order ids so that consecutive runs of
// `run_size` form spatially coherent tiles.
void str_sort(const double* coords, std::size_t stride, std::uint32_t* ids, std::size_t n,
              int dim, int dims, std::size_t run_size) {
  if (n <= run_size || dim >= dims) return;
  std::sort(ids, ids + n, [&](std::uint32_t a, std::uint32_t b) {
    return coords[std::size_t(a) * stride + dim] < coords[std::size_t(b) * stride + dim];
  });
  if (dim == dims - 1) return;
  // number of slabs along this dimension: ceil((n/run)^(1/(dims-dim)))
  double leaves = double(n) / double(run_size);
  std::size_t slabs = std::size_t(std::ceil(std::pow(leaves, 1.0 / double(dims - dim))));
  if (slabs < 1) slabs = 1;
  std::size_t per_slab = (n + slabs - 1) / slabs;
  for (std::size_t start = 0; start < n; start += per_slab) {
    std::size_t len = std::min(per_slab, n - start);
    str_sort(coords, stride, ids + start, len, dim + 1, dims, run_size);
  }
}

}  // namespace

StrRTree::StrRTree(const double* coords, std::size_t stride, std::vector<std::uint32_t> ids,
                   int dims, int leaf_capacity)
    : coords_(coords), stride_(stride), dims_(dims), leaf_capacity_(leaf_capacity) {
  if (ids.empty()) {
    Node empty;
    empty.lower.assign(dims_, 0.0);
    empty.upper.assign(dims_, 0.0);
    nodes_.push_back(std::move(empty));
    root_ = 0;
    return;
  }
  str_sort(coords_, stride_, ids.data(), ids.size(), 0, dims_, std::size_t(leaf_capacity_));

  // leaves over consecutive runs
  std::vector<int> level;
  for (std::size_t start = 0; start < ids.size(); start += std::size_t(leaf_capacity_)) {
    std::size_t len = std::min(std::size_t(leaf_capacity_), ids.size() - start);
    Node leaf;
    leaf.lower.assign(dims_, std::numeric_limits<double>::max());
    leaf.upper.assign(dims_, std::numeric_limits<double>::lowest());
    for (std::size_t k = 0; k < len; ++k) {
      std::uint32_t id = ids[start + k];
      leaf.points.push_back(id);
      for (int d = 0; d < dims_; ++d) {
        double v = coords_[std::size_t(id) * stride_ + d];
        leaf.lower[d] = std::min(leaf.lower[d], v);
        leaf.upper[d] = std::max(leaf.upper[d], v);
      }
    }
    level.push_back(int(nodes_.size()));
    nodes_.push_back(std::move(leaf));
  }
  root_ = pack_levels(std::move(level));
}

int StrRTree::pack_levels(std::vector<int> level_nodes) {
  while (level_nodes.size() > 1) {
    std::vector<int> next;
    for (std::size_t start = 0; start < level_nodes.size();
         start += std::size_t(leaf_capacity_)) {
      std::size_t len = std::min(std::size_t(leaf_capacity_), level_nodes.size() - start);
      Node inner;
      inner.lower.assign(dims_, std::numeric_limits<double>::max());
      inner.upper.assign(dims_, std::numeric_limits<double>::lowest());
      for (std::size_t k = 0; k < len; ++k) {
        int child = level_nodes[start + k];
        inner.children.push_back(child);
        for (int d = 0; d < dims_; ++d) {
          inner.lower[d] = std::min(inner.lower[d], nodes_[child].lower[d]);
          inner.upper[d] = std::max(inner.upper[d], nodes_[child].upper[d]);
        }
      }
      next.push_back(int(nodes_.size()));
      nodes_.push_back(std::move(inner));
    }
    level_nodes = std::move(next);
  }
  return level_nodes.front();
}

}  // namespace css
