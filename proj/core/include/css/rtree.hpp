#ifndef CSS_RTREE_HPP
#define CSS_RTREE_HPP

#include <cstdint>
#include <vector>

namespace css {

/// Sort-tile-recursive packed R-tree over points, used by the branch-and-bound
/// skyline. Static: bulk-built once, never updated.
class StrRTree {
 public:
  struct Node {
    std::vector<double> lower;  // MBR lower corner (dims)
    std::vector<double> upper;
    std::vector<int> children;            // internal: child node ids
    std::vector<std::uint32_t> points;    // leaf: row ids
    bool is_leaf() const { return children.empty(); }
  };

  /// coords: row-major (ids.size() x dims).
  StrRTree(const double* coords, std::size_t stride, std::vector<std::uint32_t> ids,
           int dims, int leaf_capacity);

  int root() const { return root_; }
  const Node& node(int id) const { return nodes_[id]; }
  int dims() const { return dims_; }

 private:
  int build(std::vector<std::uint32_t>& ids, std::size_t lo, std::size_t hi, int level);
  int pack_levels(std::vector<int> level_nodes);

  const double* coords_;
  std::size_t stride_;
  int dims_;
  int leaf_capacity_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace css

#endif
