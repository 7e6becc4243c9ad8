#ifndef CSS_PATHS_HPP
#define CSS_PATHS_HPP

#include <set>
#include <vector>

#include "css/causal_graph.hpp"

namespace css {

enum class NodeRole { mediator, fork, collider };

/// Simple undirected path between two attributes. `edges[k]` connects
/// `nodes[k]` and `nodes[k+1]`; `forward[k]` is true when the underlying
/// directed edge points from nodes[k] to nodes[k+1]. `roles[k]` classifies
/// intermediate node nodes[k+1].
struct CausalPath {
  std::vector<int> nodes;        // length m+1, endpoints included
  std::vector<int> edges;        // edge indices into the graph, length m
  std::vector<bool> forward;     // length m
  std::vector<NodeRole> roles;   // length m-1, one per intermediate node

  int endpoint_a() const { return nodes.front(); }
  int endpoint_b() const { return nodes.back(); }
  std::size_t intermediate_count() const { return roles.size(); }
};

enum class PathState {
  open,
  provisionally_open,
  blocked_by_collider,
  blocked_by_conditioning,
};

struct PathStatus {
  PathState state = PathState::open;
  int sign = +1;          // parity of negative edges plus conditioning-opened colliders
  int open_nodes = 0;     // o_p: intermediate nodes outside Z
  int blocked_nodes = 0;  // b_p: intermediate nodes inside Z
};

/// All simple undirected paths between a_i and a_j, in lexicographic order of
/// their node-id sequences. `max_length` caps the number of edges per path as
/// a guard against pathological graphs.
std::vector<CausalPath> enumerate_paths(const CausalGraph& g, int a_i, int a_j,
                                        std::size_t max_length = 64);
std::vector<CausalPath> enumerate_paths(const CausalGraph& g, const std::string& a_i,
                                        const std::string& a_j, std::size_t max_length = 64);

/// d-separation status of the path under conditioning set Z (node ids).
/// A collider is activated when itself or any directed descendant is in Z.
/// A conditioned mediator or fork blocks the path regardless of colliders.
PathStatus path_status(const CausalPath& p, const std::set<int>& z, const CausalGraph& g);

/// True when every collider on the path is activated by Z. Paths failing this
/// carry no information flow whether or not mediators are also conditioned.
bool colliders_all_activated(const CausalPath& p, const std::set<int>& z, const CausalGraph& g);

/// cw(p): product of signed edge weights along the path.
double causal_weight(const CausalPath& p, const CausalGraph& g);

/// Noise- and leakage-adjusted weight: cw(p) * lambda_o^o_p * lambda_b^b_p,
/// or 0 for paths blocked by an unactivated collider.
/// Requires 0 <= lambda_b < lambda_o <= 1.
double leaky_weight(const CausalPath& p, const PathStatus& status, const CausalGraph& g,
                    double lambda_o, double lambda_b);

}  // namespace css

#endif
