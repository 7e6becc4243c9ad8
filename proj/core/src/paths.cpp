#include "css/paths.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace css {

namespace {

struct Neighbor {
  int node;
  int edge;
  bool forward;
};

std::vector<std::vector<Neighbor>> undirected_adjacency(const CausalGraph& g) {
  std::vector<std::vector<Neighbor>> adj(g.node_count());
  for (std::size_t ei = 0; ei < g.edge_count(); ++ei) {
    const auto& e = g.edge(int(ei));
    adj[e.src].push_back({e.dst, int(ei), true});
    adj[e.dst].push_back({e.src, int(ei), false});
  }
  for (auto& nbrs : adj)
    std::sort(nbrs.begin(), nbrs.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  return adj;
}

void classify_roles(CausalPath& p) {
  p.roles.clear();
  for (std::size_t k = 1; k + 1 < p.nodes.size(); ++k) {
    bool in_left = p.forward[k - 1];    // edge points into nodes[k] from the left
    bool in_right = !p.forward[k];      // edge points into nodes[k] from the right
    if (in_left && in_right)
      p.roles.push_back(NodeRole::collider);
    else if (!in_left && !in_right)
      p.roles.push_back(NodeRole::fork);
    else
      p.roles.push_back(NodeRole::mediator);
  }
}

}  // namespace

std::vector<CausalPath> enumerate_paths(const CausalGraph& g, int a_i, int a_j,
                                        std::size_t max_length) {
  if (a_i < 0 || a_i >= int(g.node_count()) || a_j < 0 || a_j >= int(g.node_count()))
    throw std::invalid_argument("enumerate_paths: unknown node id");
  if (a_i == a_j) return {};

  const auto adj = undirected_adjacency(g);
  std::vector<CausalPath> result;
  std::vector<bool> visited(g.node_count(), false);
  CausalPath cur;
  cur.nodes.push_back(a_i);
  visited[a_i] = true;

  // Sorted-neighbor DFS emits paths in lexicographic node-sequence order.
  std::function<void(int)> dfs = [&](int u) {
    for (const Neighbor& nb : adj[u]) {
      if (visited[nb.node]) continue;
      if (cur.edges.size() >= max_length) continue;
      cur.nodes.push_back(nb.node);
      cur.edges.push_back(nb.edge);
      cur.forward.push_back(nb.forward);
      if (nb.node == a_j) {
        CausalPath found = cur;
        classify_roles(found);
        result.push_back(std::move(found));
      } else {
        visited[nb.node] = true;
        dfs(nb.node);
        visited[nb.node] = false;
      }
      cur.nodes.pop_back();
      cur.edges.pop_back();
      cur.forward.pop_back();
    }
  };
  dfs(a_i);
  return result;
}

std::vector<CausalPath> enumerate_paths(const CausalGraph& g, const std::string& a_i,
                                        const std::string& a_j, std::size_t max_length) {
  return enumerate_paths(g, g.node_id(a_i), g.node_id(a_j), max_length);
}

bool colliders_all_activated(const CausalPath& p, const std::set<int>& z,
                             const CausalGraph& g) {
  for (std::size_t k = 0; k < p.roles.size(); ++k) {
    if (p.roles[k] != NodeRole::collider) continue;
    int node = p.nodes[k + 1];
    bool activated = z.count(node) > 0;
    if (!activated)
      for (int d : g.descendants(node))
        if (z.count(d)) { activated = true; break; }
    if (!activated) return false;
  }
  return true;
}

PathStatus path_status(const CausalPath& p, const std::set<int>& z, const CausalGraph& g) {
  if (z.count(p.endpoint_a()) || z.count(p.endpoint_b()))
    throw std::invalid_argument("path_status: conditioning set contains a path endpoint");

  PathStatus st;
  int colliders = 0;
  int activated_colliders = 0;
  bool conditioned_noncollider = false;
  bool unactivated_collider = false;

  for (std::size_t k = 0; k < p.roles.size(); ++k) {
    int node = p.nodes[k + 1];
    bool in_z = z.count(node) > 0;
    if (in_z) ++st.blocked_nodes; else ++st.open_nodes;

    if (p.roles[k] == NodeRole::collider) {
      ++colliders;
      bool activated = in_z;
      if (!activated)
        for (int d : g.descendants(node))
          if (z.count(d)) { activated = true; break; }
      if (activated) ++activated_colliders; else unactivated_collider = true;
    } else if (in_z) {
      conditioned_noncollider = true;
    }
  }

  int negatives = 0;
  for (int ei : p.edges)
    if (g.edge(ei).weight < 0.0) ++negatives;
  st.sign = ((negatives + activated_colliders) % 2 == 0) ? +1 : -1;

  if (conditioned_noncollider)
    st.state = PathState::blocked_by_conditioning;  // wins over collider states
  else if (unactivated_collider)
    st.state = PathState::blocked_by_collider;
  else if (colliders > 0)
    st.state = PathState::provisionally_open;
  else
    st.state = PathState::open;
  return st;
}

double causal_weight(const CausalPath& p, const CausalGraph& g) {
  double w = 1.0;
  for (int ei : p.edges) w *= g.edge(ei).weight;
  return w;
}

double leaky_weight(const CausalPath& p, const PathStatus& status, const CausalGraph& g,
                    double lambda_o, double lambda_b) {
  if (!(lambda_o > 0.0 && lambda_o <= 1.0) || !(lambda_b >= 0.0 && lambda_b < 1.0) ||
      !(lambda_b < lambda_o))
    throw std::invalid_argument("leaky_weight: requires 0 <= lambda_b < lambda_o <= 1");
  if (status.state == PathState::blocked_by_collider) return 0.0;
  return causal_weight(p, g) * std::pow(lambda_o, status.open_nodes) *
         std::pow(lambda_b, status.blocked_nodes);
}

}  // namespace css
