#ifndef CSS_CAUSAL_GRAPH_HPP
#define CSS_CAUSAL_GRAPH_HPP

#include <string>
#include <unordered_map>
#include <vector>

namespace css {

struct CausalEdge {
  int src = -1;
  int dst = -1;
  double weight = 0.0;          // signed causal weight cw(e); sign is the edge label
  double noise_variance = 1.0;  // variance of the additive noise on this edge
};

/// Signed, real-weighted DAG over attribute names. Acyclicity, unique node
/// names and at-most-one edge per ordered pair are enforced on construction.
class CausalGraph {
 public:
  CausalGraph() = default;
  CausalGraph(std::vector<std::string> nodes,
              std::vector<std::tuple<std::string, std::string, double, double>> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string>& node_names() const { return nodes_; }
  const std::string& node_name(int id) const { return nodes_[id]; }
  bool has_node(const std::string& name) const;
  int node_id(const std::string& name) const;  // throws on unknown name

  const std::vector<CausalEdge>& edges() const { return edges_; }
  const CausalEdge& edge(int index) const { return edges_[index]; }
  const std::vector<int>& out_edges(int node) const { return out_[node]; }
  const std::vector<int>& in_edges(int node) const { return in_[node]; }
  /// Edge indices touching the node in either direction.
  std::vector<int> incident_edges(int node) const;

  std::vector<int> topological_order() const;
  /// Directed descendants of `node`, excluding the node itself.
  std::vector<int> descendants(int node) const;

 private:
  void validate() const;

  std::vector<std::string> nodes_;
  std::unordered_map<std::string, int> ids_;
  std::vector<CausalEdge> edges_;
  std::vector<std::vector<int>> out_;  // node -> edge indices
  std::vector<std::vector<int>> in_;
};

/// Graph file format:
///   {"nodes": ["A", ...],
///    "edges": [{"src": "A", "dst": "X", "weight": 1.0, "noise_var": 1.0}, ...]}
/// noise_var is optional and defaults to 1.0.
CausalGraph load_graph(const std::string& path);
CausalGraph graph_from_json_text(const std::string& text);
std::string graph_to_json_text(const CausalGraph& g);
void save_graph(const CausalGraph& g, const std::string& path);

}  // namespace css

#endif
