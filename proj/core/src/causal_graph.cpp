#include "css/causal_graph.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace css {

CausalGraph::CausalGraph(std::vector<std::string> nodes,
                         std::vector<std::tuple<std::string, std::string, double, double>> edges)
    : nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].empty()) throw std::invalid_argument("graph: empty node name");
    if (!ids_.emplace(nodes_[i], int(i)).second)
      throw std::invalid_argument("graph: duplicate node '" + nodes_[i] + "'");
  }
  out_.resize(nodes_.size());
  in_.resize(nodes_.size());
  std::set<std::pair<int, int>> seen;
  for (const auto& [src, dst, w, nv] : edges) {
    auto is = ids_.find(src), id = ids_.find(dst);
    if (is == ids_.end()) throw std::invalid_argument("graph: edge references unknown node '" + src + "'");
    if (id == ids_.end()) throw std::invalid_argument("graph: edge references unknown node '" + dst + "'");
    if (is->second == id->second)
      throw std::invalid_argument("graph: self-loop on '" + src + "'");
    if (!seen.emplace(is->second, id->second).second)
      throw std::invalid_argument("graph: duplicate edge " + src + " -> " + dst);
    if (w == 0.0) throw std::invalid_argument("graph: zero weight on edge " + src + " -> " + dst);
    if (nv < 0.0)
      throw std::invalid_argument("graph: negative noise variance on edge " + src + " -> " + dst);
    CausalEdge e{is->second, id->second, w, nv};
    out_[e.src].push_back(int(edges_.size()));
    in_[e.dst].push_back(int(edges_.size()));
    edges_.push_back(e);
  }
  validate();
}

bool CausalGraph::has_node(const std::string& name) const { return ids_.count(name) > 0; }

int CausalGraph::node_id(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) throw std::invalid_argument("graph: unknown node '" + name + "'");
  return it->second;
}

std::vector<int> CausalGraph::incident_edges(int node) const {
  std::vector<int> all = out_[node];
  all.insert(all.end(), in_[node].begin(), in_[node].end());
  return all;
}

std::vector<int> CausalGraph::topological_order() const {
  std::vector<int> indeg(nodes_.size(), 0);
  for (const auto& e : edges_) ++indeg[e.dst];
  std::vector<int> order;
  order.reserve(nodes_.size());
  // smallest-id-first for a deterministic order
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (indeg[i] == 0) ready.push(int(i));
  while (!ready.empty()) {
    int u = ready.top();
    ready.pop();
    order.push_back(u);
    for (int ei : out_[u])
      if (--indeg[edges_[ei].dst] == 0) ready.push(edges_[ei].dst);
  }
  if (order.size() != nodes_.size()) {
    // report one offending cycle: walk back through remaining nodes
    std::vector<bool> placed(nodes_.size(), false);
    for (int v : order) placed[v] = true;
    int start = -1;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (!placed[i]) { start = int(i); break; }
    std::vector<int> trail;
    std::vector<int> mark(nodes_.size(), 0);
    int cur = start;
    while (mark[cur] == 0) {
      mark[cur] = 1;
      trail.push_back(cur);
      for (int ei : out_[cur])
        if (!placed[edges_[ei].dst]) { cur = edges_[ei].dst; break; }
    }
    std::ostringstream msg;
    msg << "graph contains a cycle: ";
    bool in_cycle = false;
    for (int v : trail) {
      if (v == cur) in_cycle = true;
      if (in_cycle) msg << nodes_[v] << " -> ";
    }
    msg << nodes_[cur];
    throw std::invalid_argument(msg.str());
  }
  return order;
}

std::vector<int> CausalGraph::descendants(int node) const {
  std::vector<int> result;
  std::vector<bool> seen(nodes_.size(), false);
  std::queue<int> frontier;
  frontier.push(node);
  seen[node] = true;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop();
    for (int ei : out_[u]) {
      int v = edges_[ei].dst;
      if (!seen[v]) {
        seen[v] = true;
        result.push_back(v);
        frontier.push(v);
      }
    }
  }
  return result;
}

void CausalGraph::validate() const { (void)topological_order(); }

CausalGraph graph_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<std::string> nodes = j.at("nodes").get<std::vector<std::string>>();
  std::vector<std::tuple<std::string, std::string, double, double>> edges;
  for (const auto& je : j.at("edges")) {
    edges.emplace_back(je.at("src").get<std::string>(), je.at("dst").get<std::string>(),
                       je.at("weight").get<double>(), je.value("noise_var", 1.0));
  }
  return CausalGraph(std::move(nodes), std::move(edges));
}

CausalGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("graph: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return graph_from_json_text(buf.str());
}

std::string graph_to_json_text(const CausalGraph& g) {
  nlohmann::json j;
  j["nodes"] = g.node_names();
  j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges()) {
    j["edges"].push_back({{"src", g.node_name(e.src)},
                          {"dst", g.node_name(e.dst)},
                          {"weight", e.weight},
                          {"noise_var", e.noise_variance}});
  }
  return j.dump(2);
}

void save_graph(const CausalGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("graph: cannot write '" + path + "'");
  out << graph_to_json_text(g) << '\n';
}

}  // namespace css
