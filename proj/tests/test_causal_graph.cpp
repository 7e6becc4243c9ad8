#include <doctest.h>

#include <stdexcept>
#include <functional>

#include <cstdio>
#include <fstream>
#include <set>

#include "css/causal_graph.hpp"
#include "css/paths.hpp"

namespace {

css::CausalGraph fork_graph() {
  return css::CausalGraph({"A", "X", "Y"}, {{"A", "X", 1.0, 1.0}, {"A", "Y", -1.0, 1.0}});
}

// Independent path-count oracle: recursive enumeration over an undirected
// adjacency list, no shared code with the implementation.
int count_paths_oracle(const css::CausalGraph& g, int a, int b) {
  std::vector<std::set<int>> adj(g.node_count());
  for (const auto& e : g.edges()) {
    adj[e.src].insert(e.dst);
    adj[e.dst].insert(e.src);
  }
  std::vector<bool> used(g.node_count(), false);
  int found = 0;
  std::function<void(int)> walk = [&](int u) {
    if (u == b) { ++found; return; }
    used[u] = true;
    for (int v : adj[u])
      if (!used[v]) walk(v);
    used[u] = false;
  };
  walk(a);
  return found;
}

}  // namespace

TEST_CASE("graph load and validation") {
  SUBCASE("minimal fork graph is valid") {
    auto g = fork_graph();
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
  }
  SUBCASE("two-node cycle is rejected with the cycle named") {
    CHECK_THROWS_WITH_AS(
        css::CausalGraph({"A", "X"}, {{"X", "A", 1.0, 1.0}, {"A", "X", 1.0, 1.0}}),
        doctest::Contains("cycle"), std::invalid_argument);
  }
  SUBCASE("dangling node reference") {
    CHECK_THROWS_AS(css::CausalGraph({"A"}, {{"A", "Zed", 1.0, 1.0}}), std::invalid_argument);
  }
  SUBCASE("duplicate edge") {
    CHECK_THROWS_AS(
        css::CausalGraph({"A", "B"}, {{"A", "B", 1.0, 1.0}, {"A", "B", 0.5, 1.0}}),
        std::invalid_argument);
  }
  SUBCASE("zero weight") {
    CHECK_THROWS_AS(css::CausalGraph({"A", "B"}, {{"A", "B", 0.0, 1.0}}),
                    std::invalid_argument);
  }
}

TEST_CASE("housing-style graph with two confounders loads") {
  // Commute <- Distance_to_city_center -> Price, Scenic_quality confounder,
  // plus the direct negative edge between the preference attributes.
  css::CausalGraph g({"Commute", "Price", "Distance_to_city_center", "Scenic_quality"},
                     {{"Commute", "Price", -1.0, 1.0},
                      {"Distance_to_city_center", "Commute", 1.0, 1.0},
                      {"Distance_to_city_center", "Price", -1.0, 1.0},
                      {"Scenic_quality", "Commute", 1.0, 1.0},
                      {"Scenic_quality", "Price", 1.0, 1.0}});
  CHECK(g.node_count() == 4);
  auto paths = css::enumerate_paths(g, "Commute", "Price");
  CHECK(paths.size() == 3);  // direct, via distance, via scenic
}

TEST_CASE("graph json round trip") {
  auto g = fork_graph();
  std::string path = "/tmp/css_test_graph.json";
  css::save_graph(g, path);
  auto back = css::load_graph(path);
  CHECK(back.node_count() == g.node_count());
  CHECK(back.edge_count() == g.edge_count());
  CHECK(back.edge(0).weight == g.edge(0).weight);
  std::remove(path.c_str());

  // noise_var defaults to 1.0 when omitted
  auto min = css::graph_from_json_text(
      R"({"nodes":["A","B"],"edges":[{"src":"A","dst":"B","weight":-0.5}]})");
  CHECK(min.edge(0).noise_variance == 1.0);
  CHECK(min.edge(0).weight == -0.5);
}

TEST_CASE("enumerate_paths on canonical structures") {
  SUBCASE("chain has one path with a mediator") {
    css::CausalGraph g({"X", "M", "Y"}, {{"X", "M", 1.0, 1.0}, {"M", "Y", 1.0, 1.0}});
    auto paths = css::enumerate_paths(g, "X", "Y");
    REQUIRE(paths.size() == 1);
    REQUIRE(paths[0].roles.size() == 1);
    CHECK(paths[0].roles[0] == css::NodeRole::mediator);
  }
  SUBCASE("fork plus direct edge gives two paths") {
    css::CausalGraph g({"A", "X", "Y"},
                       {{"A", "X", 1.0, 1.0}, {"A", "Y", 1.0, 1.0}, {"X", "Y", 1.0, 1.0}});
    auto paths = css::enumerate_paths(g, "X", "Y");
    REQUIRE(paths.size() == 2);
    // lexicographic order: via A first
    CHECK(paths[0].nodes.size() == 3);
    CHECK(paths[0].roles[0] == css::NodeRole::fork);
    CHECK(paths[1].nodes.size() == 2);
  }
  SUBCASE("collider path") {
    css::CausalGraph g({"X", "C", "Y"}, {{"X", "C", 1.0, 1.0}, {"Y", "C", 1.0, 1.0}});
    auto paths = css::enumerate_paths(g, "X", "Y");
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].roles[0] == css::NodeRole::collider);
  }
  SUBCASE("unknown node") {
    CHECK_THROWS_AS(css::enumerate_paths(fork_graph(), "X", "nope"), std::invalid_argument);
  }
}

TEST_CASE("enumerate_paths count matches a brute-force oracle") {
  // k node-disjoint parallel routes plus denser random-ish graphs
  css::CausalGraph parallel({"S", "T", "m1", "m2", "m3"},
                            {{"S", "m1", 1.0, 1.0},
                             {"m1", "T", 1.0, 1.0},
                             {"S", "m2", 1.0, 1.0},
                             {"m2", "T", 1.0, 1.0},
                             {"S", "m3", 1.0, 1.0},
                             {"m3", "T", 1.0, 1.0}});
  CHECK(css::enumerate_paths(parallel, "S", "T").size() == 3);
  CHECK(count_paths_oracle(parallel, parallel.node_id("S"), parallel.node_id("T")) == 3);

  css::CausalGraph dense({"a", "b", "c", "d", "e", "f", "g"},
                         {{"a", "b", 1.0, 1.0},
                          {"a", "c", -1.0, 1.0},
                          {"b", "d", 1.0, 1.0},
                          {"c", "d", 0.5, 1.0},
                          {"b", "e", -0.5, 1.0},
                          {"d", "f", 1.0, 1.0},
                          {"e", "f", 1.0, 1.0},
                          {"c", "g", 1.0, 1.0},
                          {"g", "f", -1.0, 1.0}});
  auto got = css::enumerate_paths(dense, "a", "f");
  CHECK(int(got.size()) == count_paths_oracle(dense, dense.node_id("a"), dense.node_id("f")));
  // deterministic lexicographic order by node sequence
  for (std::size_t i = 1; i < got.size(); ++i) CHECK(got[i - 1].nodes < got[i].nodes);
}

TEST_CASE("path_status d-separation semantics") {
  auto fork = fork_graph();
  auto fork_path = css::enumerate_paths(fork, "X", "Y").at(0);

  SUBCASE("fork: open when unconditioned, blocked when conditioned") {
    auto open = css::path_status(fork_path, {}, fork);
    CHECK(open.state == css::PathState::open);
    CHECK(open.sign == -1);  // one negative edge
    CHECK(open.open_nodes == 1);
    CHECK(open.blocked_nodes == 0);

    auto blocked = css::path_status(fork_path, {fork.node_id("A")}, fork);
    CHECK(blocked.state == css::PathState::blocked_by_conditioning);
    CHECK(blocked.blocked_nodes == 1);
    CHECK(blocked.open_nodes == 0);
  }

  SUBCASE("collider: blocked until conditioned, then sign flips") {
    css::CausalGraph g({"X", "C", "Y"}, {{"X", "C", 1.0, 1.0}, {"Y", "C", 1.0, 1.0}});
    auto p = css::enumerate_paths(g, "X", "Y").at(0);
    auto blocked = css::path_status(p, {}, g);
    CHECK(blocked.state == css::PathState::blocked_by_collider);

    auto prov = css::path_status(p, {g.node_id("C")}, g);
    CHECK(prov.state == css::PathState::provisionally_open);
    CHECK(prov.sign == -1);  // zero negative edges + one activated collider
  }

  SUBCASE("collider activated through a descendant") {
    css::CausalGraph g({"X", "C", "Y", "D"},
                       {{"X", "C", 1.0, 1.0}, {"Y", "C", 1.0, 1.0}, {"C", "D", 1.0, 1.0}});
    auto p = css::enumerate_paths(g, "X", "Y").at(0);
    auto prov = css::path_status(p, {g.node_id("D")}, g);
    CHECK(prov.state == css::PathState::provisionally_open);
    CHECK(prov.blocked_nodes == 0);  // the collider itself is not in Z
  }

  SUBCASE("mixed path X<-A->C<-B->Y") {
    css::CausalGraph g({"X", "A", "C", "B", "Y"},
                       {{"A", "X", 1.0, 1.0},
                        {"A", "C", 1.0, 1.0},
                        {"B", "C", 1.0, 1.0},
                        {"B", "Y", 1.0, 1.0}});
    auto p = css::enumerate_paths(g, "X", "Y").at(0);
    CHECK(css::path_status(p, {g.node_id("C")}, g).state ==
          css::PathState::provisionally_open);
    CHECK(css::path_status(p, {g.node_id("A"), g.node_id("C")}, g).state ==
          css::PathState::blocked_by_conditioning);
    // unactivated collider without conditioned mediators
    CHECK(css::path_status(p, {}, g).state == css::PathState::blocked_by_collider);
  }

  SUBCASE("endpoint conditioning is rejected") {
    CHECK_THROWS_AS(css::path_status(fork_path, {fork.node_id("X")}, fork),
                    std::invalid_argument);
  }
}

TEST_CASE("path_status properties on a small graph") {
  // X <- A -> C <- B -> Y with extra mediator chain X -> M -> Y
  css::CausalGraph g({"X", "A", "C", "B", "Y", "M"},
                     {{"A", "X", 1.0, 1.0},
                      {"A", "C", -1.0, 1.0},
                      {"B", "C", 1.0, 1.0},
                      {"B", "Y", -0.5, 1.0},
                      {"X", "M", 1.0, 1.0},
                      {"M", "Y", 1.0, 1.0}});
  auto paths = css::enumerate_paths(g, "X", "Y");
  REQUIRE(!paths.empty());

  std::vector<int> conditionable;
  for (const auto& name : {"A", "B", "C", "M"}) conditionable.push_back(g.node_id(name));

  for (const auto& p : paths) {
    // Z = empty: open iff collider-free
    bool has_collider = false;
    for (auto role : p.roles)
      if (role == css::NodeRole::collider) has_collider = true;
    auto st0 = css::path_status(p, {}, g);
    CHECK((st0.state == css::PathState::open) == !has_collider);

    for (int mask = 0; mask < 16; ++mask) {
      std::set<int> z;
      for (int b = 0; b < 4; ++b)
        if (mask & (1 << b)) z.insert(conditionable[b]);
      // skip sets containing endpoints of this path (none here: endpoints X,Y)
      auto st = css::path_status(p, z, g);
      CHECK(st.open_nodes + st.blocked_nodes == int(p.intermediate_count()));

      // blocking by conditioning is monotone under supersets
      if (st.state == css::PathState::blocked_by_conditioning) {
        for (int extra : conditionable) {
          std::set<int> z2 = z;
          z2.insert(extra);
          CHECK(css::path_status(p, z2, g).state ==
                css::PathState::blocked_by_conditioning);
        }
      }

      // sign parity: negatives + activated colliders
      int negatives = 0;
      for (int ei : p.edges)
        if (g.edge(ei).weight < 0) ++negatives;
      int activated = 0;
      for (std::size_t k = 0; k < p.roles.size(); ++k) {
        if (p.roles[k] != css::NodeRole::collider) continue;
        int node = p.nodes[k + 1];
        bool act = z.count(node) > 0;
        if (!act)
          for (int d : g.descendants(node))
            if (z.count(d)) act = true;
        if (act) ++activated;
      }
      CHECK(st.sign == (((negatives + activated) % 2 == 0) ? 1 : -1));
    }
  }
}

TEST_CASE("causal_weight multiplies signed edge weights") {
  css::CausalGraph g({"X", "M", "Y"}, {{"X", "M", 1.0, 1.0}, {"M", "Y", -1.0, 1.0}});
  auto p = css::enumerate_paths(g, "X", "Y").at(0);
  CHECK(css::causal_weight(p, g) == -1.0);

  css::CausalGraph g2({"X", "M", "Y"}, {{"X", "M", 0.5, 1.0}, {"M", "Y", -0.5, 1.0}});
  auto p2 = css::enumerate_paths(g2, "X", "Y").at(0);
  CHECK(css::causal_weight(p2, g2) == -0.25);

  css::CausalGraph g3({"X", "Y"}, {{"X", "Y", -1.0, 1.0}});
  auto p3 = css::enumerate_paths(g3, "X", "Y").at(0);
  CHECK(css::causal_weight(p3, g3) == -1.0);
}

TEST_CASE("leaky_weight attenuation") {
  css::CausalGraph direct({"X", "Y"}, {{"X", "Y", 1.0, 1.0}});
  auto pd = css::enumerate_paths(direct, "X", "Y").at(0);
  auto std0 = css::path_status(pd, {}, direct);
  CHECK(css::leaky_weight(pd, std0, direct, 0.6, 0.4) == 1.0);  // no intermediates

  css::CausalGraph chain({"X", "M", "Y"}, {{"X", "M", 1.0, 1.0}, {"M", "Y", 1.0, 1.0}});
  auto pc = css::enumerate_paths(chain, "X", "Y").at(0);
  auto cond = css::path_status(pc, {chain.node_id("M")}, chain);
  CHECK(css::leaky_weight(pc, cond, chain, 0.6, 0.4) == doctest::Approx(0.4));

  css::CausalGraph two({"X", "M", "N", "Y"},
                       {{"X", "M", -1.0, 1.0}, {"M", "N", 1.0, 1.0}, {"N", "Y", 1.0, 1.0}});
  auto pt = css::enumerate_paths(two, "X", "Y").at(0);
  auto one_cond = css::path_status(pt, {two.node_id("M")}, two);
  CHECK(css::leaky_weight(pt, one_cond, two, 0.6, 0.4) == doctest::Approx(-0.24));

  SUBCASE("lambda ordering is enforced") {
    CHECK_THROWS_AS(css::leaky_weight(pt, one_cond, two, 0.4, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(css::leaky_weight(pt, one_cond, two, 1.1, 0.4), std::invalid_argument);
  }

  SUBCASE("lambda_o=1, lambda_b=0 reproduces the open/blocked dichotomy") {
    auto open = css::path_status(pt, {}, two);
    CHECK(css::leaky_weight(pt, open, two, 1.0, 0.0) == css::causal_weight(pt, two));
    CHECK(css::leaky_weight(pt, one_cond, two, 1.0, 0.0) == 0.0);
  }

  SUBCASE("blocked-by-collider paths carry no flow") {
    css::CausalGraph coll({"X", "C", "Y"}, {{"X", "C", 1.0, 1.0}, {"Y", "C", 1.0, 1.0}});
    auto p = css::enumerate_paths(coll, "X", "Y").at(0);
    auto st = css::path_status(p, {}, coll);
    CHECK(css::leaky_weight(p, st, coll, 0.6, 0.4) == 0.0);
  }
}
