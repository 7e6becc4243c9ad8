#include "css/sem.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "css/stats.hpp"

namespace css {

Dataset generate_sem(const CausalGraph& g, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_sem: n must be >= 1");
  const auto order = g.topological_order();  // throws on cycles
  const std::size_t k = g.node_count();

  std::vector<std::vector<double>> cols(k, std::vector<double>(n, 0.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  for (int node : order) {
    auto& col = cols[node];
    const auto& incoming = g.in_edges(node);
    if (incoming.empty()) {
      for (std::size_t r = 0; r < n; ++r) col[r] = unit(rng);
      continue;
    }
    for (int ei : incoming) {
      const CausalEdge& e = g.edge(ei);
      const auto& parent = cols[e.src];
      const double sd = std::sqrt(e.noise_variance);
      for (std::size_t r = 0; r < n; ++r) col[r] += e.weight * parent[r] + sd * unit(rng);
    }
  }

  std::vector<std::string> names = g.node_names();
  return Dataset(std::move(names), std::move(cols));
}

std::vector<std::vector<double>> sem_covariance(const CausalGraph& g) {
  const auto order = g.topological_order();
  const std::size_t k = g.node_count();
  std::vector<std::vector<double>> cov(k, std::vector<double>(k, 0.0));

  for (int node : order) {
    const auto& incoming = g.in_edges(node);
    if (incoming.empty()) {
      cov[node][node] = 1.0;  // root ~ N(0,1)
      continue;
    }
    // X_node = sum_e w_e X_src(e) + eps_e
    for (std::size_t other = 0; other < k; ++other) {
      if (int(other) == node) continue;
      double c = 0.0;
      for (int ei : incoming) c += g.edge(ei).weight * cov[g.edge(ei).src][other];
      cov[node][other] = cov[other][node] = c;
    }
    double v = 0.0;
    for (int ei : incoming) {
      const CausalEdge& e = g.edge(ei);
      v += e.noise_variance;
      for (int ej : incoming) v += e.weight * g.edge(ej).weight * cov[e.src][g.edge(ej).src];
    }
    cov[node][node] = v;
  }
  return cov;
}

Dataset augment_gaussian(const Dataset& ds, std::size_t target_n, double sigma,
                         std::uint64_t seed) {
  if (ds.row_count() == 0) throw std::invalid_argument("augment_gaussian: empty dataset");
  if (target_n < ds.row_count())
    throw std::invalid_argument("augment_gaussian: target_n below current row count");
  if (sigma < 0.0) throw std::invalid_argument("augment_gaussian: sigma must be >= 0");

  const std::size_t k = ds.attribute_count();
  const std::size_t n0 = ds.row_count();

  std::vector<double> col_sd(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    double var = n0 >= 2 ? sample_variance(ds.column(int(c))) : 0.0;
    col_sd[c] = var > 0.0 ? std::sqrt(var) : 0.0;
  }

  std::vector<std::vector<double>> cols(k);
  for (std::size_t c = 0; c < k; ++c) {
    cols[c] = ds.column(int(c));
    cols[c].resize(target_n);
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n0 - 1);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (std::size_t r = n0; r < target_n; ++r) {
    std::size_t src = pick(rng);
    for (std::size_t c = 0; c < k; ++c)
      cols[c][r] = ds.column(int(c))[src] + sigma * col_sd[c] * unit(rng);
  }
  return Dataset(std::vector<std::string>(ds.attribute_names()), std::move(cols));
}

}  // namespace css
