#ifndef CSS_SEM_HPP
#define CSS_SEM_HPP

#include <cstdint>
#include <vector>

#include "css/causal_graph.hpp"
#include "css/dataset.hpp"

namespace css {

/// Linear-Gaussian structural equation sampler. Roots draw from N(0,1); every
/// other node is the sum over incoming edges of weight * parent + independent
/// Gaussian noise with the edge-declared variance. Deterministic per seed.
Dataset generate_sem(const CausalGraph& g, std::size_t n, std::uint64_t seed);

/// Exact model covariance of the SEM above (nodes in graph order).
std::vector<std::vector<double>> sem_covariance(const CausalGraph& g);

/// Perturbed oversampling: original rows retained, synthetic rows are
/// uniformly resampled originals plus N(0, (sigma * column std)^2) noise.
Dataset augment_gaussian(const Dataset& ds, std::size_t target_n, double sigma,
                         std::uint64_t seed);

}  // namespace css

#endif
