#ifndef CSS_ANALYTIC_HPP
#define CSS_ANALYTIC_HPP

#include <vector>

#include "css/causal_graph.hpp"
#include "css/paths.hpp"
#include "css/stats.hpp"

namespace css {

/// Linear-Gaussian model of one causal path: variables U_0..U_m with one
/// oriented link per adjacent pair. Link k relates U_k and U_{k+1};
/// forward means the underlying edge is U_k -> U_{k+1}.
struct PathLink {
  bool forward = true;
  double alpha = 0.0;      // signed regression coefficient of the directed edge
  double noise_var = 1.0;  // variance of the edge noise
};

struct PathModel {
  std::vector<PathLink> links;
  /// Marginal variance per variable; only entries for path-sources (no
  /// incoming path edge) are consumed, the rest may be NaN.
  std::vector<double> source_variances;

  std::size_t variable_count() const { return links.size() + 1; }
  int last() const { return static_cast<int>(links.size()); }
  bool has_incoming(int pos) const;
  bool is_collider(int pos) const;
  bool has_collider() const;
};

/// Builds the model for a concrete graph path, with source variances taken
/// from the exact SEM covariance of the full graph.
PathModel path_model(const CausalGraph& g, const CausalPath& p);

/// Path-implied covariance between the endpoints: coefficient product times
/// the source (chain cause or single fork) variance; 0 when a collider lies
/// on the path. Throws on a two-fork collider-free input, which no simple
/// path can produce.
double path_unconditioned_cov(const PathModel& pm);

/// Solves the per-edge variance recursion along the path; source variances
/// must be supplied. Returns var(U_0..U_m).
std::vector<double> path_variance_propagation(const PathModel& pm);

/// Path-implied covariance between two positions (propagated variances given).
double path_pair_cov(const PathModel& pm, const std::vector<double>& vars, int a, int b);

/// Variance of the i-th of c equi-width segments of N(mu, V) spanning
/// +-3 sqrt(V), scaled so the result is in units of V. Index range is
/// -c/2 <= i < c/2 (odd c uses symmetric bins around 0). With extend_tails
/// the outermost segments absorb the mass beyond 3 sigma.
double trunc_gauss_segment_var(int c, int i, double V, bool extend_tails = false);

/// Probability mass of the segment (standard normal).
double trunc_gauss_segment_mass(int c, int i, bool extend_tails = false);

/// Mean of the segment in units of sqrt(V).
double trunc_gauss_segment_mean(int c, int i, bool extend_tails = false);

/// Predicted per-attribute variance scaling rho after K-means with c clusters
/// on the given attributes: eigen-decompose the (normalized) covariance,
/// allocate per-eigen-dimension partition counts proportional to eigenvalues
/// with product <= c and saturation at round(log2 c), average truncated
/// segment variances per dimension, and rotate back.
std::vector<double> cluster_variance_scaling(const GaussianStats& stats, int c);

/// var(U_target | S) where S are cluster-conditioned variables at the given
/// path positions, each retaining rho[i] of its variance. Cases follow the
/// nearest-conditioned-cut structure: unaffected, single nearest, or two-sided.
double conditional_variance(const PathModel& pm, int target,
                            const std::vector<int>& conditioned,
                            const std::vector<double>& rho);

/// cov(U_a, U_b | S); 0 when the positions are separated by a collider.
double conditional_covariance(const PathModel& pm, int a, int b,
                              const std::vector<int>& conditioned,
                              const std::vector<double>& rho);

/// corr-after-conditioning minus corr-before for the path endpoints, with
/// per-variable rho predicted from cluster_variance_scaling at c clusters.
/// Paths carrying a collider imply zero correlation and return 0.
double analytic_c_gain(const PathModel& pm, const std::vector<int>& conditioned,
                       int cluster_count);

}  // namespace css

#endif
