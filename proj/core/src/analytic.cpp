#include "css/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "css/normal.hpp"
#include "css/sem.hpp"

namespace css {

bool PathModel::has_incoming(int pos) const {
  bool from_left = pos > 0 && links[pos - 1].forward;
  bool from_right = pos < last() && !links[pos].forward;
  return from_left || from_right;
}

bool PathModel::is_collider(int pos) const {
  if (pos <= 0 || pos >= last()) return false;
  return links[pos - 1].forward && !links[pos].forward;
}

bool PathModel::has_collider() const {
  for (int pos = 1; pos < last(); ++pos)
    if (is_collider(pos)) return true;
  return false;
}

PathModel path_model(const CausalGraph& g, const CausalPath& p) {
  PathModel pm;
  pm.links.reserve(p.edges.size());
  for (std::size_t k = 0; k < p.edges.size(); ++k) {
    const CausalEdge& e = g.edge(p.edges[k]);
    pm.links.push_back({p.forward[k], e.weight, e.noise_variance});
  }
  pm.source_variances.assign(p.nodes.size(), std::numeric_limits<double>::quiet_NaN());
  auto cov = sem_covariance(g);
  for (std::size_t k = 0; k < p.nodes.size(); ++k)
    if (!pm.has_incoming(int(k))) pm.source_variances[k] = cov[p.nodes[k]][p.nodes[k]];
  return pm;
}

std::vector<double> path_variance_propagation(const PathModel& pm) {
  const int n = int(pm.variable_count());
  std::vector<double> var(n, std::numeric_limits<double>::quiet_NaN());
  for (int pos = 0; pos < n; ++pos) {
    if (!pm.has_incoming(pos)) {
      if (pos >= int(pm.source_variances.size()) || !std::isfinite(pm.source_variances[pos]))
        throw std::invalid_argument("path model: missing source variance at position " +
                                    std::to_string(pos));
      var[pos] = pm.source_variances[pos];
    }
  }
  // var(U_i) = sum over incoming links of alpha^2 var(neighbor) + eps
  bool progress = true;
  while (progress) {
    progress = false;
    for (int pos = 0; pos < n; ++pos) {
      if (std::isfinite(var[pos])) continue;
      double v = 0.0;
      bool ready = true;
      if (pos > 0 && pm.links[pos - 1].forward) {
        if (!std::isfinite(var[pos - 1])) { ready = false; }
        else v += pm.links[pos - 1].alpha * pm.links[pos - 1].alpha * var[pos - 1] +
                  pm.links[pos - 1].noise_var;
      }
      if (ready && pos < n - 1 && !pm.links[pos].forward) {
        if (!std::isfinite(var[pos + 1])) { ready = false; }
        else v += pm.links[pos].alpha * pm.links[pos].alpha * var[pos + 1] +
                  pm.links[pos].noise_var;
      }
      if (ready) { var[pos] = v; progress = true; }
    }
  }
  for (int pos = 0; pos < n; ++pos)
    if (!std::isfinite(var[pos]))
      throw std::invalid_argument("path model: underdetermined variance system");
  return var;
}

double path_pair_cov(const PathModel& pm, const std::vector<double>& vars, int a, int b) {
  if (a > b) std::swap(a, b);
  if (a == b) return vars[a];
  for (int pos = a + 1; pos < b; ++pos)
    if (pm.is_collider(pos)) return 0.0;
  // unique sub-path source: no incoming edge within [a, b]
  int source = -1;
  for (int pos = a; pos <= b; ++pos) {
    bool in_left = pos > a && pm.links[pos - 1].forward;
    bool in_right = pos < b && !pm.links[pos].forward;
    if (!in_left && !in_right) { source = pos; break; }
  }
  double c = vars[source];
  for (int k = a; k < b; ++k) c *= pm.links[k].alpha;
  return c;
}

double path_unconditioned_cov(const PathModel& pm) {
  if (pm.has_collider()) return 0.0;
  int forks = 0;
  for (int pos = 1; pos < pm.last(); ++pos)
    if (!pm.links[pos - 1].forward && pm.links[pos].forward) ++forks;
  if (forks >= 2)
    throw std::invalid_argument("path model: two forks without a collider is not a simple path");
  auto vars = path_variance_propagation(pm);
  return path_pair_cov(pm, vars, 0, pm.last());
}

namespace {

struct SegmentBounds {
  double lower, upper;
};

SegmentBounds segment_bounds(int c, int i, bool extend_tails) {
  if (c < 1) throw std::invalid_argument("trunc_gauss: c must be >= 1");
  if (!(2 * i >= -c && 2 * i < c))
    throw std::invalid_argument("trunc_gauss: segment index out of range");
  const double width = 6.0 / c;
  double lower, upper;
  if (c % 2 == 0) {
    lower = width * i;
    upper = width * (i + 1);
  } else {
    lower = width * (i - 0.5);
    upper = width * (i + 0.5);
  }
  const int lo_index = -(c / 2);
  if (extend_tails) {
    if (i == lo_index) lower = -std::numeric_limits<double>::infinity();
    if (i == lo_index + c - 1) upper = std::numeric_limits<double>::infinity();
  }
  return {lower, upper};
}

double xf(double x) { return std::isinf(x) ? 0.0 : x * std_normal_pdf(x); }
double f(double x) { return std::isinf(x) ? 0.0 : std_normal_pdf(x); }
double phi(double x) {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  return std_normal_cdf(x);
}

}  // namespace

double trunc_gauss_segment_mass(int c, int i, bool extend_tails) {
  auto [L, U] = segment_bounds(c, i, extend_tails);
  return phi(U) - phi(L);
}

double trunc_gauss_segment_mean(int c, int i, bool extend_tails) {
  auto [L, U] = segment_bounds(c, i, extend_tails);
  double mass = phi(U) - phi(L);
  if (std::abs(mass) < 1e-12)
    throw std::invalid_argument("trunc_gauss: segment carries negligible mass");
  return (f(L) - f(U)) / mass;
}

double trunc_gauss_segment_var(int c, int i, double V, bool extend_tails) {
  if (V < 0.0) throw std::invalid_argument("trunc_gauss: negative variance");
  auto [L, U] = segment_bounds(c, i, extend_tails);
  double mass = phi(U) - phi(L);
  if (std::abs(mass) < 1e-12)
    throw std::invalid_argument("trunc_gauss: segment carries negligible mass");
  double mu_cond = (f(L) - f(U)) / mass;
  double rho = 1.0 + (xf(L) - xf(U)) / mass - mu_cond * mu_cond;
  return rho * V;
}

namespace {

double mean_segment_rho(int c) {
  if (c <= 1) return 1.0;  // unpartitioned dimension keeps its full variance
  double acc = 0.0;
  const int lo = -(c / 2);
  for (int i = lo; i < lo + c; ++i)
    acc += trunc_gauss_segment_var(c, i, 1.0, /*extend_tails=*/true);
  return acc / double(c);
}

// Largest-variance-first integer partition allocation with product <= c and
// at most round(log2 c) partitioned dimensions.
std::vector<int> allocate_partitions(const std::vector<double>& eigvals, int c) {
  const int k = int(eigvals.size());
  const int kp_max = std::min<int>(k, int(std::llround(std::log2(double(c)))));
  std::vector<int> counts(k, 1);
  auto product = [&]() {
    long long p = 1;
    for (int v : counts) p *= v;
    return p;
  };
  while (true) {
    int best = -1;
    double best_score = -1.0;
    long long p = product();
    for (int i = 0; i < kp_max; ++i) {
      if (eigvals[i] <= 1e-9) continue;
      if (p / counts[i] * (counts[i] + 1) > c) continue;
      double score = eigvals[i] / double(counts[i]);
      if (score > best_score) { best_score = score; best = i; }
    }
    if (best < 0) break;
    ++counts[best];
  }
  return counts;
}

}  // namespace

std::vector<double> cluster_variance_scaling(const GaussianStats& stats, int c) {
  const int k = int(stats.attributes.size());
  if (k == 0) throw std::invalid_argument("cluster_variance_scaling: no attributes");
  if (c < 1) throw std::invalid_argument("cluster_variance_scaling: c must be >= 1");

  // Work on the correlation-normalized covariance: clustering happens on
  // z-scored columns, and rho is scale free.
  std::vector<int> active;
  for (int i = 0; i < k; ++i)
    if (stats.variances[i] > 0.0) active.push_back(i);

  std::vector<double> rho(k, 1.0);
  if (active.empty() || c == 1) return rho;

  const int ka = int(active.size());
  Eigen::MatrixXd corr(ka, ka);
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < ka; ++j)
      corr(i, j) = stats.covariances[active[i]][active[j]] /
                   std::sqrt(stats.variances[active[i]] * stats.variances[active[j]]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("cluster_variance_scaling: eigen decomposition failed");
  Eigen::VectorXd lam = solver.eigenvalues().reverse();
  Eigen::MatrixXd U = solver.eigenvectors().rowwise().reverse();
  if (lam.minCoeff() < -1e-8 * std::max(1.0, lam.maxCoeff()))
    throw std::invalid_argument("cluster_variance_scaling: covariance not PSD");

  std::vector<double> eigvals(ka);
  for (int i = 0; i < ka; ++i) eigvals[i] = std::max(0.0, lam(i));
  std::vector<int> counts = allocate_partitions(eigvals, c);

  Eigen::VectorXd vstar(ka);
  for (int i = 0; i < ka; ++i) vstar(i) = eigvals[i] * mean_segment_rho(counts[i]);

  Eigen::MatrixXd cluster_cov = U * vstar.asDiagonal() * U.transpose();
  for (int i = 0; i < ka; ++i) {
    double r = cluster_cov(i, i);  // normalized space: original variance is 1
    rho[active[i]] = std::clamp(r, 1e-12, 1.0);
  }
  return rho;
}

namespace {

// Nearest conditioned position scanning outward from `from` in direction
// `step`; the scan does not cross a collider.
int nearest_conditioned(const PathModel& pm, int from, int step,
                        const std::vector<int>& conditioned) {
  auto is_cond = [&](int pos) {
    return std::find(conditioned.begin(), conditioned.end(), pos) != conditioned.end();
  };
  for (int pos = from + step; pos >= 0 && pos <= pm.last(); pos += step) {
    if (is_cond(pos)) return pos;
    if (pm.is_collider(pos)) return -1;
  }
  return -1;
}

double rho_at(const std::vector<int>& conditioned, const std::vector<double>& rho, int pos) {
  for (std::size_t i = 0; i < conditioned.size(); ++i)
    if (conditioned[i] == pos) return rho[i];
  throw std::logic_error("rho_at: position not conditioned");
}

void validate_conditioning(const PathModel& pm, const std::vector<int>& conditioned,
                           const std::vector<double>& rho) {
  if (conditioned.size() != rho.size())
    throw std::invalid_argument("conditioning: rho/positions size mismatch");
  for (std::size_t i = 0; i < conditioned.size(); ++i) {
    if (conditioned[i] < 0 || conditioned[i] > pm.last())
      throw std::invalid_argument("conditioning: position out of range");
    if (!(rho[i] > 0.0 && rho[i] <= 1.0))
      throw std::invalid_argument("conditioning: rho must be in (0, 1]");
  }
}

}  // namespace

double conditional_variance(const PathModel& pm, int target,
                            const std::vector<int>& conditioned,
                            const std::vector<double>& rho) {
  validate_conditioning(pm, conditioned, rho);
  auto vars = path_variance_propagation(pm);
  if (target < 0 || target > pm.last())
    throw std::invalid_argument("conditional_variance: target out of range");

  std::vector<int> cut;
  int left = nearest_conditioned(pm, target, -1, conditioned);
  int right = nearest_conditioned(pm, target, +1, conditioned);
  if (left >= 0) cut.push_back(left);
  if (right >= 0) cut.push_back(right);

  if (cut.empty()) return vars[target];  // Case 1: unaffected by the conditioning

  if (cut.size() == 1) {  // Case 2
    int q = cut[0];
    double cxq = path_pair_cov(pm, vars, target, q);
    double r = rho_at(conditioned, rho, q);
    return vars[target] - cxq * cxq / vars[q] * (1.0 - r);
  }

  // Case 3: two-sided nearest cut; conditional cross-covariances vanish
  // under clustering, so term2 is diagonal.
  Eigen::MatrixXd C(2, 2);
  C(0, 0) = vars[cut[0]];
  C(1, 1) = vars[cut[1]];
  C(0, 1) = C(1, 0) = path_pair_cov(pm, vars, cut[0], cut[1]);
  Eigen::Vector2d cx(path_pair_cov(pm, vars, target, cut[0]),
                     path_pair_cov(pm, vars, target, cut[1]));
  double det = C.determinant();
  if (std::abs(det) < 1e-14 * std::max(1.0, C(0, 0) * C(1, 1)))
    throw std::runtime_error("conditional_variance: singular covariance sub-matrix");
  double term1 = vars[target] - cx.transpose() * C.inverse() * cx;
  double term2 = 0.0;
  for (int q : cut) {
    double r = rho_at(conditioned, rho, q);
    double cxq = path_pair_cov(pm, vars, target, q);
    term2 += r * cxq * cxq / vars[q];
  }
  return term1 + term2;
}

double conditional_covariance(const PathModel& pm, int a, int b,
                              const std::vector<int>& conditioned,
                              const std::vector<double>& rho) {
  validate_conditioning(pm, conditioned, rho);
  if (a > b) std::swap(a, b);
  auto vars = path_variance_propagation(pm);

  auto is_cond = [&](int pos) {
    return std::find(conditioned.begin(), conditioned.end(), pos) != conditioned.end();
  };
  if (is_cond(a) && is_cond(b)) return 0.0;  // clustering erases conditioned cross-covariance
  if (is_cond(a) || is_cond(b)) {
    int q = is_cond(a) ? a : b;
    return path_pair_cov(pm, vars, a, b) * rho_at(conditioned, rho, q);
  }

  for (int pos = a + 1; pos < b; ++pos)
    if (pm.is_collider(pos)) return 0.0;  // Case 1: no path-implied dependence

  std::vector<int> cut;
  for (int q : {nearest_conditioned(pm, a, -1, conditioned),
                nearest_conditioned(pm, a, +1, conditioned),
                nearest_conditioned(pm, b, -1, conditioned),
                nearest_conditioned(pm, b, +1, conditioned)})
    if (q >= 0 && std::find(cut.begin(), cut.end(), q) == cut.end()) cut.push_back(q);
  std::sort(cut.begin(), cut.end());

  double base = path_pair_cov(pm, vars, a, b);
  if (cut.empty()) return base;

  const int r = int(cut.size());
  Eigen::MatrixXd C(r, r);
  Eigen::VectorXd ca(r), cb(r);
  for (int i = 0; i < r; ++i) {
    ca(i) = path_pair_cov(pm, vars, a, cut[i]);
    cb(i) = path_pair_cov(pm, vars, b, cut[i]);
    for (int j = 0; j < r; ++j) C(i, j) = path_pair_cov(pm, vars, cut[i], cut[j]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
  if (!lu.isInvertible())
    throw std::runtime_error("conditional_covariance: singular covariance sub-matrix");
  double term1 = base - ca.transpose() * lu.solve(cb);
  double term2 = 0.0;
  for (int i = 0; i < r; ++i)
    term2 += rho_at(conditioned, rho, cut[i]) * ca(i) * cb(i) / vars[cut[i]];
  return term1 + term2;
}

double analytic_c_gain(const PathModel& pm, const std::vector<int>& conditioned,
                       int cluster_count) {
  if (pm.has_collider()) return 0.0;  // path implies zero correlation either way
  if (conditioned.empty()) return 0.0;
  for (int q : conditioned)
    if (q <= 0 || q >= pm.last())
      throw std::invalid_argument("analytic_c_gain: conditioned endpoint");

  auto vars = path_variance_propagation(pm);
  const int m = pm.last();
  if (vars[0] <= 0.0 || vars[m] <= 0.0)
    throw std::invalid_argument("analytic_c_gain: zero endpoint variance");

  // rho for the conditioning set from its own (path-implied) joint statistics
  GaussianStats stats;
  for (int q : conditioned) {
    stats.attributes.push_back("u" + std::to_string(q));
    stats.means.push_back(0.0);
    stats.variances.push_back(vars[q]);
  }
  stats.covariances.assign(conditioned.size(),
                           std::vector<double>(conditioned.size(), 0.0));
  for (std::size_t i = 0; i < conditioned.size(); ++i)
    for (std::size_t j = 0; j < conditioned.size(); ++j)
      stats.covariances[i][j] = path_pair_cov(pm, vars, conditioned[i], conditioned[j]);
  std::vector<double> rho = cluster_variance_scaling(stats, cluster_count);

  double corr_before = path_pair_cov(pm, vars, 0, m) / std::sqrt(vars[0] * vars[m]);
  double v0 = conditional_variance(pm, 0, conditioned, rho);
  double vm = conditional_variance(pm, m, conditioned, rho);
  if (v0 <= 0.0 || vm <= 0.0)
    throw std::runtime_error("analytic_c_gain: non-positive conditional variance");
  double corr_after = conditional_covariance(pm, 0, m, conditioned, rho) / std::sqrt(v0 * vm);
  return corr_after - corr_before;
}

}  // namespace css
