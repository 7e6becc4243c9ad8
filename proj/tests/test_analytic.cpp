#include <doctest.h>

#include <stdexcept>
#include <limits>

#include <cmath>

#include "css/analytic.hpp"
#include "css/normal.hpp"
#include "css/partition.hpp"
#include "css/sem.hpp"
#include "css/stats.hpp"

namespace {

// Simpson-rule quadrature oracle for truncated-normal moments, independent of
// the closed-form implementation.
struct TruncOracle {
  double mass, mean, var;
};

TruncOracle quad_trunc(double lo, double hi, int steps = 40000) {
  auto f = [](double x) { return css::std_normal_pdf(x); };
  double h = (hi - lo) / steps;
  double m0 = 0, m1 = 0, m2 = 0;
  for (int i = 0; i <= steps; ++i) {
    double x = lo + i * h;
    double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    m0 += w * f(x);
    m1 += w * x * f(x);
    m2 += w * x * x * f(x);
  }
  m0 *= h / 3; m1 *= h / 3; m2 *= h / 3;
  double mean = m1 / m0;
  return {m0, mean, m2 / m0 - mean * mean};
}

css::PathModel chain_model(std::vector<double> alphas, std::vector<double> noises,
                           double src_var = 1.0) {
  css::PathModel pm;
  for (std::size_t i = 0; i < alphas.size(); ++i)
    pm.links.push_back({true, alphas[i], noises[i]});
  pm.source_variances.assign(alphas.size() + 1,
                             std::numeric_limits<double>::quiet_NaN());
  pm.source_variances[0] = src_var;
  return pm;
}

}  // namespace

TEST_CASE("path_unconditioned_cov covers the three structural cases") {
  SUBCASE("single forward edge") {
    auto pm = chain_model({1.0}, {1.0});
    CHECK(css::path_unconditioned_cov(pm) == doctest::Approx(1.0));
  }
  SUBCASE("fork with +1/-1 arms") {
    css::PathModel pm;  // X <- A -> Y
    pm.links.push_back({false, 1.0, 1.0});
    pm.links.push_back({true, -1.0, 1.0});
    pm.source_variances = {std::numeric_limits<double>::quiet_NaN(), 1.0,
                           std::numeric_limits<double>::quiet_NaN()};
    CHECK(css::path_unconditioned_cov(pm) == doctest::Approx(-1.0));
  }
  SUBCASE("collider zeroes the covariance") {
    css::PathModel pm;  // X -> C <- Y
    pm.links.push_back({true, 1.0, 1.0});
    pm.links.push_back({false, 1.0, 1.0});
    pm.source_variances = {1.0, std::numeric_limits<double>::quiet_NaN(), 1.0};
    CHECK(css::path_unconditioned_cov(pm) == 0.0);
  }
  SUBCASE("backward chain uses the cause-side variance") {
    css::PathModel pm;  // X <- Y with var(Y) = 2
    pm.links.push_back({false, 0.5, 1.0});
    pm.source_variances = {std::numeric_limits<double>::quiet_NaN(), 2.0};
    CHECK(css::path_unconditioned_cov(pm) == doctest::Approx(1.0));
  }
}

TEST_CASE("path_variance_propagation") {
  SUBCASE("unit chain accumulates noise") {
    auto one = css::path_variance_propagation(chain_model({1.0}, {1.0}));
    CHECK(one.back() == doctest::Approx(2.0));
    auto two = css::path_variance_propagation(chain_model({1.0, 1.0}, {1.0, 1.0}));
    CHECK(two.back() == doctest::Approx(3.0));
  }
  SUBCASE("fork children get alpha^2 + eps") {
    css::PathModel pm;  // X <- A -> Y, var(A)=1
    pm.links.push_back({false, 0.5, 0.25});
    pm.links.push_back({true, 2.0, 0.5});
    pm.source_variances = {std::numeric_limits<double>::quiet_NaN(), 1.0,
                           std::numeric_limits<double>::quiet_NaN()};
    auto v = css::path_variance_propagation(pm);
    CHECK(v[0] == doctest::Approx(0.5));   // 0.25*1 + 0.25
    CHECK(v[2] == doctest::Approx(4.5));   // 4*1 + 0.5
  }
  SUBCASE("missing source variance is an error") {
    auto pm = chain_model({1.0}, {1.0});
    pm.source_variances[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(css::path_variance_propagation(pm), std::invalid_argument);
  }
  SUBCASE("propagated variances agree with SEM sampling within 1%") {
    css::CausalGraph g({"A", "X", "Y"}, {{"A", "X", 0.8, 0.5}, {"A", "Y", -1.2, 2.0}});
    auto p = css::enumerate_paths(g, "X", "Y").at(0);
    auto pm = css::path_model(g, p);
    auto v = css::path_variance_propagation(pm);
    auto ds = css::generate_sem(g, 400000, 2);
    CHECK(css::sample_variance(ds.column("X")) == doctest::Approx(v[0]).epsilon(0.01));
    CHECK(css::sample_variance(ds.column("Y")) == doctest::Approx(v[2]).epsilon(0.01));
  }
}

TEST_CASE("trunc_gauss_segment_var matches closed forms and quadrature") {
  SUBCASE("c=1 covers +-3 sigma") {
    CHECK(css::trunc_gauss_segment_var(1, 0, 1.0) == doctest::Approx(0.97334).epsilon(1e-3));
    CHECK(css::trunc_gauss_segment_var(1, 0, 2.5) ==
          doctest::Approx(2.5 * 0.97334).epsilon(1e-3));
  }
  SUBCASE("c=2 upper half [0, 3]") {
    CHECK(css::trunc_gauss_segment_var(2, 0, 1.0) == doctest::Approx(0.34740).epsilon(1e-4));
  }
  SUBCASE("symmetry i <-> -(i+1) for even c") {
    for (int c : {2, 4, 10})
      for (int i = 0; i < c / 2; ++i)
        CHECK(css::trunc_gauss_segment_var(c, i, 1.0) ==
              doctest::Approx(css::trunc_gauss_segment_var(c, -(i + 1), 1.0)).epsilon(1e-12));
  }
  SUBCASE("quadrature agreement for c in {2,4,10}, all segments") {
    for (int c : {2, 4, 10}) {
      const int lo = -(c / 2);
      for (int i = lo; i < lo + c; ++i) {
        double width = 6.0 / c;
        double L = (c % 2 == 0) ? width * i : width * (i - 0.5);
        auto oracle = quad_trunc(L, L + width);
        CHECK(css::trunc_gauss_segment_var(c, i, 1.0) ==
              doctest::Approx(oracle.var).epsilon(0.01));
      }
    }
  }
  SUBCASE("central segment variance is non-increasing in c") {
    double prev = 1e9;
    for (int c : {1, 2, 4, 6, 10, 20, 50}) {
      double v = css::trunc_gauss_segment_var(c, 0, 1.0);
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
  SUBCASE("law of total variance over the +-3 sigma window") {
    for (int c : {2, 5, 10}) {
      const int lo = -(c / 2);
      double total_mass = 0, within = 0, between = 0;
      for (int i = lo; i < lo + c; ++i) total_mass += css::trunc_gauss_segment_mass(c, i);
      for (int i = lo; i < lo + c; ++i) {
        double w = css::trunc_gauss_segment_mass(c, i) / total_mass;
        within += w * css::trunc_gauss_segment_var(c, i, 1.0);
        double mu = css::trunc_gauss_segment_mean(c, i);
        between += w * mu * mu;  // window mean is 0 by symmetry
      }
      double window_var = quad_trunc(-3.0, 3.0).var;
      CHECK(within + between == doctest::Approx(window_var).epsilon(0.01));
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(css::trunc_gauss_segment_var(4, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(css::trunc_gauss_segment_var(4, -3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(css::trunc_gauss_segment_var(0, 0, 1.0), std::invalid_argument);
  }
}

TEST_CASE("cluster_variance_scaling") {
  auto identity_stats = [](int k) {
    css::GaussianStats st;
    for (int i = 0; i < k; ++i) {
      st.attributes.push_back("z" + std::to_string(i));
      st.means.push_back(0.0);
      st.variances.push_back(1.0);
    }
    st.covariances.assign(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < k; ++i) st.covariances[i][i] = 1.0;
    return st;
  };

  SUBCASE("perfect correlation behaves as one dimension") {
    css::GaussianStats st;
    st.attributes = {"a", "b", "c"};
    st.means = {0, 0, 0};
    st.variances = {1, 1, 1};
    st.covariances = {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}};
    auto rho = css::cluster_variance_scaling(st, 10);
    // every attribute shares the 1-D 10-segment average
    CHECK(rho[0] == doctest::Approx(rho[1]).epsilon(1e-9));
    CHECK(rho[1] == doctest::Approx(rho[2]).epsilon(1e-9));
    CHECK(rho[0] < 0.08);
    auto rho_many = css::cluster_variance_scaling(st, 200);
    CHECK(rho_many[0] < rho[0]);  // more clusters, tighter segments
  }

  SUBCASE("identity covariance, k=2, c=4: two partitions per dimension") {
    auto rho = css::cluster_variance_scaling(identity_stats(2), 4);
    CHECK(rho[0] == doctest::Approx(rho[1]).epsilon(1e-9));
    // both dimensions halved: the tail-extended two-segment average
    CHECK(rho[0] == doctest::Approx(0.3634).epsilon(0.01));
  }

  SUBCASE("saturation: identity k=10, c=10 leaves seven dimensions unpartitioned") {
    auto rho = css::cluster_variance_scaling(identity_stats(10), 10);
    double mean = 0.0;
    for (double r : rho) mean += r;
    mean /= 10.0;
    // 3 halved dimensions + 7 untouched
    CHECK(mean == doctest::Approx((3 * 0.3634 + 7 * 1.0) / 10.0).epsilon(0.01));
  }

  SUBCASE("c=1 returns rho ~ 1") {
    auto rho = css::cluster_variance_scaling(identity_stats(3), 1);
    for (double r : rho) CHECK(r == doctest::Approx(1.0));
  }

  SUBCASE("non-PSD input is rejected") {
    css::GaussianStats st;
    st.attributes = {"a", "b"};
    st.means = {0, 0};
    st.variances = {1, 1};
    st.covariances = {{1, 2}, {2, 1}};  // correlation 2: not PSD
    CHECK_THROWS_AS(css::cluster_variance_scaling(st, 4), std::invalid_argument);
  }
}

TEST_CASE("conditional_variance cases") {
  // X = A + eps with var(A)=1, eps=1: the Case-2 plug-in example
  css::PathModel pm;  // A -> X viewed as path X <- A
  pm.links.push_back({false, 1.0, 1.0});
  pm.source_variances = {std::numeric_limits<double>::quiet_NaN(), 1.0};

  SUBCASE("Case 2 single nearest conditioned variable") {
    double v = css::conditional_variance(pm, 0, {1}, {0.25});
    CHECK(v == doctest::Approx(1.25));  // 2 - 1 + 0.25^2/0.25
  }
  SUBCASE("rho = 1 reproduces the unconditional variance") {
    double v = css::conditional_variance(pm, 0, {1}, {1.0});
    CHECK(v == doctest::Approx(2.0));
  }
  SUBCASE("Case 1: conditioning an unrelated position") {
    // collider between target and the conditioned node
    css::CausalGraph g({"X", "C", "Y"}, {{"X", "C", 1.0, 1.0}, {"Y", "C", 1.0, 1.0}});
    auto p = css::enumerate_paths(g, "X", "Y").at(0);
    auto m = css::path_model(g, p);
    CHECK(css::conditional_variance(m, 0, {2}, {0.25}) ==
          doctest::Approx(css::path_variance_propagation(m)[0]));
  }
  SUBCASE("Case 3: two-sided cut with independent cut variables") {
    // X -> C <- Y observed at the collider: the cut variables are
    // uncorrelated, so the clustering assumption (zero conditional
    // cross-covariance) is exact and rho=1 cancels
    css::PathModel coll;
    coll.links.push_back({true, 1.0, 1.0});
    coll.links.push_back({false, 1.0, 1.0});
    coll.source_variances = {1.0, std::numeric_limits<double>::quiet_NaN(), 1.0};
    auto vars = css::path_variance_propagation(coll);
    CHECK(css::conditional_variance(coll, 1, {0, 2}, {1.0, 1.0}) ==
          doctest::Approx(vars[1]));
    CHECK(css::conditional_variance(coll, 1, {0, 2}, {0.2, 0.2}) < vars[1]);
  }
  SUBCASE("Case 3: rho -> 0 approaches exact Gaussian conditioning") {
    // chain A -> X -> B observed at the middle; with correlated cut
    // variables the zero-cross-covariance reading is exact only in the
    // tight-cluster limit, where it matches var(X) - c C^-1 c^T
    css::PathModel chain;
    chain.links.push_back({true, 1.0, 1.0});
    chain.links.push_back({true, 1.0, 1.0});
    chain.source_variances = {1.0, std::numeric_limits<double>::quiet_NaN(),
                              std::numeric_limits<double>::quiet_NaN()};
    double v0 = css::conditional_variance(chain, 1, {0, 2}, {1e-9, 1e-9});
    // exact: var(X) - [1 2] [[1,1],[1,3]]^-1 [1 2]^T = 2 - 1.5
    CHECK(v0 == doctest::Approx(0.5).epsilon(1e-6));
  }
}

TEST_CASE("conditional_covariance cases") {
  SUBCASE("collider-separated pair stays independent") {
    css::CausalGraph g({"X", "C", "Y"}, {{"X", "C", 1.0, 1.0}, {"Y", "C", 1.0, 1.0}});
    auto pm = css::path_model(g, css::enumerate_paths(g, "X", "Y").at(0));
    CHECK(css::conditional_covariance(pm, 0, 2, {}, {}) == 0.0);
  }
  SUBCASE("Case 2 linear scaling by rho") {
    css::PathModel pm;  // X <- A, conditioning A itself
    pm.links.push_back({false, 1.0, 1.0});
    pm.source_variances = {std::numeric_limits<double>::quiet_NaN(), 1.0};
    CHECK(css::conditional_covariance(pm, 0, 1, {1}, {0.25}) == doctest::Approx(0.25));
  }
  SUBCASE("fork conditioning scales the endpoint covariance by rho") {
    css::CausalGraph g({"A", "X", "Y"}, {{"A", "X", 1.0, 1.0}, {"A", "Y", -1.0, 1.0}});
    auto pm = css::path_model(g, css::enumerate_paths(g, "X", "Y").at(0));
    double cov0 = css::path_unconditioned_cov(pm);
    double cond = css::conditional_covariance(pm, 0, 2, {1}, {0.25});
    CHECK(cond == doctest::Approx(0.25 * cov0));
  }
}

TEST_CASE("analytic_c_gain") {
  SUBCASE("no conditioning, no gain") {
    css::CausalGraph g({"A", "X", "Y"}, {{"A", "X", 1.0, 1.0}, {"A", "Y", -1.0, 1.0}});
    auto pm = css::path_model(g, css::enumerate_paths(g, "X", "Y").at(0));
    CHECK(css::analytic_c_gain(pm, {}, 10) == 0.0);
  }
  SUBCASE("negative fork: conditioning the fork yields positive gain") {
    css::CausalGraph g({"A", "X", "Y"}, {{"A", "X", 1.0, 1.0}, {"A", "Y", -1.0, 1.0}});
    auto pm = css::path_model(g, css::enumerate_paths(g, "X", "Y").at(0));
    double gain = css::analytic_c_gain(pm, {1}, 10);
    CHECK(gain > 0.3);  // about -0.5 shrinking toward 0
  }
  SUBCASE("positive chain: conditioning the mediator destroys useful correlation") {
    css::CausalGraph g({"X", "M", "Y"}, {{"X", "M", 1.0, 1.0}, {"M", "Y", 1.0, 1.0}});
    auto pm = css::path_model(g, css::enumerate_paths(g, "X", "Y").at(0));
    CHECK(css::analytic_c_gain(pm, {1}, 10) < -0.3);
  }
  SUBCASE("collider path implies no correlation either way") {
    css::CausalGraph g({"X", "C", "Y"}, {{"X", "C", 1.0, 1.0}, {"Y", "C", 1.0, 1.0}});
    auto pm = css::path_model(g, css::enumerate_paths(g, "X", "Y").at(0));
    CHECK(css::analytic_c_gain(pm, {1}, 10) == 0.0);
  }
  SUBCASE("sign agrees with conditioned-SEM measurement on canonical structures") {
    struct Fixture { css::CausalGraph g; const char* cond; double expect_sign; };
    std::vector<Fixture> fixtures;
    fixtures.push_back({css::CausalGraph({"A", "X", "Y"},
                                         {{"A", "X", 1.0, 1.0}, {"A", "Y", -1.0, 1.0}}),
                        "A", +1.0});
    fixtures.push_back({css::CausalGraph({"X", "M", "Y"},
                                         {{"X", "M", 1.0, 1.0}, {"M", "Y", 1.0, 1.0}}),
                        "M", -1.0});
    for (auto& fx : fixtures) {
      auto paths = css::enumerate_paths(fx.g, "X", "Y");
      auto pm = css::path_model(fx.g, paths.at(0));
      int cond_pos = -1;
      for (std::size_t k = 0; k < paths[0].nodes.size(); ++k)
        if (fx.g.node_name(paths[0].nodes[k]) == fx.cond) cond_pos = int(k);
      double analytic = css::analytic_c_gain(pm, {cond_pos}, 10);

      auto ds = css::generate_sem(fx.g, 50000, 19);
      auto part = css::kmeans_partition(ds, std::vector<std::string>{fx.cond}, 10, 5);
      double before = css::pearson(ds.column("X"), ds.column("Y"));
      double after = 0.0;
      int used = 0;
      std::vector<std::string> attrs{"X", "Y"};
      for (const auto& grp : part.groups) {
        if (grp.size() < 3) continue;
        auto cm = css::correlation_matrix(ds, attrs, grp);
        if (cm.is_defined(0, 1)) { after += cm.at(0, 1); ++used; }
      }
      after /= used;
      double empirical = after - before;
      CHECK(analytic * fx.expect_sign > 0.0);
      CHECK(empirical * fx.expect_sign > 0.0);
      CHECK(std::abs(analytic - empirical) < 0.15);
    }
  }
  SUBCASE("conditioned endpoints are rejected") {
    css::CausalGraph g({"X", "M", "Y"}, {{"X", "M", 1.0, 1.0}, {"M", "Y", 1.0, 1.0}});
    auto pm = css::path_model(g, css::enumerate_paths(g, "X", "Y").at(0));
    CHECK_THROWS_AS(css::analytic_c_gain(pm, {0}, 10), std::invalid_argument);
  }
}
