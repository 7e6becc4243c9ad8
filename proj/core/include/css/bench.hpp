#ifndef CSS_BENCH_HPP
#define CSS_BENCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "css/causal_graph.hpp"
#include "css/dataset.hpp"
#include "css/gain.hpp"
#include "css/pipeline.hpp"

namespace css {

/// Experiment grid. CLI flags override file values; see bench_cli docs.
struct ExperimentConfig {
  int version = 1;

  // Data source: a CSV path, or a synthetic spec (graph + n + seed).
  std::string data_csv;           // empty -> synthetic
  std::string graph_path;         // required for gnsky/lnsky/analytic and synthetic data
  std::string preferences;        // "Price:min,Commute:min"
  std::vector<std::string> algorithms;  // subset of {bnl,sfs,salsa,bbs,dc}
  std::vector<std::string> strategies;  // subset of {vanilla,ddsky,gnsky,lnsky,analytic,pref_decorr}
  std::vector<std::size_t> n_values;    // synthetic sizes; for CSV: augmented sizes (empty -> native)
  std::vector<std::size_t> m_values{10};
  std::vector<std::pair<double, double>> lambda_pairs{{0.6, 0.4}};
  int repetitions = 1;
  std::uint64_t seed = 7;
  double augment_sigma = 0.05;    // CSV oversampling noise scale
  int max_subset_size = 0;        // 0 -> |A|
  std::string out_dir = ".";
  std::vector<std::string> formats{"csv"};  // subset of {csv,json}
  bool omit_timings = false;      // zero the timing columns for reproducible bytes

  void validate() const;
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
};

struct CellRow {
  std::string algorithm;
  std::string strategy;
  std::size_t n = 0;
  std::size_t pref_dims = 0;
  std::size_t m = 0;
  double lambda_o = 0.0, lambda_b = 0.0;
  std::uint64_t seed = 0;
  int repetition = 0;
  std::size_t skyline_size = 0;
  std::uint64_t dominance_checks = 0;
  double step0_seconds = 0.0;     // gain computation, timed separately
  double pipeline_seconds = 0.0;  // partitioning + skyline passes
  double total_seconds = 0.0;
  std::string decision;           // css | vanilla | n/a
  std::string conditioning_set;   // space-separated, empty for vanilla
  std::string error;              // nonempty when the cell failed
};

struct ExperimentOutcome {
  std::vector<CellRow> rows;
  int failed_cells = 0;
};

ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

/// Writes results.{csv,json} plus a summary with per-(algorithm,strategy)
/// median dominance-check and time reduction factors vs the vanilla cells.
std::vector<std::string> emit_report(const std::vector<CellRow>& rows,
                                     const ExperimentConfig& cfg);

/// Random DAGs with weights in {+-1, +-0.5}, each containing chain, fork and
/// collider primitives where the density budget permits. Returns file paths.
std::vector<std::string> generate_graph_suite(const std::vector<int>& node_counts,
                                              double edge_density, std::uint64_t seed,
                                              const std::string& out_dir);

CausalGraph generate_random_dag(int nodes, double edge_density, std::uint64_t seed);

}  // namespace css

#endif
