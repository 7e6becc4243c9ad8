#ifndef CSS_GAIN_HPP
#define CSS_GAIN_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "css/causal_graph.hpp"
#include "css/dataset.hpp"
#include "css/partition.hpp"

namespace css {

enum class Direction { min, max };

struct PreferenceSpec {
  std::vector<std::string> attributes;
  std::vector<Direction> directions;

  void validate() const;  // non-empty, unique
  /// Parses "Price:min,Commute:max".
  static PreferenceSpec parse(const std::string& text);
  std::string to_string() const;
};

enum class GainStrategy { ddsky, gnsky, lnsky, analytic };

std::string strategy_name(GainStrategy s);

struct PairImpact {
  double imp_plus = 0.0;
  double imp_minus = 0.0;  // oriented so that gain contribution is imp_plus - imp_minus
  bool skipped = false;    // pair endpoint inside Z
};

struct GainReport {
  std::vector<std::string> conditioning_set;  // sorted
  std::string strategy;
  double gain = 0.0;
  std::map<std::string, PairImpact> per_pair;  // key "a|b", a < b
  std::optional<std::pair<double, double>> lambda;  // (lambda_o, lambda_b)
  std::optional<int> cluster_count;
  bool beats_zero = false;
  bool beats_preference_set = false;
  int skipped_small_groups = 0;  // ddsky groups below the 3-row floor

  std::string to_json_text() const;
};

struct GainOptions {
  /// Multiply each pair's contribution by |C_P[i,j]| (struck-out paper
  /// variant; requires a dataset). Default off.
  bool correlation_magnitude = false;
  const Dataset* magnitude_dataset = nullptr;
};

/// Data-driven gain: mean within-group preference correlation (canonical
/// min-orientation) minus the unconditioned sum. Groups with fewer than
/// 3 rows are skipped and counted.
GainReport dd_gain(const Dataset& ds, const PreferenceSpec& pref,
                   std::span<const std::string> z, const Partitioning& grouping);

/// Path-count (unweighted) or |cw|-flow (weighted) gain from blocking
/// negative paths while keeping positive ones open.
GainReport gn_gain(const CausalGraph& g, const PreferenceSpec& pref,
                   std::span<const std::string> z, bool weighted,
                   const GainOptions& opts = {});

/// Leaky-flow gain with per-node attenuation lambda_o (open) / lambda_b
/// (conditioned). Requires 0 < lambda_b < lambda_o <= 1.
GainReport ln_gain(const CausalGraph& g, const PreferenceSpec& pref,
                   std::span<const std::string> z, double lambda_o, double lambda_b,
                   const GainOptions& opts = {});

struct SelectOptions {
  GainStrategy strategy = GainStrategy::lnsky;
  int max_subset_size = 0;     // 0: no cap (all of 2^|A|)
  bool weighted = true;        // gnsky flavor
  double lambda_o = 0.6;
  double lambda_b = 0.4;
  std::size_t clusters = 10;   // ddsky grouping / analytic segment count
  std::uint64_t seed = 7;      // ddsky kmeans seed
  bool exclude_preference_attrs = false;  // restrict Z to A \ P
  GainOptions gain;
};

/// Exhaustively scores all non-empty subsets Z (|Z| <= cap) and returns the
/// argmax; ties break toward smaller |Z| then lexicographic order. The report
/// also records whether the best gain beats zero and the preference set's own
/// gain, mirroring the adaptive-use regimes.
GainReport select_conditioning_set(const Dataset* ds, const CausalGraph* g,
                                   const PreferenceSpec& pref, const SelectOptions& opts);

}  // namespace css

#endif
