#ifndef CSS_PIPELINE_HPP
#define CSS_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "css/dataset.hpp"
#include "css/gain.hpp"
#include "css/partition.hpp"
#include "css/skyline.hpp"

namespace css {

struct CssOptions {
  SkylineAlgo base_algo = SkylineAlgo::sfs;
  Partitioning::Mode partition_mode = Partitioning::Mode::kmeans;
  std::size_t m = 10;
  std::uint64_t seed = 7;
  int kmeans_max_iters = 100;
  SkylineOptions skyline;
};

struct CssResult {
  SkylineResult skyline;
  std::size_t m_effective = 0;
  bool used_css = true;                  // false when the adaptive switch fell back
  std::optional<GainReport> gain_report;

  std::string to_json_text() const;
};

/// Steps 1-4: partition on the plan's conditioning set, per-group skylines,
/// union, and a final skyline pass over the union. Dominance checks aggregate
/// across phases; phase timings cover partition / groups / merge / final.
CssResult css_run(const Dataset& ds, const PreferenceSpec& pref, const GainReport& plan,
                  const CssOptions& opts);

/// Step 0 + adaptive switch: select a conditioning set, run CSS when its gain
/// is positive, otherwise the vanilla base algorithm.
CssResult adaptive_run(const Dataset& ds, const PreferenceSpec& pref,
                       const CausalGraph* g, const SelectOptions& select,
                       const CssOptions& opts);

}  // namespace css

#endif
