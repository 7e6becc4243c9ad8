#ifndef CSS_SKYLINE_HPP
#define CSS_SKYLINE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "css/dataset.hpp"
#include "css/gain.hpp"

namespace css {

struct DominanceCounter {
  std::uint64_t checks = 0;
};

/// Row-major view of the preference columns with max-direction columns
/// negated, so dominance is uniformly "<= everywhere, < somewhere".
class CanonicalView {
 public:
  CanonicalView(const Dataset& ds, const PreferenceSpec& pref);

  std::size_t rows() const { return rows_; }
  int dims() const { return dims_; }
  const double* row(std::uint32_t r) const { return data_.data() + std::size_t(r) * dims_; }

 private:
  std::size_t rows_ = 0;
  int dims_ = 0;
  std::vector<double> data_;
};

/// One dominance check: u <= t componentwise with at least one strict
/// coordinate. Increments the counter exactly once per call.
bool dominates(const double* u, const double* t, int dims, DominanceCounter& counter);

struct SkylineResult {
  std::vector<std::uint32_t> row_indices;  // sorted
  std::uint64_t dominance_checks = 0;
  double wall_time_seconds = 0.0;
  std::map<std::string, double> phase_timings;
};

enum class SkylineAlgo { bruteforce, bnl, sfs, salsa, bbs, dc };

SkylineAlgo algo_from_name(const std::string& name);
std::string algo_name(SkylineAlgo a);

struct SkylineOptions {
  int bbs_leaf_capacity = 64;
  int bbs_max_dims = 8;
  std::size_t dc_leaf_threshold = 256;
};

/// All algorithms accept an explicit candidate row set; an empty candidate
/// list means "all rows". Returned indices refer to the underlying dataset.
SkylineResult skyline_bruteforce(const CanonicalView& view,
                                 std::span<const std::uint32_t> candidates = {});
SkylineResult skyline_bnl(const CanonicalView& view,
                          std::span<const std::uint32_t> candidates = {});
SkylineResult skyline_sfs(const CanonicalView& view,
                          std::span<const std::uint32_t> candidates = {});
SkylineResult skyline_salsa(const CanonicalView& view,
                            std::span<const std::uint32_t> candidates = {});
SkylineResult skyline_bbs(const CanonicalView& view,
                          std::span<const std::uint32_t> candidates = {},
                          const SkylineOptions& opts = {});
SkylineResult skyline_dc(const CanonicalView& view,
                         std::span<const std::uint32_t> candidates = {},
                         const SkylineOptions& opts = {});

SkylineResult run_skyline(SkylineAlgo algo, const CanonicalView& view,
                          std::span<const std::uint32_t> candidates = {},
                          const SkylineOptions& opts = {});

}  // namespace css

#endif
