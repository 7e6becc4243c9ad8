#include "css/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include <json.hpp>

namespace css {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SkylineResult vanilla(const Dataset& ds, const PreferenceSpec& pref, const CssOptions& opts) {
  CanonicalView view(ds, pref);
  return run_skyline(opts.base_algo, view, {}, opts.skyline);
}

}  // namespace

CssResult css_run(const Dataset& ds, const PreferenceSpec& pref, const GainReport& plan,
                  const CssOptions& opts) {
  if (plan.conditioning_set.empty())
    throw std::invalid_argument("css_run: plan carries no conditioning set");
  if (opts.m < 1) throw std::invalid_argument("css_run: m must be >= 1");

  CssResult result;
  result.gain_report = plan;
  SkylineResult& out = result.skyline;

  auto t0 = Clock::now();
  Partitioning part;
  if (opts.partition_mode == Partitioning::Mode::kmeans && opts.m >= 2 &&
      opts.m <= ds.row_count()) {
    part = kmeans_partition(ds, plan.conditioning_set, opts.m, opts.seed,
                            opts.kmeans_max_iters);
  } else if (opts.partition_mode == Partitioning::Mode::group_by) {
    part = group_by_values(ds, plan.conditioning_set);
  } else {
    // m == 1 (or too few rows): degenerate single group
    part.mode = Partitioning::Mode::kmeans;
    part.conditioning_set = plan.conditioning_set;
    part.requested_m = opts.m;
    std::vector<std::uint32_t> all(ds.row_count());
    for (std::uint32_t r = 0; r < ds.row_count(); ++r) all[r] = r;
    part.groups.push_back(std::move(all));
  }
  result.m_effective = part.group_count();
  out.phase_timings["partition"] = seconds_since(t0);

  CanonicalView view(ds, pref);
  std::uint64_t checks = 0;

  auto t1 = Clock::now();
  std::vector<std::uint32_t> merged;  // union of candidate skylines, group order
  for (const auto& group : part.groups) {
    SkylineResult sr = run_skyline(opts.base_algo, view, group, opts.skyline);
    checks += sr.dominance_checks;
    merged.insert(merged.end(), sr.row_indices.begin(), sr.row_indices.end());
  }
  out.phase_timings["group_skylines"] = seconds_since(t1);

  auto t2 = Clock::now();
  std::sort(merged.begin(), merged.end());
  out.phase_timings["merge"] = seconds_since(t2);

  auto t3 = Clock::now();
  SkylineResult final_pass = run_skyline(opts.base_algo, view, merged, opts.skyline);
  checks += final_pass.dominance_checks;
  out.phase_timings["final"] = seconds_since(t3);

  out.row_indices = std::move(final_pass.row_indices);
  out.dominance_checks = checks;
  out.wall_time_seconds = seconds_since(t0);
  return result;
}

CssResult adaptive_run(const Dataset& ds, const PreferenceSpec& pref, const CausalGraph* g,
                       const SelectOptions& select, const CssOptions& opts) {
  GainReport plan = select_conditioning_set(
      select.strategy == GainStrategy::ddsky ? &ds : nullptr, g, pref, select);
  if (plan.gain > 0.0) {
    CssResult result = css_run(ds, pref, plan, opts);
    result.used_css = true;
    return result;
  }
  CssResult result;
  result.used_css = false;
  result.gain_report = plan;
  result.m_effective = 1;
  result.skyline = vanilla(ds, pref, opts);
  return result;
}

std::string CssResult::to_json_text() const {
  nlohmann::json j;
  j["final_skyline_size"] = skyline.row_indices.size();
  j["dominance_checks"] = skyline.dominance_checks;
  nlohmann::json timings = nlohmann::json::object();
  for (const auto& [phase, secs] : skyline.phase_timings) timings[phase] = secs;
  j["phase_timings"] = timings;
  j["decision"] = used_css ? "css" : "vanilla";
  if (gain_report) j["gain_report"] = nlohmann::json::parse(gain_report->to_json_text());
  j["m_effective"] = m_effective;
  return j.dump(2);
}

}  // namespace css
