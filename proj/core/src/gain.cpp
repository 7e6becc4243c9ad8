#include "css/gain.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "css/analytic.hpp"
#include "css/paths.hpp"
#include "css/stats.hpp"

namespace css {

void PreferenceSpec::validate() const {
  if (attributes.empty()) throw std::invalid_argument("preference spec: empty");
  if (attributes.size() != directions.size())
    throw std::invalid_argument("preference spec: attribute/direction mismatch");
  std::set<std::string> seen;
  for (const auto& a : attributes)
    if (!seen.insert(a).second)
      throw std::invalid_argument("preference spec: duplicate attribute '" + a + "'");
}

PreferenceSpec PreferenceSpec::parse(const std::string& text) {
  PreferenceSpec spec;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto colon = item.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("preference spec: expected 'name:min' or 'name:max', got '" +
                                  item + "'");
    std::string name = item.substr(0, colon);
    std::string dir = item.substr(colon + 1);
    if (dir == "min")
      spec.directions.push_back(Direction::min);
    else if (dir == "max")
      spec.directions.push_back(Direction::max);
    else
      throw std::invalid_argument("preference spec: unknown direction '" + dir + "'");
    spec.attributes.push_back(name);
  }
  spec.validate();
  return spec;
}

std::string PreferenceSpec::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (i) out += ",";
    out += attributes[i] + ":" + (directions[i] == Direction::min ? "min" : "max");
  }
  return out;
}

std::string strategy_name(GainStrategy s) {
  switch (s) {
    case GainStrategy::ddsky: return "ddsky";
    case GainStrategy::gnsky: return "gnsky";
    case GainStrategy::lnsky: return "lnsky";
    case GainStrategy::analytic: return "analytic";
  }
  return "?";
}

namespace {

std::string pair_key(const std::string& a, const std::string& b) {
  return a < b ? a + "|" + b : b + "|" + a;
}

// Correlation/path-sign orientation: a (min,max) pair flips sign so that
// positive uniformly means aligned with the preference criteria.
double pair_flip(const PreferenceSpec& pref, std::size_t i, std::size_t j) {
  return pref.directions[i] == pref.directions[j] ? 1.0 : -1.0;
}

struct PrefPair {
  std::size_t i, j;
  double flip;
  std::string key;
};

std::vector<PrefPair> preference_pairs(const PreferenceSpec& pref) {
  std::vector<PrefPair> pairs;
  for (std::size_t i = 0; i < pref.attributes.size(); ++i)
    for (std::size_t j = i + 1; j < pref.attributes.size(); ++j)
      pairs.push_back({i, j, pair_flip(pref, i, j),
                       pair_key(pref.attributes[i], pref.attributes[j])});
  return pairs;
}

double magnitude_factor(const GainOptions& opts, const PreferenceSpec& pref,
                        const PrefPair& pp) {
  if (!opts.correlation_magnitude) return 1.0;
  if (opts.magnitude_dataset == nullptr)
    throw std::invalid_argument("gain: correlation_magnitude requires a dataset");
  CorrelationMatrix cp = correlation_matrix(*opts.magnitude_dataset, pref.attributes);
  return cp.is_defined(int(pp.i), int(pp.j)) ? std::abs(cp.at(int(pp.i), int(pp.j))) : 0.0;
}

}  // namespace

GainReport dd_gain(const Dataset& ds, const PreferenceSpec& pref,
                   std::span<const std::string> z, const Partitioning& grouping) {
  pref.validate();
  for (const auto& a : pref.attributes) (void)ds.attribute_index(a);

  GainReport report;
  report.strategy = "ddsky";
  report.conditioning_set.assign(z.begin(), z.end());
  std::sort(report.conditioning_set.begin(), report.conditioning_set.end());

  const auto pairs = preference_pairs(pref);
  CorrelationMatrix base = correlation_matrix(ds, pref.attributes);

  std::vector<const std::vector<std::uint32_t>*> usable;
  for (const auto& grp : grouping.groups) {
    if (grp.size() < 3) { ++report.skipped_small_groups; continue; }
    usable.push_back(&grp);
  }
  if (usable.empty()) throw std::runtime_error("dd_gain: all groups degenerate (<3 rows)");

  std::map<std::string, double> cond_avg;
  for (const auto& pp : pairs) cond_avg[pp.key] = 0.0;

  for (const auto* grp : usable) {
    CorrelationMatrix cm = correlation_matrix(ds, pref.attributes, *grp);
    for (const auto& pp : pairs) {
      double c = cm.is_defined(int(pp.i), int(pp.j)) ? cm.at(int(pp.i), int(pp.j)) : 0.0;
      cond_avg[pp.key] += pp.flip * c;
    }
  }

  double gain = 0.0;
  for (const auto& pp : pairs) {
    double avg = cond_avg[pp.key] / double(usable.size());
    double before = base.is_defined(int(pp.i), int(pp.j))
                        ? pp.flip * base.at(int(pp.i), int(pp.j))
                        : 0.0;
    PairImpact imp;
    imp.imp_plus = avg;     // conditioned-correlation average, canonical orientation
    imp.imp_minus = before; // unconditioned correlation, same orientation
    report.per_pair[pp.key] = imp;
    gain += avg - before;
  }
  report.gain = gain;
  return report;
}

namespace {

struct FlowDelta {
  double after_plus = 0.0, after_minus = 0.0;
  double before_plus = 0.0, before_minus = 0.0;
};

GainReport path_gain_impl(const CausalGraph& g, const PreferenceSpec& pref,
                          std::span<const std::string> z, bool leaky, bool weighted,
                          double lambda_o, double lambda_b, const GainOptions& opts) {
  pref.validate();
  for (const auto& a : pref.attributes) (void)g.node_id(a);

  GainReport report;
  report.strategy = leaky ? "lnsky" : "gnsky";
  report.conditioning_set.assign(z.begin(), z.end());
  std::sort(report.conditioning_set.begin(), report.conditioning_set.end());
  if (leaky) report.lambda = {lambda_o, lambda_b};

  std::set<int> z_ids;
  std::set<std::string> z_names(z.begin(), z.end());
  for (const auto& name : z) z_ids.insert(g.node_id(name));
  const std::set<int> empty_z;

  double gain = 0.0;
  for (const auto& pp : preference_pairs(pref)) {
    const std::string& ai = pref.attributes[pp.i];
    const std::string& aj = pref.attributes[pp.j];
    if (z_names.count(ai) || z_names.count(aj)) {
      PairImpact imp;
      imp.skipped = true;  // conditioning a scored endpoint contributes nothing
      report.per_pair[pp.key] = imp;
      continue;
    }
    FlowDelta flow;
    for (const auto& p : enumerate_paths(g, ai, aj)) {
      PathStatus st0 = path_status(p, empty_z, g);
      PathStatus stz = path_status(p, z_ids, g);
      if (leaky) {
        if (st0.state == PathState::open) {
          double w = std::abs(leaky_weight(p, st0, g, lambda_o, lambda_b));
          (st0.sign * pp.flip > 0 ? flow.before_plus : flow.before_minus) += w;
        }
        if (stz.state != PathState::blocked_by_collider &&
            colliders_all_activated(p, z_ids, g)) {
          double w = std::abs(leaky_weight(p, stz, g, lambda_o, lambda_b));
          (stz.sign * pp.flip > 0 ? flow.after_plus : flow.after_minus) += w;
        }
      } else {
        double w = weighted ? std::abs(causal_weight(p, g)) : 1.0;
        if (st0.state == PathState::open)
          (st0.sign * pp.flip > 0 ? flow.before_plus : flow.before_minus) += w;
        if (stz.state == PathState::open || stz.state == PathState::provisionally_open)
          (stz.sign * pp.flip > 0 ? flow.after_plus : flow.after_minus) += w;
      }
    }
    PairImpact imp;
    imp.imp_plus = flow.after_plus - flow.before_plus;
    imp.imp_minus = flow.after_minus - flow.before_minus;
    report.per_pair[pp.key] = imp;
    gain += (imp.imp_plus - imp.imp_minus) * magnitude_factor(opts, pref, pp);
  }
  report.gain = gain;
  return report;
}

}  // namespace

GainReport gn_gain(const CausalGraph& g, const PreferenceSpec& pref,
                   std::span<const std::string> z, bool weighted, const GainOptions& opts) {
  return path_gain_impl(g, pref, z, /*leaky=*/false, weighted, 1.0, 0.0, opts);
}

GainReport ln_gain(const CausalGraph& g, const PreferenceSpec& pref,
                   std::span<const std::string> z, double lambda_o, double lambda_b,
                   const GainOptions& opts) {
  if (!(lambda_b > 0.0 && lambda_b < lambda_o && lambda_o <= 1.0))
    throw std::invalid_argument("ln_gain: requires 0 < lambda_b < lambda_o <= 1");
  return path_gain_impl(g, pref, z, /*leaky=*/true, true, lambda_o, lambda_b, opts);
}

namespace {

double analytic_score(const CausalGraph& g, const PreferenceSpec& pref,
                      const std::set<std::string>& z_names, int clusters) {
  std::set<int> z_ids;
  for (const auto& name : z_names) z_ids.insert(g.node_id(name));
  double score = 0.0;
  for (const auto& pp : preference_pairs(pref)) {
    const std::string& ai = pref.attributes[pp.i];
    const std::string& aj = pref.attributes[pp.j];
    if (z_names.count(ai) || z_names.count(aj)) continue;
    for (const auto& p : enumerate_paths(g, ai, aj)) {
      std::vector<int> cond_positions;
      for (std::size_t k = 1; k + 1 < p.nodes.size(); ++k)
        if (z_ids.count(p.nodes[k])) cond_positions.push_back(int(k));
      if (cond_positions.empty()) continue;
      PathModel pm = path_model(g, p);
      score += pp.flip * analytic_c_gain(pm, cond_positions, clusters);
    }
  }
  return score;
}

GainReport score_subset(const Dataset* ds, const CausalGraph* g, const PreferenceSpec& pref,
                        const std::vector<std::string>& z, const SelectOptions& opts) {
  switch (opts.strategy) {
    case GainStrategy::ddsky: {
      std::size_t m = std::min(opts.clusters, std::max<std::size_t>(2, ds->row_count()));
      Partitioning part = kmeans_partition(*ds, z, m, opts.seed);
      return dd_gain(*ds, pref, z, part);
    }
    case GainStrategy::gnsky:
      return gn_gain(*g, pref, z, opts.weighted, opts.gain);
    case GainStrategy::lnsky:
      return ln_gain(*g, pref, z, opts.lambda_o, opts.lambda_b, opts.gain);
    case GainStrategy::analytic: {
      GainReport r;
      r.strategy = "analytic";
      r.conditioning_set = z;
      std::sort(r.conditioning_set.begin(), r.conditioning_set.end());
      r.cluster_count = int(opts.clusters);
      r.gain = analytic_score(*g, pref, std::set<std::string>(z.begin(), z.end()),
                              int(opts.clusters));
      return r;
    }
  }
  throw std::logic_error("unknown strategy");
}

}  // namespace

GainReport select_conditioning_set(const Dataset* ds, const CausalGraph* g,
                                   const PreferenceSpec& pref, const SelectOptions& opts) {
  pref.validate();
  const bool needs_data = opts.strategy == GainStrategy::ddsky;
  if (needs_data && ds == nullptr)
    throw std::invalid_argument("select_conditioning_set: ddsky requires a dataset");
  if (!needs_data && g == nullptr)
    throw std::invalid_argument("select_conditioning_set: strategy requires a causal graph");

  std::vector<std::string> universe =
      needs_data ? ds->attribute_names() : g->node_names();
  std::sort(universe.begin(), universe.end());
  if (opts.exclude_preference_attrs) {
    std::set<std::string> p(pref.attributes.begin(), pref.attributes.end());
    std::erase_if(universe, [&](const std::string& a) { return p.count(a) > 0; });
  }
  if (universe.size() > 24)
    throw std::invalid_argument("select_conditioning_set: attribute universe too large "
                                "for exhaustive enumeration");
  if (universe.empty()) throw std::runtime_error("select_conditioning_set: no valid subset");

  const std::size_t cap =
      opts.max_subset_size > 0 ? std::size_t(opts.max_subset_size) : universe.size();

  std::optional<GainReport> best;
  std::uint32_t full = (std::uint32_t(1) << universe.size()) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (std::size_t(__builtin_popcount(mask)) > cap) continue;
    std::vector<std::string> z;
    for (std::size_t b = 0; b < universe.size(); ++b)
      if (mask & (std::uint32_t(1) << b)) z.push_back(universe[b]);
    GainReport r = score_subset(ds, g, pref, z, opts);
    if (!best || r.gain > best->gain ||
        (r.gain == best->gain &&
         (r.conditioning_set.size() < best->conditioning_set.size() ||
          (r.conditioning_set.size() == best->conditioning_set.size() &&
           r.conditioning_set < best->conditioning_set)))) {
      best = std::move(r);
    }
  }
  if (!best) throw std::runtime_error("select_conditioning_set: no valid subset");

  best->beats_zero = best->gain > 0.0;
  // Gain of conditioning the preference set itself, for the adaptive regimes.
  double pref_gain = 0.0;
  try {
    std::vector<std::string> zp = pref.attributes;
    std::sort(zp.begin(), zp.end());
    pref_gain = score_subset(ds, g, pref, zp, opts).gain;
  } catch (const std::exception&) {
    pref_gain = 0.0;  // preference set not scoreable (e.g. not all in universe)
  }
  best->beats_preference_set = best->gain > pref_gain;
  return *best;
}

std::string GainReport::to_json_text() const {
  nlohmann::json j;
  j["strategy"] = strategy;
  j["Z"] = conditioning_set;
  j["gain"] = gain;
  nlohmann::json per;
  for (const auto& [key, imp] : per_pair) {
    per[key] = {{"imp_plus", imp.imp_plus}, {"imp_minus", imp.imp_minus},
                {"skipped", imp.skipped}};
  }
  j["per_pair"] = per;
  nlohmann::json params = nlohmann::json::object();
  if (lambda) params["lambda"] = {lambda->first, lambda->second};
  if (cluster_count) params["clusters"] = *cluster_count;
  j["params"] = params;
  j["beats_zero"] = beats_zero;
  j["beats_preference_set"] = beats_preference_set;
  if (skipped_small_groups > 0) j["skipped_small_groups"] = skipped_small_groups;
  return j.dump(2);
}

}  // namespace css
