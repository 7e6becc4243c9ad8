#include "css/skyline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "css/rtree.hpp"

namespace css {

CanonicalView::CanonicalView(const Dataset& ds, const PreferenceSpec& pref) {
  pref.validate();
  rows_ = ds.row_count();
  dims_ = int(pref.attributes.size());
  data_.resize(rows_ * std::size_t(dims_));
  for (int d = 0; d < dims_; ++d) {
    const auto& col = ds.column(pref.attributes[d]);
    const double sign = pref.directions[d] == Direction::max ? -1.0 : 1.0;
    for (std::size_t r = 0; r < rows_; ++r) data_[r * dims_ + d] = sign * col[r];
  }
}

bool dominates(const double* u, const double* t, int dims, DominanceCounter& counter) {
  ++counter.checks;
  bool strict = false;
  for (int d = 0; d < dims; ++d) {
    if (u[d] > t[d]) return false;
    if (u[d] < t[d]) strict = true;
  }
  return strict;
}

SkylineAlgo algo_from_name(const std::string& name) {
  if (name == "bruteforce") return SkylineAlgo::bruteforce;
  if (name == "bnl") return SkylineAlgo::bnl;
  if (name == "sfs") return SkylineAlgo::sfs;
  if (name == "salsa") return SkylineAlgo::salsa;
  if (name == "bbs") return SkylineAlgo::bbs;
  if (name == "dc") return SkylineAlgo::dc;
  throw std::invalid_argument("unknown skyline algorithm '" + name + "'");
}

std::string algo_name(SkylineAlgo a) {
  switch (a) {
    case SkylineAlgo::bruteforce: return "bruteforce";
    case SkylineAlgo::bnl: return "bnl";
    case SkylineAlgo::sfs: return "sfs";
    case SkylineAlgo::salsa: return "salsa";
    case SkylineAlgo::bbs: return "bbs";
    case SkylineAlgo::dc: return "dc";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::uint32_t> materialize(const CanonicalView& view,
                                       std::span<const std::uint32_t> candidates) {
  if (!candidates.empty() || view.rows() == 0)
    return {candidates.begin(), candidates.end()};
  std::vector<std::uint32_t> all(view.rows());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

SkylineResult finish(std::vector<std::uint32_t> rows, DominanceCounter counter,
                     Clock::time_point start) {
  SkylineResult res;
  std::sort(rows.begin(), rows.end());
  res.row_indices = std::move(rows);
  res.dominance_checks = counter.checks;
  res.wall_time_seconds = seconds_since(start);
  return res;
}

}  // namespace

SkylineResult skyline_bruteforce(const CanonicalView& view,
                                 std::span<const std::uint32_t> candidates) {
  auto start = Clock::now();
  auto ids = materialize(view, candidates);
  const int d = view.dims();
  DominanceCounter counter;
  std::vector<std::uint32_t> sky;
  for (std::uint32_t t : ids) {
    bool dominated = false;
    for (std::uint32_t u : ids) {
      if (u == t) continue;
      if (dominates(view.row(u), view.row(t), d, counter)) { dominated = true; break; }
    }
    if (!dominated) sky.push_back(t);
  }
  return finish(std::move(sky), counter, start);
}

SkylineResult skyline_bnl(const CanonicalView& view,
                          std::span<const std::uint32_t> candidates) {
  auto start = Clock::now();
  auto ids = materialize(view, candidates);
  const int d = view.dims();
  DominanceCounter counter;
  std::vector<std::uint32_t> window;
  for (std::uint32_t t : ids) {
    // single pass: discard t on the first dominating window tuple, evict
    // window tuples t dominates. A window tuple dominating t rules out any
    // earlier eviction (the window is mutually non-dominating), so keeping
    // the remainder verbatim is exact.
    bool dominated = false;
    std::size_t keep = 0;
    for (std::size_t i = 0; i < window.size(); ++i) {
      if (dominates(view.row(window[i]), view.row(t), d, counter)) {
        dominated = true;
        for (; i < window.size(); ++i) window[keep++] = window[i];
        break;
      }
      if (!dominates(view.row(t), view.row(window[i]), d, counter))
        window[keep++] = window[i];
    }
    window.resize(keep);
    if (!dominated) window.push_back(t);
  }
  return finish(std::move(window), counter, start);
}

namespace {

// Stable sort by a scalar key, ties by original position (deterministic).
std::vector<std::uint32_t> sorted_by_key(const std::vector<std::uint32_t>& ids,
                                         const std::vector<double>& key) {
  std::vector<std::uint32_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return key[a] < key[b]; });
  std::vector<std::uint32_t> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) out[i] = ids[order[i]];
  return out;
}

}  // namespace

SkylineResult skyline_sfs(const CanonicalView& view,
                          std::span<const std::uint32_t> candidates) {
  auto start = Clock::now();
  auto ids = materialize(view, candidates);
  const int d = view.dims();
  std::vector<double> key(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const double* r = view.row(ids[i]);
    key[i] = std::accumulate(r, r + d, 0.0);
  }
  auto order = sorted_by_key(ids, key);

  DominanceCounter counter;
  std::vector<std::uint32_t> window;
  // monotone <sum> presort: only earlier tuples can dominate, so window
  // membership is final
  for (std::uint32_t t : order) {
    bool dominated = false;
    for (std::uint32_t w : window)
      if (dominates(view.row(w), view.row(t), d, counter)) { dominated = true; break; }
    if (!dominated) window.push_back(t);
  }
  return finish(std::move(window), counter, start);
}

SkylineResult skyline_salsa(const CanonicalView& view,
                            std::span<const std::uint32_t> candidates) {
  auto start = Clock::now();
  auto ids = materialize(view, candidates);
  const int d = view.dims();

  // sort key: min coordinate, ties by sum (min-view rendering of <max,sum>)
  std::vector<double> minc(ids.size()), sum(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const double* r = view.row(ids[i]);
    double mn = r[0], s = 0.0;
    for (int k = 0; k < d; ++k) { mn = std::min(mn, r[k]); s += r[k]; }
    minc[i] = mn;
    sum[i] = s;
  }
  std::vector<std::uint32_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (minc[a] != minc[b]) return minc[a] < minc[b];
    return sum[a] < sum[b];
  });

  DominanceCounter counter;
  std::vector<std::uint32_t> window;
  double stop_value = std::numeric_limits<double>::max();  // max-coordinate of p_stop
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::uint32_t t = ids[order[i]];
    // p_stop dominates every unread tuple once its max coordinate is strictly
    // below the next sort key (strict: equal coordinates are incomparable)
    if (stop_value < minc[order[i]]) break;
    bool dominated = false;
    for (std::uint32_t w : window)
      if (dominates(view.row(w), view.row(t), d, counter)) { dominated = true; break; }
    if (dominated) continue;
    window.push_back(t);
    const double* r = view.row(t);
    double mx = r[0];
    for (int k = 1; k < d; ++k) mx = std::max(mx, r[k]);
    stop_value = std::min(stop_value, mx);
  }
  return finish(std::move(window), counter, start);
}

SkylineResult skyline_bbs(const CanonicalView& view,
                          std::span<const std::uint32_t> candidates,
                          const SkylineOptions& opts) {
  auto start = Clock::now();
  auto ids = materialize(view, candidates);
  const int d = view.dims();
  if (d > opts.bbs_max_dims)
    throw std::invalid_argument("bbs: dimensionality exceeds the configured R-tree maximum");

  DominanceCounter counter;
  std::vector<std::uint32_t> sky;
  if (!ids.empty()) {
    StrRTree tree(view.row(0), std::size_t(d), ids, d, opts.bbs_leaf_capacity);

    struct Entry {
      double mindist;
      std::uint64_t seq;  // deterministic tie-break
      int node;           // -1 for a point entry
      std::uint32_t point;
    };
    auto cmp = [](const Entry& a, const Entry& b) {
      if (a.mindist != b.mindist) return a.mindist > b.mindist;
      return a.seq > b.seq;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
    std::uint64_t seq = 0;

    auto corner_dominated = [&](const double* corner) {
      for (std::uint32_t s : sky)
        if (dominates(view.row(s), corner, d, counter)) return true;
      return false;
    };

    const auto& root = tree.node(tree.root());
    heap.push({std::accumulate(root.lower.begin(), root.lower.end(), 0.0), seq++,
               tree.root(), 0});
    while (!heap.empty()) {
      Entry e = heap.top();
      heap.pop();
      if (e.node < 0) {
        if (!corner_dominated(view.row(e.point))) sky.push_back(e.point);
        continue;
      }
      const auto& node = tree.node(e.node);
      if (corner_dominated(node.lower.data())) continue;  // prune whole subtree
      if (node.is_leaf()) {
        for (std::uint32_t p : node.points) {
          const double* r = view.row(p);
          heap.push({std::accumulate(r, r + d, 0.0), seq++, -1, p});
        }
      } else {
        for (int child : node.children) {
          const auto& c = tree.node(child);
          heap.push({std::accumulate(c.lower.begin(), c.lower.end(), 0.0), seq++, child, 0});
        }
      }
    }
  }
  return finish(std::move(sky), counter, start);
}

namespace {

void dc_recurse(const CanonicalView& view, std::vector<std::uint32_t>& ids, std::size_t lo,
                std::size_t hi, int depth, const SkylineOptions& opts,
                DominanceCounter& counter, std::vector<std::uint32_t>& out) {
  const int d = view.dims();
  const std::size_t n = hi - lo;
  if (n == 0) return;
  if (n <= opts.dc_leaf_threshold) {
    for (std::size_t i = lo; i < hi; ++i) {
      bool dominated = false;
      for (std::size_t j = lo; j < hi; ++j) {
        if (i == j) continue;
        if (dominates(view.row(ids[j]), view.row(ids[i]), d, counter)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) out.push_back(ids[i]);
    }
    return;
  }

  // median split on the round-robin dimension; (value, id) is a total order,
  // so the halves always shrink, and partition-merge soundness holds for any
  // partition (duplicates included)
  std::size_t mid = lo + n / 2;
  int dim = depth % d;
  std::nth_element(ids.begin() + lo, ids.begin() + mid, ids.begin() + hi,
                   [&](std::uint32_t a, std::uint32_t b) {
                     if (view.row(a)[dim] != view.row(b)[dim])
                       return view.row(a)[dim] < view.row(b)[dim];
                     return a < b;
                   });

  std::vector<std::uint32_t> left_sky, right_sky;
  dc_recurse(view, ids, lo, mid, depth + 1, opts, counter, left_sky);
  dc_recurse(view, ids, mid, hi, depth + 1, opts, counter, right_sky);

  // cross-merge: drop tuples dominated by the other side
  const int dd = view.dims();
  std::vector<std::uint32_t> merged;
  for (std::uint32_t t : left_sky) {
    bool dominated = false;
    for (std::uint32_t u : right_sky)
      if (dominates(view.row(u), view.row(t), dd, counter)) { dominated = true; break; }
    if (!dominated) merged.push_back(t);
  }
  for (std::uint32_t t : right_sky) {
    bool dominated = false;
    for (std::uint32_t u : left_sky)
      if (dominates(view.row(u), view.row(t), dd, counter)) { dominated = true; break; }
    if (!dominated) merged.push_back(t);
  }
  out.insert(out.end(), merged.begin(), merged.end());
}

}  // namespace

SkylineResult skyline_dc(const CanonicalView& view, std::span<const std::uint32_t> candidates,
                         const SkylineOptions& opts) {
  auto start = Clock::now();
  auto ids = materialize(view, candidates);
  DominanceCounter counter;
  std::vector<std::uint32_t> sky;
  dc_recurse(view, ids, 0, ids.size(), 0, opts, counter, sky);
  return finish(std::move(sky), counter, start);
}

SkylineResult run_skyline(SkylineAlgo algo, const CanonicalView& view,
                          std::span<const std::uint32_t> candidates,
                          const SkylineOptions& opts) {
  switch (algo) {
    case SkylineAlgo::bruteforce: return skyline_bruteforce(view, candidates);
    case SkylineAlgo::bnl: return skyline_bnl(view, candidates);
    case SkylineAlgo::sfs: return skyline_sfs(view, candidates);
    case SkylineAlgo::salsa: return skyline_salsa(view, candidates);
    case SkylineAlgo::bbs: return skyline_bbs(view, candidates, opts);
    case SkylineAlgo::dc: return skyline_dc(view, candidates, opts);
  }
  throw std::logic_error("unknown algorithm");
}

}  // namespace css
