#include "css/bench.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "css/csv.hpp"
#include "css/sem.hpp"

namespace css {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

const std::set<std::string> kAlgos = {"bnl", "sfs", "salsa", "bbs", "dc"};
const std::set<std::string> kStrategies = {"vanilla",  "ddsky",    "gnsky",
                                           "lnsky",    "analytic", "pref_decorr"};

}  // namespace

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw std::invalid_argument("config: no algorithms");
  if (strategies.empty()) throw std::invalid_argument("config: no strategies");
  for (const auto& a : algorithms)
    if (!kAlgos.count(a)) throw std::invalid_argument("config: unknown algorithm '" + a + "'");
  for (const auto& s : strategies)
    if (!kStrategies.count(s))
      throw std::invalid_argument("config: unknown strategy '" + s + "'");
  for (const auto& [lo, lb] : lambda_pairs)
    if (!(lb < lo)) throw std::invalid_argument("config: lambda_b must be below lambda_o");
  if (preferences.empty()) throw std::invalid_argument("config: missing preferences");
  if (data_csv.empty() && graph_path.empty())
    throw std::invalid_argument("config: need a data csv or a graph for synthetic data");
  if (repetitions < 1) throw std::invalid_argument("config: repetitions must be >= 1");
  for (const auto& f : formats)
    if (f != "csv" && f != "json")
      throw std::invalid_argument("config: unknown format '" + f + "'");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig cfg;
  cfg.version = j.value("version", 1);
  cfg.data_csv = j.value("data_csv", "");
  cfg.graph_path = j.value("graph", "");
  cfg.preferences = j.value("preferences", "");
  cfg.algorithms = j.value("algorithms", std::vector<std::string>{});
  cfg.strategies = j.value("strategies", std::vector<std::string>{});
  cfg.n_values = j.value("n_values", std::vector<std::size_t>{});
  cfg.m_values = j.value("m_values", std::vector<std::size_t>{10});
  if (j.contains("lambda_pairs")) {
    cfg.lambda_pairs.clear();
    for (const auto& jp : j["lambda_pairs"])
      cfg.lambda_pairs.emplace_back(jp.at(0).get<double>(), jp.at(1).get<double>());
  }
  cfg.repetitions = j.value("repetitions", 1);
  cfg.seed = j.value("seed", std::uint64_t(7));
  cfg.augment_sigma = j.value("augment_sigma", 0.05);
  cfg.max_subset_size = j.value("max_subset_size", 0);
  cfg.out_dir = j.value("out_dir", ".");
  cfg.formats = j.value("formats", std::vector<std::string>{"csv"});
  cfg.omit_timings = j.value("omit_timings", false);
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

namespace {

Dataset materialize_data(const ExperimentConfig& cfg, const CausalGraph* g, std::size_t n) {
  if (!cfg.data_csv.empty()) {
    Dataset base = load_csv(cfg.data_csv);
    if (n == 0 || n == base.row_count()) return base;
    if (n < base.row_count())
      throw std::invalid_argument("config: n below the CSV row count");
    return augment_gaussian(base, n, cfg.augment_sigma, cfg.seed);
  }
  if (g == nullptr) throw std::invalid_argument("config: synthetic data needs a graph");
  return generate_sem(*g, n == 0 ? 50000 : n, cfg.seed);
}

struct CellSpec {
  std::string algorithm;
  std::string strategy;
  std::size_t n;
  std::size_t m;
  double lo, lb;
};

CellRow run_cell(const ExperimentConfig& cfg, const CellSpec& cell, const Dataset& ds,
                 const CausalGraph* g, const PreferenceSpec& pref, int rep) {
  CellRow row;
  row.algorithm = cell.algorithm;
  row.strategy = cell.strategy;
  row.n = ds.row_count();
  row.pref_dims = pref.attributes.size();
  row.m = cell.m;
  row.lambda_o = cell.lo;
  row.lambda_b = cell.lb;
  row.seed = cfg.seed;
  row.repetition = rep;

  CssOptions opts;
  opts.base_algo = algo_from_name(cell.algorithm);
  opts.m = cell.m;
  opts.seed = cfg.seed;

  auto total_start = Clock::now();
  if (cell.strategy == "vanilla") {
    CanonicalView view(ds, pref);
    SkylineResult sr = run_skyline(opts.base_algo, view, {}, opts.skyline);
    row.skyline_size = sr.row_indices.size();
    row.dominance_checks = sr.dominance_checks;
    row.pipeline_seconds = sr.wall_time_seconds;
    row.decision = "n/a";
  } else if (cell.strategy == "pref_decorr") {
    GainReport plan;
    plan.strategy = "pref_decorr";
    plan.conditioning_set = pref.attributes;
    std::sort(plan.conditioning_set.begin(), plan.conditioning_set.end());
    auto t = Clock::now();
    CssResult res = css_run(ds, pref, plan, opts);
    row.pipeline_seconds = seconds_since(t);
    row.skyline_size = res.skyline.row_indices.size();
    row.dominance_checks = res.skyline.dominance_checks;
    row.decision = "css";
    row.conditioning_set = plan.conditioning_set.empty() ? "" : plan.conditioning_set[0];
    for (std::size_t i = 1; i < plan.conditioning_set.size(); ++i)
      row.conditioning_set += " " + plan.conditioning_set[i];
  } else {
    SelectOptions sel;
    if (cell.strategy == "ddsky") sel.strategy = GainStrategy::ddsky;
    else if (cell.strategy == "gnsky") sel.strategy = GainStrategy::gnsky;
    else if (cell.strategy == "lnsky") sel.strategy = GainStrategy::lnsky;
    else sel.strategy = GainStrategy::analytic;
    sel.lambda_o = cell.lo;
    sel.lambda_b = cell.lb;
    sel.clusters = cell.m;
    sel.seed = cfg.seed;
    sel.max_subset_size = cfg.max_subset_size;

    auto t0 = Clock::now();
    GainReport plan = select_conditioning_set(
        sel.strategy == GainStrategy::ddsky ? &ds : nullptr, g, pref, sel);
    row.step0_seconds = seconds_since(t0);

    auto t1 = Clock::now();
    if (plan.gain > 0.0) {
      CssResult res = css_run(ds, pref, plan, opts);
      row.skyline_size = res.skyline.row_indices.size();
      row.dominance_checks = res.skyline.dominance_checks;
      row.decision = "css";
    } else {
      CanonicalView view(ds, pref);
      SkylineResult sr = run_skyline(opts.base_algo, view, {}, opts.skyline);
      row.skyline_size = sr.row_indices.size();
      row.dominance_checks = sr.dominance_checks;
      row.decision = "vanilla";
    }
    row.pipeline_seconds = seconds_since(t1);
    for (std::size_t i = 0; i < plan.conditioning_set.size(); ++i)
      row.conditioning_set += (i ? " " : "") + plan.conditioning_set[i];
  }
  row.total_seconds = seconds_since(total_start);
  if (cfg.omit_timings) {
    row.step0_seconds = row.pipeline_seconds = row.total_seconds = 0.0;
  }
  return row;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  PreferenceSpec pref = PreferenceSpec::parse(cfg.preferences);

  std::optional<CausalGraph> graph;
  if (!cfg.graph_path.empty()) graph = load_graph(cfg.graph_path);
  const CausalGraph* g = graph ? &*graph : nullptr;

  std::vector<std::size_t> ns = cfg.n_values;
  if (ns.empty()) ns.push_back(cfg.data_csv.empty() ? 50000 : 0);

  ExperimentOutcome outcome;
  for (std::size_t n : ns) {
    Dataset ds = [&]() { return materialize_data(cfg, g, n); }();
    for (const auto& algo : cfg.algorithms) {
      for (const auto& strategy : cfg.strategies) {
        std::vector<std::size_t> ms =
            (strategy == "vanilla") ? std::vector<std::size_t>{0} : cfg.m_values;
        std::vector<std::pair<double, double>> lambdas =
            (strategy == "lnsky") ? cfg.lambda_pairs
                                  : std::vector<std::pair<double, double>>{{0.0, 0.0}};
        for (std::size_t m : ms) {
          for (const auto& [lo, lb] : lambdas) {
            CellSpec cell{algo, strategy, n, m == 0 ? 10 : m, lo, lb};
            if (strategy == "lnsky" && lo == 0.0 && lb == 0.0) continue;
            try {
              // warm once, then timed repetitions
              (void)run_cell(cfg, cell, ds, g, pref, -1);
              for (int rep = 0; rep < cfg.repetitions; ++rep)
                outcome.rows.push_back(run_cell(cfg, cell, ds, g, pref, rep));
            } catch (const std::exception& e) {
              CellRow failed;
              failed.algorithm = algo;
              failed.strategy = strategy;
              failed.n = ds.row_count();
              failed.m = cell.m;
              failed.lambda_o = lo;
              failed.lambda_b = lb;
              failed.seed = cfg.seed;
              failed.error = e.what();
              outcome.rows.push_back(failed);
              ++outcome.failed_cells;
            }
          }
        }
      }
    }
  }
  return outcome;
}

namespace {

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  std::size_t mid = xs.size() / 2;
  return xs.size() % 2 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

std::string csv_header() {
  return "algorithm,strategy,n,pref_dims,m,lambda_o,lambda_b,seed,repetition,"
         "skyline_size,dominance_checks,step0_seconds,pipeline_seconds,total_seconds,"
         "decision,conditioning_set,error";
}

std::string to_csv(const CellRow& r) {
  std::ostringstream os;
  os.precision(9);
  os << r.algorithm << ',' << r.strategy << ',' << r.n << ',' << r.pref_dims << ',' << r.m
     << ',' << r.lambda_o << ',' << r.lambda_b << ',' << r.seed << ',' << r.repetition << ','
     << r.skyline_size << ',' << r.dominance_checks << ',' << r.step0_seconds << ','
     << r.pipeline_seconds << ',' << r.total_seconds << ',' << r.decision << ','
     << r.conditioning_set << ',' << r.error;
  return os.str();
}

nlohmann::json to_json(const CellRow& r) {
  return {{"algorithm", r.algorithm},
          {"strategy", r.strategy},
          {"n", r.n},
          {"pref_dims", r.pref_dims},
          {"m", r.m},
          {"lambda_o", r.lambda_o},
          {"lambda_b", r.lambda_b},
          {"seed", r.seed},
          {"repetition", r.repetition},
          {"skyline_size", r.skyline_size},
          {"dominance_checks", r.dominance_checks},
          {"step0_seconds", r.step0_seconds},
          {"pipeline_seconds", r.pipeline_seconds},
          {"total_seconds", r.total_seconds},
          {"decision", r.decision},
          {"conditioning_set", r.conditioning_set},
          {"error", r.error}};
}

}  // namespace

std::vector<std::string> emit_report(const std::vector<CellRow>& rows,
                                     const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  std::vector<std::string> written;

  // reduction factors vs the matching vanilla cell (same algorithm, n, rep)
  struct Reduction { std::vector<double> checks, times; };
  std::map<std::pair<std::string, std::string>, Reduction> summary;
  auto vanilla_of = [&](const CellRow& r) -> const CellRow* {
    for (const auto& v : rows)
      if (v.strategy == "vanilla" && v.algorithm == r.algorithm && v.n == r.n &&
          v.repetition == r.repetition && v.error.empty())
        return &v;
    return nullptr;
  };
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    const CellRow* v = vanilla_of(r);
    if (!v) continue;
    auto& red = summary[{r.algorithm, r.strategy}];
    if (r.dominance_checks > 0)
      red.checks.push_back(double(v->dominance_checks) / double(r.dominance_checks));
    if (r.total_seconds > 0)
      red.times.push_back(v->total_seconds / r.total_seconds);
  }

  for (const auto& fmt : cfg.formats) {
    if (fmt == "csv") {
      fs::path p = fs::path(cfg.out_dir) / "results.csv";
      std::ofstream out(p);
      if (!out) throw std::runtime_error("report: cannot write '" + p.string() + "'");
      out << csv_header() << '\n';
      for (const auto& r : rows) out << to_csv(r) << '\n';
      written.push_back(p.string());

      fs::path ps = fs::path(cfg.out_dir) / "summary.csv";
      std::ofstream sout(ps);
      sout << "algorithm,strategy,median_check_reduction,median_time_reduction,cells\n";
      sout.precision(9);
      for (const auto& [key, red] : summary)
        sout << key.first << ',' << key.second << ',' << median(red.checks) << ','
             << median(red.times) << ',' << red.checks.size() << '\n';
      written.push_back(ps.string());
    } else {
      fs::path p = fs::path(cfg.out_dir) / "results.json";
      nlohmann::json j = nlohmann::json::array();
      for (const auto& r : rows) j.push_back(to_json(r));
      std::ofstream out(p);
      if (!out) throw std::runtime_error("report: cannot write '" + p.string() + "'");
      out << j.dump(2) << '\n';
      written.push_back(p.string());

      fs::path ps = fs::path(cfg.out_dir) / "summary.json";
      nlohmann::json js = nlohmann::json::array();
      for (const auto& [key, red] : summary)
        js.push_back({{"algorithm", key.first},
                      {"strategy", key.second},
                      {"median_check_reduction", median(red.checks)},
                      {"median_time_reduction", median(red.times)},
                      {"cells", red.checks.size()}});
      std::ofstream sout(ps);
      sout << js.dump(2) << '\n';
      written.push_back(ps.string());
    }
  }
  return written;
}

CausalGraph generate_random_dag(int nodes, double edge_density, std::uint64_t seed) {
  if (nodes < 3) throw std::invalid_argument("generate_random_dag: need at least 3 nodes");
  if (edge_density <= 0.0 || edge_density > 1.0)
    throw std::invalid_argument("generate_random_dag: infeasible density");

  std::mt19937_64 rng(seed);
  std::vector<int> order(nodes);
  for (int i = 0; i < nodes; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::string> names;
  names.reserve(nodes);
  for (int i = 0; i < nodes; ++i) names.push_back("n" + std::to_string(i));

  const double weights[] = {1.0, 0.5, -0.5, -1.0};
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> wpick(0, 3);

  std::set<std::pair<int, int>> picked;
  for (int i = 0; i < nodes; ++i)
    for (int j = i + 1; j < nodes; ++j)
      if (coin(rng) < edge_density) picked.emplace(order[i], order[j]);

  // make sure chain, fork and collider primitives all occur
  picked.emplace(order[0], order[1]);
  picked.emplace(order[1], order[2]);
  picked.emplace(order[0], order[2]);

  std::vector<std::tuple<std::string, std::string, double, double>> edges;
  for (const auto& [s, d] : picked)
    edges.emplace_back(names[s], names[d], weights[wpick(rng)], 1.0);
  return CausalGraph(std::move(names), std::move(edges));
}

std::vector<std::string> generate_graph_suite(const std::vector<int>& node_counts,
                                              double edge_density, std::uint64_t seed,
                                              const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> paths;
  std::uint64_t s = seed;
  for (int n : node_counts) {
    CausalGraph g = generate_random_dag(n, edge_density, s++);
    fs::path p = fs::path(out_dir) / ("graph_" + std::to_string(n) + "nodes_" +
                                      std::to_string(seed) + ".json");
    save_graph(g, p.string());
    paths.push_back(p.string());
  }
  return paths;
}

}  // namespace css
