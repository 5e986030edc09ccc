// Batch front door: ingest CSV panels, read a JSON config, run the
// simulate / optimize / backtest / stability / policy-search pipelines, and
// emit report artifacts. Outputs are byte-identical for identical
// (config, seed).

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "clustermc/backtest.hpp"
#include "clustermc/dgp.hpp"
#include "clustermc/errors.hpp"
#include "clustermc/io.hpp"
#include "clustermc/policy.hpp"
#include "clustermc/rng.hpp"
#include "clustermc/stability.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

json default_config() {
  return json{
      {"seed", 42},
      {"region", {{"lower", 0.0}, {"upper", 1.0}}},
      {"objective",
       {{"kind", "mean_variance"},  // mean_variance | mvsk | crra
        {"lambda", 1.0},
        {"crra_gamma", 3.0},
        {"crra_form", "paper"},  // paper | standard
        {"window", 252}}},
      {"optimizer",
       {{"m", 100000},
        {"k", 0},  // 0: floor(sqrt(survivors)) capped at 64
        {"max_levels", 12},
        {"diameter_tol", 1e-4},
        {"improvement_tol", 1e-10},
        {"center_repair", "complete_then_nearest"},  // complete_then_nearest | nearest_member
        {"replenish_floor", 10},
        {"kmeans_max_iter", 50},
        {"kmeans_tol", 1e-10},
        {"acceptance_floor", 1e-6},
        {"floor_check_after", 10000000}}},
      {"partition",
       {{"method", "none"},  // none | score | kmeans
        {"buckets", 1}}},
      {"backtest",
       {{"rebalance_every", 5},
        {"lookback", 252},
        {"periods_per_year", 252},
        {"benchmark", ""}}},
      {"dgp",
       {{"n", 100},
        {"periods", 250},
        {"noise_amplitude", 0.0015},
        {"return_scale", 0.02},
        {"burn_in", 500},
        {"oracle_draws", 4096},
        {"forecast", "oracle"}}},  // oracle | historical
      {"stability", {{"m_list", json::array({2000, 8000, 32000})}, {"benchmark_m", 64000}}},
      {"policy",
       {{"mdp", "two_state_chain"},  // two_state_chain | single_state
        {"cells", 2},
        {"rollouts", 128},
        {"horizon", 0},
        {"discount", 0.9},
        {"intercept_bound", 1.0},
        {"slope_bound", 1.0},
        {"good_reward", 1.0},
        {"bad_reward", 0.0},
        {"p_good_high", 0.9},
        {"p_good_low", 0.1}}},
      {"input", {{"path", ""}, {"price_column", "price"}}},
  };
}

void reject_unknown_keys(const json& user, const json& defaults, const std::string& prefix) {
  for (const auto& [key, value] : user.items()) {
    if (!defaults.contains(key)) {
      throw clustermc::Error("ConfigError", "unknown config key '" + prefix + key + "'");
    }
    if (value.is_object() && defaults[key].is_object()) {
      reject_unknown_keys(value, defaults[key], prefix + key + ".");
    }
  }
}

json load_config(const std::string& path) {
  json config = default_config();
  if (path.empty()) return config;
  std::ifstream in(path);
  if (!in) {
    throw clustermc::Error("ConfigError", "cannot open config '" + path + "'");
  }
  json user;
  try {
    in >> user;
  } catch (const json::exception& e) {
    throw clustermc::Error("ConfigError", std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown_keys(user, config, "");
  config.merge_patch(user);
  return config;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

// --- config -> module structs -------------------------------------------

clustermc::ObjectiveSpec objective_from(const json& config) {
  const json& o = config["objective"];
  const std::string kind = o["kind"];
  clustermc::ObjectiveSpec spec;
  if (kind == "mean_variance") {
    spec = clustermc::ObjectiveSpec::mean_variance(o["lambda"], o["window"]);
  } else if (kind == "mvsk") {
    spec = clustermc::ObjectiveSpec::mvsk(o["window"]);
  } else if (kind == "crra") {
    const clustermc::CrraForm form = o["crra_form"] == "standard"
                                         ? clustermc::CrraForm::kStandard
                                         : clustermc::CrraForm::kPaper;
    spec = clustermc::ObjectiveSpec::crra(o["crra_gamma"], form, o["window"]);
  } else {
    throw clustermc::Error("ConfigError", "unknown objective kind '" + kind + "'");
  }
  spec.validate();
  return spec;
}

clustermc::OptimizerConfig optimizer_from(const json& config) {
  const json& o = config["optimizer"];
  clustermc::OptimizerConfig out;
  out.m = o["m"];
  out.k = o["k"];
  out.max_levels = o["max_levels"];
  out.diameter_tol = o["diameter_tol"];
  out.improvement_tol = o["improvement_tol"];
  out.center_repair = o["center_repair"] == "nearest_member"
                          ? clustermc::CenterRepair::kNearestMember
                          : clustermc::CenterRepair::kCompleteThenNearest;
  out.replenish_floor = o["replenish_floor"];
  out.kmeans_max_iter = o["kmeans_max_iter"];
  out.kmeans_tol = o["kmeans_tol"];
  out.sampler.acceptance_floor = o["acceptance_floor"];
  out.sampler.floor_check_after = o["floor_check_after"];
  out.seed = config["seed"].get<std::uint64_t>();
  out.validate();
  return out;
}

clustermc::PartitionSpec partition_from(const json& config) {
  const json& p = config["partition"];
  clustermc::PartitionSpec spec;
  const std::string method = p["method"];
  if (method == "none") {
    spec.method = clustermc::PartitionSpec::Method::kNone;
  } else if (method == "score") {
    spec.method = clustermc::PartitionSpec::Method::kScore;
  } else if (method == "kmeans") {
    spec.method = clustermc::PartitionSpec::Method::kKmeans;
  } else {
    throw clustermc::Error("ConfigError", "unknown partition method '" + method + "'");
  }
  spec.buckets = p["buckets"];
  return spec;
}

clustermc::BacktestConfig backtest_from(const json& config) {
  const json& b = config["backtest"];
  clustermc::BacktestConfig out;
  out.rebalance_every = b["rebalance_every"];
  out.lookback = b["lookback"];
  out.periods_per_year = b["periods_per_year"];
  out.benchmark = b["benchmark"];
  out.validate();
  return out;
}

clustermc::BoxTemplate box_from(const json& config) {
  return {config["region"]["lower"], config["region"]["upper"]};
}

// --- artifact writers -----------------------------------------------------

json metrics_json(const clustermc::MetricsReport& report) {
  auto finite_or_null = [](double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
  };
  return json{{"ann_return", report.ann_return}, {"ann_vol", report.ann_vol},
              {"ir", report.ir},                 {"sortino", finite_or_null(report.sortino)},
              {"mdd", report.mdd},               {"calmar", finite_or_null(report.calmar)},
              {"risk_free_rate", 0.0}};
}

void write_json(const fs::path& path, const json& value) {
  std::ofstream out(path);
  if (!out) {
    throw clustermc::Error("IoError", "cannot open '" + path.string() + "' for writing");
  }
  out << value.dump(2) << "\n";
}

void write_manifest(const fs::path& out_dir, const std::string& command, const json& config,
                    std::vector<std::string> outputs) {
  std::sort(outputs.begin(), outputs.end());
  const json manifest{{"command", command},
                      {"config_hash", fnv1a_hex(config.dump())},
                      {"seed", config["seed"]},
                      {"version", kVersion},
                      {"outputs", outputs}};
  write_json(out_dir / "manifest.json", manifest);
}

// --- commands ---------------------------------------------------------------

struct SimulatedRun {
  clustermc::DgpParams params;
  clustermc::SimulatedWorld world;
  clustermc::ForecastFn forecast;
};

SimulatedRun build_simulated_world(const json& config) {
  const json& d = config["dgp"];
  const std::uint64_t seed = config["seed"].get<std::uint64_t>();

  SimulatedRun run;
  run.params = clustermc::generate_params(d["n"], clustermc::mix_seed(seed, 1));
  // Warm-up history ahead of the scored periods so the whole configured
  // horizon is traded out of sample.
  run.params.periods = d["periods"].get<int>() + config["backtest"]["lookback"].get<int>();
  run.params.noise_amplitude = d["noise_amplitude"];
  run.params.return_scale = d["return_scale"];
  run.params.burn_in = d["burn_in"];
  run.world = clustermc::simulate(run.params, clustermc::mix_seed(seed, 2));

  if (d["forecast"] == "oracle") {
    const int draws = d["oracle_draws"];
    const auto* params = &run.params;
    const auto* world = &run.world;
    run.forecast = [params, world, draws, seed](int t) {
      return clustermc::oracle_expected_return(
          *params, world->factors.values[0].row(t).transpose(),
          world->sigma2.row(t).transpose(), draws,
          clustermc::mix_seed(seed, 0xF000 + static_cast<std::uint64_t>(t)));
    };
  }
  return run;
}

int cmd_simulate(const json& config, const fs::path& out_dir) {
  SimulatedRun run = build_simulated_world(config);
  const clustermc::ObjectiveSpec objective = objective_from(config);
  const clustermc::BacktestConfig bt = backtest_from(config);

  const clustermc::BacktestResult result =
      clustermc::run_backtest(run.world.returns, &run.world.factors, objective,
                              partition_from(config), optimizer_from(config), bt, run.forecast,
                              box_from(config));

  clustermc::write_panel_csv((out_dir / "panel.csv").string(), run.world.returns,
                             &run.world.factors);
  clustermc::write_equity_csv((out_dir / "equity.csv").string(), result.curve);
  clustermc::write_weights_csv((out_dir / "weights.csv").string(), result.weights,
                               run.world.returns.assets);
  write_json(out_dir / "metrics.json",
             metrics_json(clustermc::compute_metrics(result.curve, bt.periods_per_year)));
  write_manifest(out_dir, "simulate", config,
                 {"panel.csv", "equity.csv", "weights.csv", "metrics.json"});
  return 0;
}

int cmd_optimize(const json& config, const fs::path& out_dir) {
  const clustermc::IngestResult data =
      clustermc::ingest_prices(config["input"]["path"], config["input"]["price_column"]);
  const clustermc::ObjectiveSpec objective = objective_from(config);
  const clustermc::OptimizerConfig optimizer_config = optimizer_from(config);
  const clustermc::PartitionSpec partition = partition_from(config);
  const clustermc::BoxTemplate box = box_from(config);
  const int last = data.panel.periods() - 1;

  Eigen::VectorXd weights;
  std::int64_t evaluations = 0;
  double score = 0.0;
  if (partition.method == clustermc::PartitionSpec::Method::kNone) {
    const clustermc::FeasibleRegion region =
        clustermc::budget_region(data.panel.width(), box.lower, box.upper);
    const clustermc::OptimizationResult r = clustermc::optimize(
        region,
        [&](const Eigen::VectorXd& w) { return clustermc::evaluate(objective, data.panel, w); },
        optimizer_config);
    weights = r.best_weights;
    evaluations = r.evaluations;
    score = r.best_score;
  } else {
    clustermc::UniversePartition groups =
        partition.method == clustermc::PartitionSpec::Method::kScore
            ? clustermc::partition_by_score(data.factors, last, partition.buckets)
            : clustermc::partition_by_kmeans(data.factors, last, partition.buckets,
                                             clustermc::mix_seed(optimizer_config.seed, 0xA0));
    const clustermc::BottomUpResult r =
        clustermc::optimize_bottom_up(data.panel, groups, box, objective, optimizer_config);
    weights = r.weights;
    evaluations = r.evaluations;
    score = clustermc::evaluate(objective, data.panel, weights);
  }

  clustermc::write_weights_csv((out_dir / "weights.csv").string(),
                               {{last, data.panel.dates.back(), weights}}, data.panel.assets);
  write_json(out_dir / "metrics.json",
             json{{"objective_score", score},
                  {"evaluations", evaluations},
                  {"dropped_assets", data.dropped_assets}});
  write_manifest(out_dir, "optimize", config, {"weights.csv", "metrics.json"});
  return 0;
}

int cmd_backtest(const json& config, const fs::path& out_dir) {
  const clustermc::IngestResult data =
      clustermc::ingest_prices(config["input"]["path"], config["input"]["price_column"]);
  const clustermc::ObjectiveSpec objective = objective_from(config);
  const clustermc::BacktestConfig bt = backtest_from(config);

  const clustermc::BacktestResult result =
      clustermc::run_backtest(data.panel, &data.factors, objective, partition_from(config),
                              optimizer_from(config), bt, {}, box_from(config));

  std::vector<std::string> outputs = {"equity.csv", "weights.csv", "metrics.json"};
  clustermc::write_equity_csv((out_dir / "equity.csv").string(), result.curve);
  clustermc::write_weights_csv((out_dir / "weights.csv").string(), result.weights,
                               data.panel.assets);
  write_json(out_dir / "metrics.json",
             metrics_json(clustermc::compute_metrics(result.curve, bt.periods_per_year)));

  if (!bt.benchmark.empty()) {
    const auto it =
        std::find(data.panel.assets.begin(), data.panel.assets.end(), bt.benchmark);
    if (it == data.panel.assets.end()) {
      throw clustermc::Error("ConfigError", "benchmark asset '" + bt.benchmark + "' not found");
    }
    const int asset = static_cast<int>(it - data.panel.assets.begin());
    const clustermc::EquityCurve bench = clustermc::asset_curve(
        data.panel, asset, bt.lookback - 1, data.panel.periods() - 1);
    clustermc::write_equity_csv((out_dir / "excess.csv").string(),
                                clustermc::excess_curve(result.curve, bench));
    outputs.push_back("excess.csv");
  }
  write_manifest(out_dir, "backtest", config, outputs);
  return 0;
}

int cmd_stability(const json& config, const fs::path& out_dir) {
  SimulatedRun run = build_simulated_world(config);
  const clustermc::ObjectiveSpec objective = objective_from(config);

  clustermc::BacktestProblem problem;
  problem.panel = &run.world.returns;
  problem.factors = &run.world.factors;
  problem.objective = objective;
  problem.partition = partition_from(config);
  problem.backtest = backtest_from(config);
  problem.forecast = run.forecast;
  problem.box = box_from(config);

  const std::vector<int> m_list = config["stability"]["m_list"].get<std::vector<int>>();
  const std::vector<clustermc::StabilityRow> rows = clustermc::stability_sweep(
      problem, optimizer_from(config), m_list, config["stability"]["benchmark_m"]);

  clustermc::write_stability_csv((out_dir / "stability.csv").string(), rows);
  write_manifest(out_dir, "stability", config, {"stability.csv"});
  return 0;
}

clustermc::Mdp build_mdp(const json& config) {
  const json& p = config["policy"];
  const std::string kind = p["mdp"];

  clustermc::Mdp mdp;
  mdp.state_space = {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)};
  mdp.action_space = {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)};
  mdp.discount = p["discount"];
  mdp.horizon = p["horizon"];

  if (kind == "two_state_chain") {
    const double good_reward = p["good_reward"];
    const double bad_reward = p["bad_reward"];
    const double p_high = p["p_good_high"];
    const double p_low = p["p_good_low"];
    mdp.reward = [good_reward, bad_reward](const Eigen::VectorXd& s) {
      return s(0) >= 0.5 ? good_reward : bad_reward;
    };
    mdp.transition = [p_high, p_low](const Eigen::VectorXd&, const Eigen::VectorXd& a,
                                     clustermc::Rng& rng) {
      const double p_good = a(0) >= 0.5 ? p_high : p_low;
      Eigen::VectorXd next(1);
      next(0) = rng.uniform() < p_good ? 1.0 : 0.0;
      return next;
    };
    mdp.initial_state = [](clustermc::Rng&) { return Eigen::VectorXd::Zero(1); };
  } else if (kind == "single_state") {
    mdp.reward = [](const Eigen::VectorXd&) { return 1.0; };
    mdp.transition = [](const Eigen::VectorXd& s, const Eigen::VectorXd&, clustermc::Rng&) {
      return s;
    };
    mdp.initial_state = [](clustermc::Rng&) { return Eigen::VectorXd::Zero(1); };
  } else {
    throw clustermc::Error("ConfigError", "unknown toy mdp '" + kind + "'");
  }
  return mdp;
}

int cmd_policy_search(const json& config, const fs::path& out_dir) {
  const json& p = config["policy"];
  const clustermc::Mdp mdp = build_mdp(config);
  const std::vector<clustermc::StateBox> cells =
      clustermc::uniform_grid_cells(mdp.state_space, p["cells"]);

  clustermc::PolicySearchBounds bounds;
  bounds.intercept_bound = p["intercept_bound"];
  bounds.slope_bound = p["slope_bound"];

  const clustermc::PolicySearchResult result =
      clustermc::search_policy(mdp, cells, bounds, p["rollouts"], optimizer_from(config));

  json cells_json = json::array();
  json intercepts = json::array();
  json slopes = json::array();
  for (std::size_t k = 0; k < result.policy.cells.size(); ++k) {
    const auto& cell = result.policy.cells[k];
    cells_json.push_back(
        json{{"lower", std::vector<double>(cell.lower.data(), cell.lower.data() + cell.dims())},
             {"upper", std::vector<double>(cell.upper.data(), cell.upper.data() + cell.dims())}});
    intercepts.push_back(std::vector<double>(
        result.policy.intercepts[k].data(),
        result.policy.intercepts[k].data() + result.policy.intercepts[k].size()));
    json slope_rows = json::array();
    for (Eigen::Index r = 0; r < result.policy.slopes[k].rows(); ++r) {
      std::vector<double> row(static_cast<std::size_t>(result.policy.slopes[k].cols()));
      for (Eigen::Index c = 0; c < result.policy.slopes[k].cols(); ++c) {
        row[static_cast<std::size_t>(c)] = result.policy.slopes[k](r, c);
      }
      slope_rows.push_back(row);
    }
    slopes.push_back(slope_rows);
  }
  write_json(out_dir / "policy.json", json{{"cells", cells_json},
                                           {"intercepts", intercepts},
                                           {"slopes", slopes},
                                           {"value", result.value},
                                           {"stderr", result.stderr_value},
                                           {"evaluations", result.evaluations}});
  write_manifest(out_dir, "policy-search", config, {"policy.json"});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation- and clustering-based constrained portfolio optimization toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::int64_t> seed_override;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "Generate a synthetic factor/return world and backtest on it"},
      {"optimize", "One-shot portfolio optimization at the last date of an ingested panel"},
      {"backtest", "Rolling re-optimization over an ingested panel"},
      {"stability", "Sample-size convergence sweep against a benchmark run"},
      {"policy-search", "Piecewise-linear policy search on a configured toy MDP"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "JSON config (see `config-schema` for keys/defaults)");
    sub->add_option("--out", out_dir, "Output directory (created if missing)");
    sub->add_option("--seed", seed_override, "Override the config seed");
  }
  app.add_subcommand("config-schema", "Print the full default config (every key and default)");

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    if (command == "config-schema") {
      std::cout << default_config().dump(2) << "\n";
      return 0;
    }

    json config = load_config(config_path);
    if (seed_override) config["seed"] = *seed_override;

    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    if (command == "simulate") return cmd_simulate(config, out);
    if (command == "optimize") return cmd_optimize(config, out);
    if (command == "backtest") return cmd_backtest(config, out);
    if (command == "stability") return cmd_stability(config, out);
    if (command == "policy-search") return cmd_policy_search(config, out);
    throw clustermc::Error("InternalError", "unhandled command " + command);
  } catch (const clustermc::Error& e) {
    std::cerr << json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "InternalError"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}
