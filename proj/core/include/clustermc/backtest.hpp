#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "clustermc/objectives.hpp"
#include "clustermc/optimizer.hpp"
#include "clustermc/panel.hpp"
#include "clustermc/universe.hpp"

namespace clustermc {

// Cumulative portfolio value, normalized to 1.0 before the first
// out-of-sample period. length = out-of-sample periods + 1.
struct EquityCurve {
  std::vector<std::string> dates;
  std::vector<double> values;

  int size() const { return static_cast<int>(values.size()); }
};

// Annualized performance statistics. calmar and sortino are +infinity when
// the drawdown / downside deviation is exactly zero.
struct MetricsReport {
  double ann_return = 0.0;
  double ann_vol = 0.0;
  double ir = 0.0;
  double sortino = 0.0;
  double mdd = 0.0;
  double calmar = 0.0;
};

struct BacktestConfig {
  int rebalance_every = 5;
  int lookback = 252;        // trailing window feeding the per-date optimization
  int periods_per_year = 252;
  std::string benchmark;     // optional asset identifier for excess curves

  void validate() const;
};

// How the universe is split at each rebalance date before bottom-up
// optimization; kNone optimizes all assets directly.
struct PartitionSpec {
  enum class Method { kNone, kScore, kKmeans };
  Method method = Method::kNone;
  int buckets = 1;
};

// Conditional expected returns for the rebalance at row t; must only use
// information from rows <= t.
using ForecastFn = std::function<Eigen::VectorXd(int)>;

struct WeightRecord {
  int t_index = 0;  // panel row whose close the weights were chosen at
  std::string date;
  Eigen::VectorXd weights;
};

struct BacktestResult {
  EquityCurve curve;
  std::vector<WeightRecord> weights;
  std::int64_t evaluations = 0;
};

// Walk the panel: at each rebalance row t optimize on data from rows <= t
// only, hold the weights for the next rebalance_every rows, compound realized
// portfolio returns into the equity curve.
BacktestResult run_backtest(const ReturnPanel& panel, const FactorPanel* factors,
                            const ObjectiveSpec& objective, const PartitionSpec& partition,
                            const OptimizerConfig& optimizer_config, const BacktestConfig& config,
                            const ForecastFn& forecast = {}, const BoxTemplate& box = {});

MetricsReport compute_metrics(const EquityCurve& curve, int periods_per_year);

// Compound the per-period return differences into a curve starting at 1.
EquityCurve excess_curve(const EquityCurve& strategy, const EquityCurve& benchmark);

// Curve of a single asset over rows (t_start, t_end], used for benchmarks.
EquityCurve asset_curve(const ReturnPanel& panel, int asset, int t_start, int t_end);

}  // namespace clustermc
