#include "clustermc/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "clustermc/errors.hpp"
#include "clustermc/rng.hpp"

namespace clustermc {

void BacktestConfig::validate() const {
  if (rebalance_every < 1) throw DimensionMismatch("rebalance_every must be >= 1");
  if (lookback < 2) throw DimensionMismatch("lookback must be >= 2");
  if (periods_per_year < 1) throw DimensionMismatch("periods_per_year must be >= 1");
}

BacktestResult run_backtest(const ReturnPanel& panel, const FactorPanel* factors,
                            const ObjectiveSpec& objective, const PartitionSpec& partition,
                            const OptimizerConfig& optimizer_config, const BacktestConfig& config,
                            const ForecastFn& forecast, const BoxTemplate& box) {
  panel.validate();
  config.validate();
  const int t_periods = panel.periods();
  const int n = panel.width();
  if (t_periods <= config.lookback) {
    throw InsufficientHistory("panel length " + std::to_string(t_periods) +
                              " does not exceed lookback " + std::to_string(config.lookback));
  }
  if (partition.method != PartitionSpec::Method::kNone && factors == nullptr) {
    throw DimensionMismatch("partitioned backtest needs a factor panel");
  }

  BacktestResult result;
  const int start = config.lookback - 1;
  result.curve.dates.push_back(panel.dates[static_cast<std::size_t>(start)]);
  result.curve.values.push_back(1.0);

  int rebalance_index = 0;
  for (int t = start; t < t_periods - 1; t += config.rebalance_every, ++rebalance_index) {
    const ReturnPanel history = panel.head(t);

    ObjectiveSpec spec = objective;
    if (forecast) {
      Eigen::VectorXd mu = forecast(t);
      if (mu.size() != n) throw DimensionMismatch("forecast length does not match panel width");
      spec.forecast_mu = std::move(mu);
    }

    OptimizerConfig opt = optimizer_config;
    opt.seed = mix_seed(optimizer_config.seed, 0x9000 + static_cast<std::uint64_t>(rebalance_index));

    Eigen::VectorXd weights;
    if (partition.method == PartitionSpec::Method::kNone || n == 1) {
      const FeasibleRegion region = budget_region(n, box.lower, box.upper);
      const OptimizationResult r =
          optimize(region, [&](const Eigen::VectorXd& w) { return evaluate(spec, history, w); },
                   opt);
      weights = r.best_weights;
      result.evaluations += r.evaluations;
    } else {
      UniversePartition groups =
          partition.method == PartitionSpec::Method::kScore
              ? partition_by_score(*factors, t, partition.buckets)
              : partition_by_kmeans(*factors, t, partition.buckets, mix_seed(opt.seed, 0xA0));
      const BottomUpResult r = optimize_bottom_up(history, groups, box, spec, opt);
      weights = r.weights;
      result.evaluations += r.evaluations;
    }

    result.weights.push_back({t, panel.dates[static_cast<std::size_t>(t)], weights});

    const int hold_end = std::min(t + config.rebalance_every, t_periods - 1);
    for (int s = t + 1; s <= hold_end; ++s) {
      const double ret = panel.returns.row(s).dot(weights);
      result.curve.values.push_back(result.curve.values.back() * (1.0 + ret));
      result.curve.dates.push_back(panel.dates[static_cast<std::size_t>(s)]);
    }
  }
  return result;
}

MetricsReport compute_metrics(const EquityCurve& curve, int periods_per_year) {
  const int len = curve.size();
  if (len < 3) {
    throw InsufficientHistory("metrics need an equity curve of length >= 3");
  }
  const double ppy = static_cast<double>(periods_per_year);

  Eigen::VectorXd x(len - 1);
  for (int t = 1; t < len; ++t) {
    x(t - 1) = curve.values[static_cast<std::size_t>(t)] /
                   curve.values[static_cast<std::size_t>(t - 1)] -
               1.0;
  }

  MetricsReport report;
  const double mean = x.mean();
  const double variance = (x.array() - mean).square().mean();
  const double sd = std::sqrt(variance);
  report.ann_return = mean * ppy;
  report.ann_vol = sd * std::sqrt(ppy);
  if (sd == 0.0) {
    throw ZeroVolatility("information ratio undefined on a zero-volatility curve");
  }
  report.ir = report.ann_return / report.ann_vol;

  const double downside = std::sqrt(x.array().min(0.0).square().mean());
  report.sortino = downside > 0.0 ? report.ann_return / (downside * std::sqrt(ppy))
                                  : std::numeric_limits<double>::infinity();

  double peak = curve.values.front();
  double mdd = 0.0;
  for (double v : curve.values) {
    peak = std::max(peak, v);
    mdd = std::max(mdd, (peak - v) / peak);
  }
  report.mdd = mdd;
  report.calmar =
      mdd > 0.0 ? report.ann_return / mdd : std::numeric_limits<double>::infinity();
  return report;
}

EquityCurve excess_curve(const EquityCurve& strategy, const EquityCurve& benchmark) {
  if (strategy.dates != benchmark.dates) {
    throw DateMisalignment("strategy and benchmark curves are not date-aligned");
  }
  EquityCurve out;
  out.dates = strategy.dates;
  out.values.push_back(1.0);
  for (int t = 1; t < strategy.size(); ++t) {
    const double rs = strategy.values[static_cast<std::size_t>(t)] /
                          strategy.values[static_cast<std::size_t>(t - 1)] -
                      1.0;
    const double rb = benchmark.values[static_cast<std::size_t>(t)] /
                          benchmark.values[static_cast<std::size_t>(t - 1)] -
                      1.0;
    out.values.push_back(out.values.back() * (1.0 + rs - rb));
  }
  return out;
}

EquityCurve asset_curve(const ReturnPanel& panel, int asset, int t_start, int t_end) {
  if (asset < 0 || asset >= panel.width() || t_start < 0 || t_end >= panel.periods() ||
      t_start > t_end) {
    throw DimensionMismatch("asset curve range out of bounds");
  }
  EquityCurve out;
  out.dates.push_back(panel.dates[static_cast<std::size_t>(t_start)]);
  out.values.push_back(1.0);
  for (int s = t_start + 1; s <= t_end; ++s) {
    out.values.push_back(out.values.back() * (1.0 + panel.returns(s, asset)));
    out.dates.push_back(panel.dates[static_cast<std::size_t>(s)]);
  }
  return out;
}

}  // namespace clustermc
