#pragma once

#include <vector>

#include "clustermc/backtest.hpp"

namespace clustermc {

struct StabilityRow {
  int m = 0;
  double rmse = 0.0;
  double rmsre = 0.0;
};

// Everything a repeated backtest needs except the optimizer sample budget.
struct BacktestProblem {
  const ReturnPanel* panel = nullptr;
  const FactorPanel* factors = nullptr;
  ObjectiveSpec objective;
  PartitionSpec partition;
  BacktestConfig backtest;
  ForecastFn forecast;
  BoxTemplate box;
};

// Sample-size convergence harness: run the identical backtest once per m,
// take the benchmark_m equity curve as the reference, and report the root
// mean squared (relative) error of each curve against it. Identical m and
// seed reproduce the reference exactly, so the self-comparison row is 0.
std::vector<StabilityRow> stability_sweep(const BacktestProblem& problem,
                                          const OptimizerConfig& base,
                                          const std::vector<int>& m_list, int benchmark_m);

}  // namespace clustermc
