#include "clustermc/stability.hpp"

#include <algorithm>
#include <cmath>

#include "clustermc/errors.hpp"

namespace clustermc {

namespace {

EquityCurve run_with_m(const BacktestProblem& problem, OptimizerConfig config, int m) {
  config.m = m;
  return run_backtest(*problem.panel, problem.factors, problem.objective, problem.partition,
                      config, problem.backtest, problem.forecast, problem.box)
      .curve;
}

}  // namespace

std::vector<StabilityRow> stability_sweep(const BacktestProblem& problem,
                                          const OptimizerConfig& base,
                                          const std::vector<int>& m_list, int benchmark_m) {
  if (problem.panel == nullptr) throw DimensionMismatch("stability sweep needs a panel");
  if (m_list.empty()) throw DimensionMismatch("stability sweep needs at least one m");
  for (int m : m_list) {
    if (m < 1) throw DimensionMismatch("sample counts must be >= 1");
    if (m > benchmark_m) {
      throw DimensionMismatch("benchmark_m must dominate every swept m");
    }
  }

  const EquityCurve reference = run_with_m(problem, base, benchmark_m);

  std::vector<StabilityRow> rows;
  rows.reserve(m_list.size());
  for (int m : m_list) {
    const EquityCurve curve = m == benchmark_m ? reference : run_with_m(problem, base, m);
    double se = 0.0, sre = 0.0;
    for (int t = 0; t < curve.size(); ++t) {
      const double diff =
          curve.values[static_cast<std::size_t>(t)] - reference.values[static_cast<std::size_t>(t)];
      se += diff * diff;
      const double rel = diff / reference.values[static_cast<std::size_t>(t)];
      sre += rel * rel;
    }
    const double count = static_cast<double>(curve.size());
    rows.push_back({m, std::sqrt(se / count), std::sqrt(sre / count)});
  }
  return rows;
}

}  // namespace clustermc
