#pragma once

#include <string>
#include <vector>

#include "clustermc/backtest.hpp"
#include "clustermc/panel.hpp"
#include "clustermc/stability.hpp"

namespace clustermc {

struct IngestResult {
  ReturnPanel panel;
  FactorPanel factors;
  int dropped_assets = 0;
};

// Long-format CSV `date,asset,<price_column>[,factor...]`, ISO-8601 dates.
// Pivots to a T x n panel of simple returns; assets missing any date are
// dropped (strict alignment), with the drop count reported and logged.
IngestResult ingest_prices(const std::string& path, const std::string& price_column = "price");

// Inverse of ingest_prices: compound returns into price levels from a base
// row one date before the panel starts, so re-ingesting reproduces the panel.
void write_panel_csv(const std::string& path, const ReturnPanel& panel,
                     const FactorPanel* factors = nullptr, double base_price = 100.0);

void write_equity_csv(const std::string& path, const EquityCurve& curve);
void write_weights_csv(const std::string& path, const std::vector<WeightRecord>& weights,
                       const std::vector<std::string>& assets);
void write_stability_csv(const std::string& path, const std::vector<StabilityRow>& rows);

// Shortest representation that round-trips a double exactly.
std::string format_double(double value);

}  // namespace clustermc
