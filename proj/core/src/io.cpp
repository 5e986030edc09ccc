#include "clustermc/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "clustermc/dates.hpp"
#include "clustermc/errors.hpp"

namespace clustermc {

std::string format_double(double value) {
  char buf[32];
  // %.17g round-trips every finite double.
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& text, long line_no, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw ParseError("cannot parse " + what + " '" + text + "'", line_no);
  }
  return value;
}

}  // namespace

IngestResult ingest_prices(const std::string& path, const std::string& price_column) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path + "'", 0);
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw EmptyPanel("file '" + path + "' is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);

  int date_col = -1, asset_col = -1, price_col = -1;
  std::vector<int> factor_cols;
  std::vector<std::string> factor_names;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "date") {
      date_col = static_cast<int>(i);
    } else if (header[i] == "asset") {
      asset_col = static_cast<int>(i);
    } else if (header[i] == price_column) {
      price_col = static_cast<int>(i);
    } else {
      factor_cols.push_back(static_cast<int>(i));
      factor_names.push_back(header[i]);
    }
  }
  if (date_col < 0 || asset_col < 0 || price_col < 0) {
    throw ParseError("header must contain date, asset, and '" + price_column + "' columns", 1);
  }

  struct Row {
    double price;
    std::vector<double> factors;
  };
  // date -> asset -> row; ISO strings sort chronologically.
  std::map<std::string, std::map<std::string, Row>> table;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    const std::string& date = fields[static_cast<std::size_t>(date_col)];
    if (days_from_iso(date) < 0) {
      throw ParseError("date '" + date + "' is not ISO-8601", line_no);
    }
    Row row;
    row.price = parse_number(fields[static_cast<std::size_t>(price_col)], line_no, "price");
    for (int c : factor_cols) {
      row.factors.push_back(parse_number(fields[static_cast<std::size_t>(c)], line_no, "factor"));
    }
    table[date][fields[static_cast<std::size_t>(asset_col)]] = std::move(row);
  }
  if (table.size() < 2) {
    throw EmptyPanel("need at least two dates to compute returns");
  }

  // Strict alignment: keep only assets present at every date.
  std::map<std::string, int> asset_counts;
  for (const auto& [date, assets] : table) {
    for (const auto& [asset, row] : assets) ++asset_counts[asset];
  }
  std::vector<std::string> kept;
  int dropped = 0;
  for (const auto& [asset, count] : asset_counts) {
    if (count == static_cast<int>(table.size())) {
      kept.push_back(asset);
    } else {
      ++dropped;
    }
  }
  if (kept.empty()) {
    throw EmptyPanel("no asset is present at every date");
  }
  if (dropped > 0) {
    std::cerr << "dropped " << dropped << " asset(s) with missing dates\n";
  }

  const int n = static_cast<int>(kept.size());
  const int t_prices = static_cast<int>(table.size());
  Eigen::MatrixXd prices(t_prices, n);
  std::vector<Eigen::MatrixXd> factor_values(factor_names.size(),
                                             Eigen::MatrixXd(t_prices, n));
  std::vector<std::string> all_dates;
  int t = 0;
  for (const auto& [date, assets] : table) {
    all_dates.push_back(date);
    for (int j = 0; j < n; ++j) {
      const Row& row = assets.at(kept[static_cast<std::size_t>(j)]);
      prices(t, j) = row.price;
      for (std::size_t k = 0; k < factor_names.size(); ++k) {
        factor_values[k](t, j) = row.factors[k];
      }
    }
    ++t;
  }

  IngestResult result;
  result.dropped_assets = dropped;
  result.panel.returns = prices.bottomRows(t_prices - 1).array() /
                             prices.topRows(t_prices - 1).array() -
                         1.0;
  result.panel.dates.assign(all_dates.begin() + 1, all_dates.end());
  result.panel.assets = kept;
  result.panel.validate();

  result.factors.names = factor_names;
  for (auto& m : factor_values) {
    result.factors.values.push_back(m.bottomRows(t_prices - 1));
  }
  result.factors.validate_against(result.panel);
  return result;
}

void write_panel_csv(const std::string& path, const ReturnPanel& panel,
                     const FactorPanel* factors, double base_price) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open '" + path + "' for writing", 0);
  }
  out << "date,asset,price";
  if (factors != nullptr) {
    for (const auto& name : factors->names) out << "," << name;
  }
  out << "\n";

  const std::string base_date = iso_from_days(days_from_iso(panel.dates.front()) - 1);
  const int t_periods = panel.periods();
  for (int j = 0; j < panel.width(); ++j) {
    double price = base_price;
    out << base_date << "," << panel.assets[static_cast<std::size_t>(j)] << ","
        << format_double(price);
    if (factors != nullptr) {
      // The base row predates the first return; factor values start there too.
      for (const auto& m : factors->values) out << "," << format_double(m(0, j));
    }
    out << "\n";
    for (int t = 0; t < t_periods; ++t) {
      price *= 1.0 + panel.returns(t, j);
      out << panel.dates[static_cast<std::size_t>(t)] << ","
          << panel.assets[static_cast<std::size_t>(j)] << "," << format_double(price);
      if (factors != nullptr) {
        for (const auto& m : factors->values) out << "," << format_double(m(t, j));
      }
      out << "\n";
    }
  }
}

void write_equity_csv(const std::string& path, const EquityCurve& curve) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing", 0);
  out << "date,value\n";
  for (int t = 0; t < curve.size(); ++t) {
    out << curve.dates[static_cast<std::size_t>(t)] << ","
        << format_double(curve.values[static_cast<std::size_t>(t)]) << "\n";
  }
}

void write_weights_csv(const std::string& path, const std::vector<WeightRecord>& weights,
                       const std::vector<std::string>& assets) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing", 0);
  out << "date,asset,weight\n";
  for (const auto& record : weights) {
    for (std::size_t j = 0; j < assets.size(); ++j) {
      out << record.date << "," << assets[j] << ","
          << format_double(record.weights(static_cast<Eigen::Index>(j))) << "\n";
    }
  }
}

void write_stability_csv(const std::string& path, const std::vector<StabilityRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing", 0);
  out << "m,rmse,rmsre\n";
  for (const auto& row : rows) {
    out << row.m << "," << format_double(row.rmse) << "," << format_double(row.rmsre) << "\n";
  }
}

}  // namespace clustermc
