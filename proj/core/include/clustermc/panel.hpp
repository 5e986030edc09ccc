#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace clustermc {

// T x n matrix of simple per-period returns with aligned date and asset
// labels. No missing entries; every return > -1 (limited liability).
struct ReturnPanel {
  Eigen::MatrixXd returns;         // T x n
  std::vector<std::string> dates;  // length T, strictly increasing
  std::vector<std::string> assets; // length n, unique

  int periods() const { return static_cast<int>(returns.rows()); }
  int width() const { return static_cast<int>(returns.cols()); }

  // Rows [0, t] inclusive — the no-lookahead history slice.
  ReturnPanel head(int t) const;

  ReturnPanel select_assets(const std::vector<int>& indices) const;

  void validate() const;
};

// K factor matrices, each T x n, aligned with a ReturnPanel.
struct FactorPanel {
  std::vector<Eigen::MatrixXd> values;
  std::vector<std::string> names;

  int factors() const { return static_cast<int>(values.size()); }

  void validate_against(const ReturnPanel& panel) const;
};

}  // namespace clustermc
