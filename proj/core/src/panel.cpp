#include "clustermc/panel.hpp"

#include <cmath>
#include <set>

#include "clustermc/errors.hpp"

namespace clustermc {

ReturnPanel ReturnPanel::head(int t) const {
  if (t < 0 || t >= periods()) {
    throw DimensionMismatch("history index " + std::to_string(t) + " outside panel of length " +
                            std::to_string(periods()));
  }
  ReturnPanel out;
  out.returns = returns.topRows(t + 1);
  out.dates.assign(dates.begin(), dates.begin() + t + 1);
  out.assets = assets;
  return out;
}

ReturnPanel ReturnPanel::select_assets(const std::vector<int>& indices) const {
  ReturnPanel out;
  out.returns.resize(periods(), static_cast<Eigen::Index>(indices.size()));
  out.dates = dates;
  out.assets.reserve(indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const int col = indices[j];
    if (col < 0 || col >= width()) {
      throw DimensionMismatch("asset index " + std::to_string(col) + " outside panel width");
    }
    out.returns.col(static_cast<Eigen::Index>(j)) = returns.col(col);
    out.assets.push_back(assets[col]);
  }
  return out;
}

void ReturnPanel::validate() const {
  if (periods() == 0 || width() == 0) {
    throw EmptyPanel("return panel has no data");
  }
  if (static_cast<int>(dates.size()) != periods()) {
    throw DimensionMismatch("date labels do not match panel length");
  }
  if (static_cast<int>(assets.size()) != width()) {
    throw DimensionMismatch("asset labels do not match panel width");
  }
  for (std::size_t t = 1; t < dates.size(); ++t) {
    if (!(dates[t - 1] < dates[t])) {
      throw DateMisalignment("dates not strictly increasing at row " + std::to_string(t));
    }
  }
  std::set<std::string> unique(assets.begin(), assets.end());
  if (unique.size() != assets.size()) {
    throw DimensionMismatch("duplicate asset identifiers");
  }
  for (int t = 0; t < periods(); ++t) {
    for (int j = 0; j < width(); ++j) {
      const double r = returns(t, j);
      if (!std::isfinite(r)) {
        throw EmptyPanel("missing or non-finite return at (" + std::to_string(t) + ", " +
                         std::to_string(j) + ")");
      }
      if (r <= -1.0) {
        throw EmptyPanel("return <= -1 at (" + std::to_string(t) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

void FactorPanel::validate_against(const ReturnPanel& panel) const {
  if (values.size() != names.size()) {
    throw DimensionMismatch("factor names do not match factor matrices");
  }
  for (const auto& m : values) {
    if (m.rows() != panel.returns.rows() || m.cols() != panel.returns.cols()) {
      throw DimensionMismatch("factor matrix not aligned with return panel");
    }
    if (!m.allFinite()) {
      throw EmptyPanel("missing or non-finite factor value");
    }
  }
}

}  // namespace clustermc
