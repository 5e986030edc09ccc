#include "clustermc/objectives.hpp"

#include <cmath>
#include <string>

#include "clustermc/errors.hpp"

namespace clustermc {

ObjectiveSpec ObjectiveSpec::mean_variance(double lambda, int window) {
  ObjectiveSpec spec;
  spec.kind = ObjectiveKind::kMeanVariance;
  spec.risk_aversion = lambda;
  spec.window = window;
  return spec;
}

ObjectiveSpec ObjectiveSpec::mvsk(int window) {
  ObjectiveSpec spec;
  spec.kind = ObjectiveKind::kMvskRatio;
  spec.window = window;
  return spec;
}

ObjectiveSpec ObjectiveSpec::crra(double gamma, CrraForm form, int window) {
  ObjectiveSpec spec;
  spec.kind = ObjectiveKind::kCrra;
  spec.risk_aversion = gamma;
  spec.crra_form = form;
  spec.window = window;
  return spec;
}

void ObjectiveSpec::validate() const {
  if (window < 2) {
    throw InsufficientHistory("moment window must be >= 2");
  }
  if (kind == ObjectiveKind::kCrra && risk_aversion == 1.0) {
    throw NonFiniteScore("CRRA gamma must differ from 1");
  }
}

Eigen::VectorXd project_series(const ReturnPanel& panel, const Eigen::VectorXd& w) {
  if (w.size() != panel.returns.cols()) {
    throw DimensionMismatch("weight vector length " + std::to_string(w.size()) +
                            " does not match panel width " +
                            std::to_string(panel.returns.cols()));
  }
  return panel.returns * w;
}

MomentSet empirical_moments(const Eigen::VectorXd& series, bool with_higher) {
  const Eigen::Index t = series.size();
  if (t < 2) {
    throw InsufficientHistory("moments need at least 2 observations");
  }
  MomentSet m;
  m.mu = series.mean();
  const Eigen::ArrayXd centered = series.array() - m.mu;
  const double variance = centered.square().mean();
  m.sigma = std::sqrt(variance);
  if (!with_higher) {
    m.skew = 0.0;
    m.kurt = 0.0;
    return m;
  }
  if (m.sigma == 0.0) {
    throw ZeroVariance("constant series has undefined skewness and kurtosis");
  }
  m.skew = centered.cube().mean() / (variance * m.sigma);
  m.kurt = centered.square().square().mean() / (variance * variance);
  return m;
}

double mvsk_score(const MomentSet& m) {
  return (m.mu + 0.5 * m.skew) / (m.sigma + 0.5 * m.kurt);
}

namespace {

double crra_utility(double r, double gamma, CrraForm form) {
  const double wealth = 1.0 + r;
  const double exponent = form == CrraForm::kPaper ? gamma : 1.0 - gamma;
  if (wealth <= 0.0 && exponent != std::floor(exponent)) {
    throw NonFiniteScore("portfolio return <= -100% under non-integer CRRA exponent");
  }
  const double powered = std::pow(wealth, exponent);
  if (form == CrraForm::kPaper) {
    return (1.0 - powered) / (1.0 - gamma);
  }
  return powered / (1.0 - gamma);
}

}  // namespace

double evaluate(const ObjectiveSpec& spec, const ReturnPanel& panel, const Eigen::VectorXd& w) {
  spec.validate();
  if (w.size() != panel.returns.cols()) {
    throw DimensionMismatch("weight vector does not match panel width");
  }
  const int t = panel.periods();
  const int window = std::min(t, spec.window);
  if (window < 2) {
    throw InsufficientHistory("objective window needs at least 2 periods, have " +
                              std::to_string(t));
  }
  const Eigen::VectorXd series = panel.returns.bottomRows(window) * w;

  switch (spec.kind) {
    case ObjectiveKind::kMeanVariance: {
      const MomentSet m = empirical_moments(series, false);
      const double mu = spec.forecast_mu ? spec.forecast_mu->dot(w) : m.mu;
      return mu - spec.risk_aversion * m.sigma * m.sigma;
    }
    case ObjectiveKind::kMvskRatio: {
      MomentSet m = empirical_moments(series, true);
      if (spec.forecast_mu) m.mu = spec.forecast_mu->dot(w);
      return mvsk_score(m);
    }
    case ObjectiveKind::kCrra: {
      double total = 0.0;
      for (Eigen::Index i = 0; i < series.size(); ++i) {
        total += crra_utility(series(i), spec.risk_aversion, spec.crra_form);
      }
      const double score = total / static_cast<double>(series.size());
      if (!std::isfinite(score)) {
        throw NonFiniteScore("CRRA utility not finite on this window");
      }
      return score;
    }
  }
  throw NonFiniteScore("unknown objective kind");
}

std::pair<double, double> moment_projection_pair(const ReturnPanel& panel,
                                                 const Eigen::VectorXd& w, int order) {
  if (order < 1 || order > 4) {
    throw DimensionMismatch("moment order must be in [1, 4]");
  }
  const int n = panel.width();
  if (n > 5) {
    throw DimensionMismatch("tensor route is exponential in order; n must be <= 5");
  }
  if (w.size() != n) {
    throw DimensionMismatch("weight vector does not match panel width");
  }
  const int t = panel.periods();

  const Eigen::VectorXd series = panel.returns * w;
  double projected = 0.0;
  for (int i = 0; i < t; ++i) {
    projected += std::pow(series(i), order);
  }
  projected /= static_cast<double>(t);

  // Explicit cross-moment tensor: average over time of the outer products,
  // enumerated with an odometer over all n^order index tuples, contracted
  // with the matching products of weights.
  double tensor = 0.0;
  std::vector<int> index(static_cast<std::size_t>(order), 0);
  while (true) {
    double entry = 0.0;
    for (int i = 0; i < t; ++i) {
      double prod = 1.0;
      for (int a = 0; a < order; ++a) prod *= panel.returns(i, index[static_cast<std::size_t>(a)]);
      entry += prod;
    }
    entry /= static_cast<double>(t);
    double weight_prod = 1.0;
    for (int a = 0; a < order; ++a) weight_prod *= w(index[static_cast<std::size_t>(a)]);
    tensor += weight_prod * entry;

    int digit = order - 1;
    while (digit >= 0 && ++index[static_cast<std::size_t>(digit)] == n) {
      index[static_cast<std::size_t>(digit)] = 0;
      --digit;
    }
    if (digit < 0) break;
  }
  return {projected, tensor};
}

}  // namespace clustermc
