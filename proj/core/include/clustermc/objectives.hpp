#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "clustermc/panel.hpp"

namespace clustermc {

// Population moments of a scalar series. kurt is raw (not excess), so
// kurt >= 1 and the MVSK denominator sigma + kurt/2 stays positive.
struct MomentSet {
  double mu = 0.0;
  double sigma = 0.0;
  double skew = 0.0;
  double kurt = 0.0;
};

enum class ObjectiveKind { kMeanVariance, kMvskRatio, kCrra };

// The printed utility form (1 - (1+R)^g) / (1 - g) versus the textbook
// (1+R)^(1-g) / (1-g). Both are maximized; the printed form is the default.
enum class CrraForm { kPaper, kStandard };

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::kMeanVariance;
  double risk_aversion = 1.0;  // lambda for mean-variance, gamma for CRRA
  CrraForm crra_form = CrraForm::kPaper;
  // Conditional expected returns replacing the historical window mean for
  // mean-variance and MVSK; this is where external forecasts plug in.
  std::optional<Eigen::VectorXd> forecast_mu;
  int window = 252;  // trailing periods for empirical moments

  static ObjectiveSpec mean_variance(double lambda = 1.0, int window = 252);
  static ObjectiveSpec mvsk(int window = 252);
  static ObjectiveSpec crra(double gamma = 3.0, CrraForm form = CrraForm::kPaper,
                            int window = 252);

  void validate() const;
};

// Per-period portfolio return series: element t is w . returns[t].
Eigen::VectorXd project_series(const ReturnPanel& panel, const Eigen::VectorXd& w);

// Population-denominator moments. Throws ZeroVariance when sigma == 0 and the
// standardized moments are requested.
MomentSet empirical_moments(const Eigen::VectorXd& series, bool with_higher = true);

// (mu + skew/2) / (sigma + kurt/2); denominator > 0 whenever sigma is defined.
double mvsk_score(const MomentSet& m);

// Objective value at w over the trailing min(T, window) periods of the panel.
// Higher is better; the optimizer maximizes.
double evaluate(const ObjectiveSpec& spec, const ReturnPanel& panel, const Eigen::VectorXd& w);

// Raw portfolio moment of the given order computed two ways: from the
// projected scalar series, and by contracting the explicit order-`order`
// cross-moment tensor with w. The two must agree; projecting first is what
// removes any need to estimate cross-moment tensors.
std::pair<double, double> moment_projection_pair(const ReturnPanel& panel,
                                                 const Eigen::VectorXd& w, int order);

}  // namespace clustermc
