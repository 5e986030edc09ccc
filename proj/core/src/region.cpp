#include "clustermc/region.hpp"

#include <cmath>

#include "clustermc/errors.hpp"

namespace clustermc {

double FeasibleRegion::complete(const Eigen::VectorXd& partial) const {
  switch (completion) {
    case Completion::kBudget:
      return 1.0 - partial.sum();
    case Completion::kCustom:
      return custom_completion(partial);
    case Completion::kNone:
      break;
  }
  throw DimensionMismatch("region without completion has no completed coordinate");
}

Eigen::VectorXd FeasibleRegion::expand(const Eigen::VectorXd& partial) const {
  if (completion == Completion::kNone) {
    return partial;
  }
  Eigen::VectorXd w(n);
  w.head(n - 1) = partial;
  w(n - 1) = complete(partial);
  return w;
}

bool FeasibleRegion::in_box(const Eigen::VectorXd& w) const {
  for (int j = 0; j < n; ++j) {
    if (!(w(j) > lower(j) && w(j) < upper(j))) return false;
  }
  return true;
}

bool FeasibleRegion::satisfies_inequalities(const Eigen::VectorXd& w) const {
  for (const auto& f : inequalities) {
    if (!(f(w) >= 0.0)) return false;
  }
  return true;
}

bool FeasibleRegion::completion_holds(const Eigen::VectorXd& w, double tol) const {
  if (completion == Completion::kNone) return true;
  return std::abs(w(n - 1) - complete(w.head(n - 1))) <= tol;
}

bool FeasibleRegion::is_feasible(const Eigen::VectorXd& w, double completion_tol) const {
  if (w.size() != n) return false;
  return in_box(w) && completion_holds(w, completion_tol) && satisfies_inequalities(w);
}

void FeasibleRegion::validate() const {
  if (n < 1) {
    throw DimensionMismatch("region needs at least one asset");
  }
  if (lower.size() != n || upper.size() != n) {
    throw DimensionMismatch("bound vectors do not match asset count");
  }
  for (int j = 0; j < n; ++j) {
    if (!(lower(j) < upper(j))) {
      throw DimensionMismatch("lower bound not below upper bound at coordinate " +
                              std::to_string(j));
    }
  }
  if (completion == Completion::kCustom && !custom_completion) {
    throw DimensionMismatch("custom completion rule missing");
  }
}

FeasibleRegion budget_region(int n, double lower, double upper) {
  FeasibleRegion region;
  region.n = n;
  region.lower = Eigen::VectorXd::Constant(n, lower);
  region.upper = Eigen::VectorXd::Constant(n, upper);
  region.completion = Completion::kBudget;
  return region;
}

FeasibleRegion box_region(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  FeasibleRegion region;
  region.n = static_cast<int>(lower.size());
  region.lower = lower;
  region.upper = upper;
  region.completion = Completion::kNone;
  return region;
}

}  // namespace clustermc
