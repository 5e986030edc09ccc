#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace clustermc {

// How the last coordinate is obtained from the free ones. kBudget eliminates
// the full-investment equality (w_n = 1 - sum of the others); kNone means all
// n coordinates are free (plain box, used by the policy-parameter search).
enum class Completion { kBudget, kNone, kCustom };

// Weight search space: strict box bounds, at most one coordinate eliminated by
// a completion rule, and nonlinear inequality predicates F_i(w) >= 0.
struct FeasibleRegion {
  int n = 0;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  Completion completion = Completion::kBudget;
  std::function<double(const Eigen::VectorXd&)> custom_completion;
  std::vector<std::function<double(const Eigen::VectorXd&)>> inequalities;

  int free_dims() const { return completion == Completion::kNone ? n : n - 1; }

  // Value of the completed coordinate given the n-1 free ones.
  double complete(const Eigen::VectorXd& partial) const;

  // Full n-vector from the free coordinates (identity when completion none).
  Eigen::VectorXd expand(const Eigen::VectorXd& partial) const;

  bool in_box(const Eigen::VectorXd& w) const;  // strict: lower < w < upper
  bool satisfies_inequalities(const Eigen::VectorXd& w) const;
  bool completion_holds(const Eigen::VectorXd& w, double tol = 1e-12) const;
  bool is_feasible(const Eigen::VectorXd& w, double completion_tol = 1e-12) const;

  void validate() const;
};

// Fully-invested long-range region: n assets, shared open bounds, budget
// completion of the last coordinate.
FeasibleRegion budget_region(int n, double lower = 0.0, double upper = 1.0);

// Plain box with no eliminated coordinate.
FeasibleRegion box_region(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

}  // namespace clustermc
