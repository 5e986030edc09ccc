#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "clustermc/region.hpp"

namespace clustermc {

struct SamplerOptions {
  // Declare the region empty when the running acceptance rate is below this
  // floor after floor_check_after proposals.
  double acceptance_floor = 1e-6;
  std::int64_t floor_check_after = 10'000'000;
};

// Draw m weight vectors uniformly distributed over the feasible set: uniform
// in the free coordinates, completed, and rejection-filtered against box and
// inequality constraints. Deterministic per (region, m, seed).
//
// For budget completion with nonnegative lower bounds the proposal is the
// exponential-spacings simplex draw, whose law equals uniformity in the free
// coordinates but whose acceptance does not collapse as n grows; custom
// completions and signed bounds fall back to the plain box proposal.
std::vector<Eigen::VectorXd> sample_feasible(const FeasibleRegion& region, int m,
                                             std::uint64_t seed,
                                             const SamplerOptions& options = {});

// Fraction of `probe` proposals that pass every feasibility check. Used to
// size sample budgets before committing to a large draw.
double acceptance_rate(const FeasibleRegion& region, int probe, std::uint64_t seed);

}  // namespace clustermc
