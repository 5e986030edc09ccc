#include "clustermc/sampler.hpp"

#include <cmath>
#include <string>

#include "clustermc/errors.hpp"
#include "clustermc/rng.hpp"

namespace clustermc {

namespace {

bool use_simplex_proposal(const FeasibleRegion& region) {
  if (region.completion != Completion::kBudget) return false;
  return (region.lower.array() >= 0.0).all();
}

// One proposal; returns true and fills w when the draw is feasible.
bool propose(const FeasibleRegion& region, bool simplex, Rng& rng, Eigen::VectorXd& w) {
  const int n = region.n;
  if (simplex) {
    // Exponential spacings: w ~ Dirichlet(1,...,1), i.e. uniform over the
    // budget simplex == uniform in the n-1 free coordinates.
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      double u = rng.uniform();
      while (u <= 0.0) u = rng.uniform();
      w(j) = -std::log(u);
      total += w(j);
    }
    w /= total;
    // Recompute the completed coordinate through the rule so the equality
    // invariant holds exactly, not just to rounding.
    w(n - 1) = region.complete(w.head(n - 1));
  } else {
    const int free = region.free_dims();
    for (int j = 0; j < free; ++j) {
      w(j) = rng.uniform(region.lower(j), region.upper(j));
    }
    if (region.completion != Completion::kNone) {
      w(n - 1) = region.complete(w.head(n - 1));
    }
  }
  return region.in_box(w) && region.satisfies_inequalities(w);
}

}  // namespace

std::vector<Eigen::VectorXd> sample_feasible(const FeasibleRegion& region, int m,
                                             std::uint64_t seed, const SamplerOptions& options) {
  region.validate();
  if (m < 1) {
    throw DimensionMismatch("sample count must be >= 1");
  }

  std::vector<Eigen::VectorXd> out;
  out.reserve(m);

  // No free coordinates: the feasible set is the completed singleton.
  if (region.free_dims() == 0) {
    Eigen::VectorXd w(1);
    w(0) = region.complete(Eigen::VectorXd(0));
    if (!region.in_box(w) || !region.satisfies_inequalities(w)) {
      throw InfeasibleRegion("completed singleton violates the constraints");
    }
    out.assign(m, w);
    return out;
  }

  const bool simplex = use_simplex_proposal(region);
  Rng rng(mix_seed(seed, 0));
  Eigen::VectorXd w(region.n);
  std::int64_t proposals = 0;
  while (static_cast<int>(out.size()) < m) {
    ++proposals;
    if (propose(region, simplex, rng, w)) {
      out.push_back(w);
    } else if (proposals >= options.floor_check_after) {
      const double rate = static_cast<double>(out.size()) / static_cast<double>(proposals);
      if (rate < options.acceptance_floor) {
        throw InfeasibleRegion("acceptance rate " + std::to_string(rate) + " after " +
                               std::to_string(proposals) +
                               " proposals; region empty or measure-zero");
      }
    }
  }
  return out;
}

double acceptance_rate(const FeasibleRegion& region, int probe, std::uint64_t seed) {
  region.validate();
  if (probe < 1) {
    throw DimensionMismatch("probe count must be >= 1");
  }
  if (region.free_dims() == 0) {
    Eigen::VectorXd w(1);
    w(0) = region.complete(Eigen::VectorXd(0));
    return (region.in_box(w) && region.satisfies_inequalities(w)) ? 1.0 : 0.0;
  }
  const bool simplex = use_simplex_proposal(region);
  Rng rng(mix_seed(seed, 0));
  Eigen::VectorXd w(region.n);
  int accepted = 0;
  for (int i = 0; i < probe; ++i) {
    if (propose(region, simplex, rng, w)) ++accepted;
  }
  return static_cast<double>(accepted) / static_cast<double>(probe);
}

}  // namespace clustermc
