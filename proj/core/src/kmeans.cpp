#include "clustermc/kmeans.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "clustermc/errors.hpp"
#include "clustermc/rng.hpp"

namespace clustermc {

namespace {

// Nearest center per point, strict < so ties resolve to the lowest index.
// Returns the summed squared distance (the inertia of this assignment).
double assign_points(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers,
                     std::vector<int>& assignment) {
  const Eigen::Index m = points.rows();
  const Eigen::Index k = centers.rows();
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (Eigen::Index c = 0; c < k; ++c) {
      const double d2 = (points.row(i) - centers.row(c)).squaredNorm();
      if (d2 < best) {
        best = d2;
        best_c = static_cast<int>(c);
      }
    }
    assignment[static_cast<std::size_t>(i)] = best_c;
    inertia += best;
  }
  return inertia;
}

Eigen::MatrixXd seed_centers(const Eigen::MatrixXd& points, int k, Rng& rng) {
  const Eigen::Index m = points.rows();
  Eigen::MatrixXd centers(k, points.cols());
  centers.row(0) = points.row(static_cast<Eigen::Index>(rng.uniform_index(m)));

  Eigen::VectorXd d2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick;
    if (total > 0.0) {
      // k-means++: choose the next center with probability proportional to
      // the squared distance to the nearest chosen center.
      double target = rng.uniform() * total;
      pick = m - 1;
      for (Eigen::Index i = 0; i < m; ++i) {
        target -= d2(i);
        if (target <= 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.uniform_index(m));
    }
    centers.row(c) = points.row(pick);
    d2 = d2.cwiseMin((points.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int max_iter,
                    double tol) {
  const Eigen::Index m = points.rows();
  if (k < 1) {
    throw TooFewPoints("cluster count must be >= 1");
  }
  if (m < k) {
    throw TooFewPoints("cannot form " + std::to_string(k) + " clusters from " + std::to_string(m) +
                       " points");
  }

  Rng rng(mix_seed(seed, 0));
  KMeansResult result;
  result.k = k;
  result.centers = seed_centers(points, k, rng);
  result.assignment.assign(static_cast<std::size_t>(m), 0);

  std::vector<int> previous(static_cast<std::size_t>(m), -1);
  std::vector<int> counts(static_cast<std::size_t>(k), 0);

  for (int iter = 0; iter < max_iter; ++iter) {
    result.inertia_history.push_back(assign_points(points, result.centers, result.assignment));
    result.iterations = iter + 1;
    if (result.assignment == previous) break;
    previous = result.assignment;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::fill(counts.begin(), counts.end(), 0);
    for (Eigen::Index i = 0; i < m; ++i) {
      const int c = result.assignment[static_cast<std::size_t>(i)];
      sums.row(c) += points.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }

    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) continue;
      const Eigen::RowVectorXd mean = sums.row(c) / counts[static_cast<std::size_t>(c)];
      shift = std::max(shift, (mean - result.centers.row(c)).norm());
      result.centers.row(c) = mean;
    }

    // Re-seed each emptied cluster from the point farthest from its own
    // center, then recompute the affected assignment next round.
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      double far_d2 = -1.0;
      Eigen::Index far_i = 0;
      for (Eigen::Index i = 0; i < m; ++i) {
        const int owner = result.assignment[static_cast<std::size_t>(i)];
        const double d2 = (points.row(i) - result.centers.row(owner)).squaredNorm();
        if (d2 > far_d2) {
          far_d2 = d2;
          far_i = i;
        }
      }
      result.centers.row(c) = points.row(far_i);
      result.assignment[static_cast<std::size_t>(far_i)] = c;
      shift = std::numeric_limits<double>::infinity();
    }

    if (shift < tol) break;
  }

  // Final pass so the returned assignment is exactly the nearest-center map
  // of the returned centers.
  result.inertia = assign_points(points, result.centers, result.assignment);
  return result;
}

double cluster_diameter(const KMeansResult& result, const Eigen::MatrixXd& points, int cluster) {
  const std::vector<int> members = cluster_members(result, cluster);
  double best = 0.0;
  for (std::size_t a = 0; a + 1 < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      best = std::max(best, (points.row(members[a]) - points.row(members[b])).squaredNorm());
    }
  }
  return std::sqrt(best);
}

std::vector<int> cluster_members(const KMeansResult& result, int cluster) {
  if (cluster < 0 || cluster >= result.k) {
    throw DimensionMismatch("cluster index out of range");
  }
  std::vector<int> members;
  for (std::size_t i = 0; i < result.assignment.size(); ++i) {
    if (result.assignment[i] == cluster) members.push_back(static_cast<int>(i));
  }
  return members;
}

}  // namespace clustermc
