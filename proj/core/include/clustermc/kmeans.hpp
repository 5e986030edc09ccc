#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace clustermc {

struct KMeansResult {
  int k = 0;
  Eigen::MatrixXd centers;              // k x d
  std::vector<int> assignment;          // per point: nearest center, ties -> lowest index
  double inertia = 0.0;                 // sum of squared distances to assigned centers
  std::vector<double> inertia_history;  // one entry per Lloyd assignment step
  int iterations = 0;
};

// Lloyd iteration from k-means++ seeding over the rows of `points`.
// Deterministic per seed; stops when the assignment is stable, the largest
// center shift drops below tol, or max_iter is hit. An emptied cluster is
// re-seeded from the point farthest from its current center so k stays fixed.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int max_iter = 100,
                    double tol = 1e-10);

// Maximum pairwise Euclidean distance within the indexed cluster (0 for
// singletons and empty clusters).
double cluster_diameter(const KMeansResult& result, const Eigen::MatrixXd& points, int cluster);

std::vector<int> cluster_members(const KMeansResult& result, int cluster);

}  // namespace clustermc
