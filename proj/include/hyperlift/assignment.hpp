#pragma once

#include <Eigen/Core>

#include <limits>
#include <vector>

namespace hyperlift {

/// perm[row] = column.
struct Assignment {
  std::vector<int> perm;
  double cost = 0.0;
  /// Cheapest cost among the other permutations (brute force only; +inf otherwise).
  double runner_up = std::numeric_limits<double>::infinity();
};

/// Min-cost perfect matching on a square cost matrix (Hungarian algorithm, O(n^3)).
Assignment hungarian(const Eigen::MatrixXd& cost);

/// Exhaustive search over permutations in lexicographic order. A candidate
/// replaces the incumbent only when cheaper by more than tie_tol, so ties go
/// to the lexicographically smallest permutation. Limited to n <= 9.
Assignment lexicographic_assignment(const Eigen::MatrixXd& cost, double tie_tol);

/// Lexicographic search when small enough, Hungarian otherwise.
Assignment min_cost_assignment(const Eigen::MatrixXd& cost, double tie_tol);

}  // namespace hyperlift
