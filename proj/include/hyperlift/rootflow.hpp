#pragma once

// Root branches for a curve of monic hyperbolic polynomials.
//
// The sorted selection is continuous but generally kinks where roots cross.
// The differentiable selection re-pairs branch labels across each collision
// cluster so that one-sided derivatives match: slopes of every involved
// branch are fitted by least squares on w samples just outside the cluster
// (refining until they stabilise) and left labels are matched to right
// labels by a min-cost assignment on the slope jumps.

#include <hyperlift/curvedsl.hpp>
#include <hyperlift/grid.hpp>

#include <Eigen/Core>

#include <vector>

namespace hyperlift {

enum class SelectionKind { Sorted, Differentiable };

/// From `time_index` on, label l takes the l-th column of the sorted roots
/// via permutation[l].
struct SwapEvent {
  Eigen::Index time_index = 0;
  std::vector<int> permutation;

  bool operator==(const SwapEvent&) const = default;
};

struct CollisionCluster {
  Eigen::Index first = 0;  // grid indices, inclusive
  Eigen::Index last = 0;
  Interval window;
  std::vector<int> branches;  // sorted-order indices, contiguous
  double min_gap = 0.0;
};

struct RootBranches {
  Grid grid{{0, 1}, 0};
  Eigen::MatrixXd values;  // rows = grid points, cols = branches
  SelectionKind kind = SelectionKind::Sorted;
  std::vector<SwapEvent> swap_log;
  std::vector<CollisionCluster> unresolved;  // windows left in sorted order
  double eps = 0.0;                          // clustering threshold used
};

struct SelectionOptions {
  double tol = 1e-12;
  double eps = 0.0;  // <= 0: (root range) * eps_fraction
  double eps_fraction = 1e-3;
  int slope_window = 8;
  int max_refinements = 20;
  double slope_rel_change = 1e-3;
  double tie_tol = 1e-6;
  bool throw_on_unresolved = false;
};

/// Sorted roots of P(t); throws TimedError(NotHyperbolicAt).
Eigen::VectorXd sorted_roots_at(const CoeffCurve& curve, double t, double tol);

RootBranches sorted_branches(const CoeffCurve& curve, const Grid& grid, double tol);

/// Maximal windows where some adjacent sorted branches are closer than eps.
std::vector<CollisionCluster> collision_clusters(const RootBranches& branches, double eps);

RootBranches differentiable_selection(const CoeffCurve& curve, const Grid& grid, double tol);
RootBranches differentiable_selection(const CoeffCurve& curve, const Grid& grid, const SelectionOptions& options);

}  // namespace hyperlift
