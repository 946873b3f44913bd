#pragma once

// Empirical regularity certificates from difference quotients under dyadic
// refinement. A verdict of C1 means "consistent with C^1 at the sampled
// resolution", never a proof.

#include <hyperlift/grid.hpp>

#include <Eigen/Core>

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hyperlift {

enum class Verdict {
  UnboundedDerivative,
  Inconclusive,
  Lipschitz,
  DifferentiableBoundedDerivative,
  C1,
  TwiceDifferentiable,
};

std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view text);

/// Rank on the regularity scale; Inconclusive sits just above Unbounded so
/// that it never satisfies "at least Lipschitz".
int rank(Verdict v);
inline bool at_least(Verdict v, Verdict floor) { return rank(v) >= rank(floor); }

struct RegularityThresholds {
  int base_level = 6;
  /// sup |D1| growing by at least this factor per level flags a blow-up.
  double unbounded_growth = 1.4142135623730951;
  /// Relative slack on the blow-up factor, absorbing rounding of an exact sqrt(2) rate.
  double growth_rel_slack = 1e-9;
  /// sup growth at most this factor per level counts as bounded.
  double bounded_growth = 1.05;
  /// Level-to-level change of the quotient function must shrink by this
  /// factor per level for C^1 (and, on second quotients, for C^2).
  double cauchy_decay = 0.75;
  /// Weaker shrink factor accepted as "differentiable with bounded derivative".
  double differentiable_decay = 0.95;
  /// Evidence below noise_floor * (natural scale) is treated as zero.
  double noise_floor = 1e-7;
  /// Number of trailing level ratios examined.
  int trailing = 3;
};

struct LevelEvidence {
  int level = 0;
  double step = 0.0;
  double sup_d1 = 0.0;
  double sup_d2 = 0.0;
  double jump_d1 = 0.0;    // sup |D1(t+h) - D1(t-h)|
  double cauchy_d1 = 0.0;  // sup |D1 at level k+1 - interpolated D1 at level k|; NaN on the last level
  double cauchy_d2 = 0.0;
  double witness_d1 = 0.0;
  double witness_d2 = 0.0;
  double witness_jump = 0.0;
  double witness_cauchy_d1 = 0.0;
  double witness_cauchy_d2 = 0.0;
};

struct RegularityReport {
  Verdict verdict = Verdict::Inconclusive;
  Interval domain;
  int components = 1;
  RegularityThresholds thresholds;
  std::vector<LevelEvidence> evidence;
  // trailing level-to-level ratios used by the decision procedure
  std::vector<double> growth_d1;
  std::vector<double> growth_d2;
  std::vector<double> decay_d1;
  std::vector<double> decay_d2;
};

/// Central quotients on a uniform grid with step h (one-sided at the ends).
/// order 1: (f(t+h) - f(t-h)) / 2h; order 2: (f(t+h) - 2f(t) + f(t-h)) / h^2,
/// with the ends taking the value of their interior neighbour's stencil.
Eigen::VectorXd difference_quotients(const Eigen::Ref<const Eigen::VectorXd>& samples, double h, int order);
Eigen::VectorXd difference_quotients(const Eigen::Ref<const Eigen::VectorXd>& samples, const Grid& grid,
                                     int order);

/// Samples on a grid: rows are grid points, columns are components.
using GridSampler = std::function<Eigen::MatrixXd(const Grid&)>;

/// Evidence on levels base_level .. base_level + levels, then the verdict.
/// Components are certified jointly (evidence is the sup over components).
RegularityReport certify(const GridSampler& values, Interval domain, int levels,
                         const RegularityThresholds& thresholds = {});

/// Certify precomputed samples over a full dyadic grid of the given level by
/// nested subsampling; the finest level is the sample level.
RegularityReport certify_samples(const Eigen::MatrixXd& samples, const Grid& grid, int levels,
                                 RegularityThresholds thresholds = {});

}  // namespace hyperlift
