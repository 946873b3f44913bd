#pragma once

// Lifts of orbit-space curves c : I -> sigma(V) to curves in V, and the
// multi-parameter Lipschitz harness.
//
// Kind A lifts are exactly the differentiable root selection of the curve of
// polynomials whose coefficients are c. For B, D and I2 the lift is tracked
// through the fibers sigma^{-1}(c(t)): linear prediction from the previous
// two samples picks the nearest fiber point (steps are subdivided until the
// choice is unambiguous). Near mirrors, where fiber points come together,
// the branch on the far side is chosen among all group translates by how
// well its quadratic fit continues the near side, and vice versa.

#include <hyperlift/curvedsl.hpp>
#include <hyperlift/grid.hpp>
#include <hyperlift/invariants.hpp>
#include <hyperlift/regcheck.hpp>
#include <hyperlift/rootflow.hpp>

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

namespace hyperlift {

struct LiftOptions {
  double tol = 1e-10;
  double eps_fraction = 1e-3;  // collision threshold, relative to 1 + sup |c bar|
  int slope_window = 8;
  int max_refinements = 20;
  double tie_tol = 1e-6;
  bool throw_on_unresolved = false;
  bool certify = true;
  int certify_levels = 4;
};

struct LiftResult {
  Grid grid{{0, 1}, 0};
  Eigen::MatrixXd values;  // rows = grid points, cols = coordinates of V
  ReflectionGroup group = ReflectionGroup::make(GroupKind::A, 1);
  double residual = 0.0;   // sup_t max_j |sigma(c bar(t))_j - c_j(t)|
  bool certified = false;
  RegularityReport report;                       // all coordinates jointly
  std::vector<RegularityReport> coordinate_reports;
  std::vector<SwapEvent> swap_log;               // kind A: relabelings as in rootflow
  std::vector<CollisionCluster> collisions;      // windows near mirrors (branches left empty outside kind A)
  std::vector<CollisionCluster> unresolved;
};

/// Throws TimedError(NotInImageAt) where c(t) has no preimage within tol and
/// Error(UnresolvedCollision) on a tie when options.throw_on_unresolved.
LiftResult lift_curve(const OrbitMapSigma& map, const CoeffCurve& c, const Grid& grid, const LiftOptions& options = {});

/// sup_t |sigma(c bar(t)) - c(t)| (max norm) over the lift's grid.
double verify_lift(const OrbitMapSigma& map, const LiftResult& lift, const CoeffCurve& c);

/// g applied to every value, with residual and reports recomputed.
LiftResult transform_lift(const LiftResult& lift, const Eigen::MatrixXd& g, const OrbitMapSigma& map,
                          const CoeffCurve& c, const LiftOptions& options = {});

// ---------------------------------------------------------------- harness

using BoxMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct Probe {
  std::string name;
  std::function<Eigen::VectorXd(double)> path;  // s -> u(s) in the box
  Interval domain{0, 1};
};

struct ProbeResult {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  double lipschitz = 0.0;                   // sup_s |d/ds lift|_2 from central quotients
  std::vector<double> subwindow_lipschitz;  // same on the four quarters of the probe domain
  double residual = 0.0;
  bool unresolved = false;
};

enum class HarnessVerdict { Consistent, ViolationDetected, Inconclusive };
std::string_view to_string(HarnessVerdict v);

struct LipschitzHarnessReport {
  std::vector<ProbeResult> probes;
  HarnessVerdict verdict = HarnessVerdict::Inconclusive;
};

/// Lifts f o u along every probe on a dyadic grid of the given level and
/// certifies each lift. Consistent when every probe is at least Lipschitz,
/// violation when any shows an unbounded derivative.
LipschitzHarnessReport lipschitz_harness(const OrbitMapSigma& map, const BoxMap& f, const std::vector<Probe>& probes,
                                         int level, const LiftOptions& options = {});

}  // namespace hyperlift
