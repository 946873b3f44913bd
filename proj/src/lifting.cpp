#include <hyperlift/lifting.hpp>

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hyperlift {

namespace {

using Points = std::vector<Eigen::VectorXd>;

Points fiber_at(const OrbitMapSigma& map, const CoeffCurve& c, double t, double tol) {
  Points f = fiber(map, c(t), tol);
  if (f.empty()) throw TimedError(ErrorKind::NotInImageAt, t, "c(t) has no preimage under sigma");
  return f;
}

struct Nearest {
  std::size_t index = 0;
  double d1 = std::numeric_limits<double>::infinity();
  double d2 = std::numeric_limits<double>::infinity();
};

Nearest nearest(const Points& f, const Eigen::VectorXd& p) {
  Nearest n;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = (f[i] - p).norm();
    if (d < n.d1) {
      n.d2 = n.d1;
      n.d1 = d;
      n.index = i;
    } else if (d < n.d2) {
      n.d2 = d;
    }
  }
  return n;
}

bool clear(const Nearest& n) { return n.d1 <= 0.25 * n.d2; }

/// Least-squares polynomial of degree <= 2 through rows of X at times t.
struct LocalFit {
  double t0 = 0.0, h = 1.0;
  Eigen::MatrixXd coef;  // (degree+1) x dim

  LocalFit(const std::vector<double>& t, const Eigen::MatrixXd& X, double step) : t0(t.front()), h(step) {
    const auto m = static_cast<Eigen::Index>(t.size());
    const Eigen::Index deg = std::min<Eigen::Index>(2, m - 1);
    Eigen::MatrixXd V(m, deg + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double tau = (t[static_cast<std::size_t>(i)] - t0) / h;
      for (Eigen::Index j = 0; j <= deg; ++j) V(i, j) = std::pow(tau, static_cast<double>(j));
    }
    coef = V.colPivHouseholderQr().solve(X);
  }

  Eigen::VectorXd operator()(double t) const {
    const double tau = (t - t0) / h;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(coef.cols());
    double p = 1.0;
    for (Eigen::Index j = 0; j < coef.rows(); ++j, p *= tau) out += p * coef.row(j).transpose();
    return out;
  }
};

class Tracker {
 public:
  Tracker(const OrbitMapSigma& map, const CoeffCurve& c, const Grid& grid, const LiftOptions& opt)
      : map_(map), c_(c), grid_(grid), opt_(opt) {
    fibers_.reserve(static_cast<std::size_t>(grid.size()));
    for (Eigen::Index i = 0; i < grid.size(); ++i) fibers_.push_back(fiber_at(map, c, grid[i], opt.tol));
  }

  LiftResult run() {
    const Eigen::Index N = grid_.size();
    const int dim = map_.group.dim();
    std::size_t maxcard = 0;
    double scale = 1.0;
    for (const auto& f : fibers_) {
      maxcard = std::max(maxcard, f.size());
      scale = std::max(scale, 1.0 + f.front().norm());
    }
    const double eps = opt_.eps_fraction * scale;

    // the gap to the nearest other fiber point is the same for every orbit point
    std::vector<bool> tight(static_cast<std::size_t>(N));
    for (Eigen::Index i = 0; i < N; ++i) {
      const Points& f = fibers_[static_cast<std::size_t>(i)];
      double gap = std::numeric_limits<double>::infinity();
      if (f.size() < maxcard) {
        gap = 0.0;
      } else {
        for (std::size_t j = 1; j < f.size(); ++j) gap = std::min(gap, (f[j] - f[0]).norm());
      }
      tight[static_cast<std::size_t>(i)] = gap < eps;
    }

    LiftResult res;
    res.grid = grid_;
    res.group = map_.group;
    X_ = Eigen::MatrixXd::Zero(N, dim);

    std::vector<std::pair<Eigen::Index, Eigen::Index>> windows;
    for (Eigen::Index i = 0; i < N;) {
      if (!tight[static_cast<std::size_t>(i)]) {
        ++i;
        continue;
      }
      Eigen::Index j = i;
      while (j + 1 < N && tight[static_cast<std::size_t>(j + 1)]) ++j;
      windows.emplace_back(i, j);
      i = j + 1;
    }
    for (const auto& [a, b] : windows) {
      CollisionCluster cc;
      cc.first = a;
      cc.last = b;
      cc.window = {grid_[a], grid_[b]};
      res.collisions.push_back(cc);
    }

    if (windows.size() == 1 && windows.front().first == 0 && windows.front().second == N - 1) {
      X_.row(0) = fibers_[0].front().transpose();
      for (Eigen::Index i = 1; i < N; ++i) {
        Eigen::VectorXd p = X_.row(i - 1).transpose();
        if (i >= 2) p = 2.0 * p - X_.row(i - 2).transpose();
        X_.row(i) = pick(i, p).transpose();
      }
      return res;
    }

    // segments between windows
    std::size_t w = 0;
    Eigen::Index s = 0;
    if (!windows.empty() && windows.front().first == 0) {
      s = windows.front().second + 1;
      w = 1;
    }
    Eigen::Index seg_end = (w < windows.size()) ? windows[w].first - 1 : N - 1;
    track_segment(s, seg_end, fibers_[static_cast<std::size_t>(s)].front(), X_);
    if (s > 0) {
      LocalFit right = fit(X_, s, std::min(seg_end, s + opt_.slope_window - 1));
      for (Eigen::Index i = s - 1; i >= 0; --i) X_.row(i) = pick(i, right(grid_[i])).transpose();
    }

    for (; w < windows.size(); ++w) {
      const auto [a, b] = windows[w];
      LocalFit left = fit(X_, std::max(s, a - opt_.slope_window), a - 1);
      if (b == N - 1) {
        for (Eigen::Index i = a; i < N; ++i) X_.row(i) = pick(i, left(grid_[i])).transpose();
        break;
      }
      const Eigen::Index next_s = b + 1;
      const Eigen::Index next_end = (w + 1 < windows.size()) ? windows[w + 1].first - 1 : N - 1;
      Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(N, dim);
      track_segment(next_s, next_end, fibers_[static_cast<std::size_t>(next_s)].front(), Y);
      LocalFit right = fit(Y, next_s, std::min(next_end, next_s + opt_.slope_window - 1));

      const Eigen::VectorXd left_at_b = left(grid_[next_s]);
      const Eigen::VectorXd right_at_a = right(grid_[a - 1]);
      const Eigen::VectorXd x_a = X_.row(a - 1).transpose();
      const Eigen::VectorXd y_b = Y.row(next_s).transpose();
      const auto& elems = map_.group.elements();
      std::size_t best = 0;
      double best_cost = std::numeric_limits<double>::infinity();
      for (std::size_t gi = 0; gi < elems.size(); ++gi) {
        const double cost = (left_at_b - elems[gi] * y_b).norm() + (elems[gi] * right_at_a - x_a).norm();
        if (cost < best_cost) {
          best_cost = cost;
          best = gi;
        }
      }
      // runner-up among translates that actually differ
      double runner = std::numeric_limits<double>::infinity();
      const Eigen::VectorXd best_pt = elems[best] * y_b;
      for (std::size_t gi = 0; gi < elems.size(); ++gi) {
        if ((elems[gi] * y_b - best_pt).norm() <= 1e-9 * scale) continue;
        runner = std::min(runner, (left_at_b - elems[gi] * y_b).norm() + (elems[gi] * right_at_a - x_a).norm());
      }
      if (runner - best_cost <= opt_.tie_tol * scale) {
        res.unresolved.push_back(res.collisions[w]);
        if (opt_.throw_on_unresolved) {
          throw Error(ErrorKind::UnresolvedCollision, "tie across collision window [" + std::to_string(grid_[a]) +
                                                          ", " + std::to_string(grid_[b]) + "]");
        }
      }
      const Eigen::MatrixXd& g = elems[best];
      for (Eigen::Index i = next_s; i <= next_end; ++i) X_.row(i) = (g * Y.row(i).transpose()).transpose();
      const double ta = grid_[a - 1], tb = grid_[next_s];
      for (Eigen::Index i = a; i <= b; ++i) {
        const double lam = (grid_[i] - ta) / (tb - ta);
        const Eigen::VectorXd target = (1.0 - lam) * left(grid_[i]) + lam * (g * right(grid_[i]));
        X_.row(i) = pick(i, target).transpose();
      }
      s = next_s;
    }
    return res;
  }

  Eigen::MatrixXd take_values() { return std::move(X_); }

 private:
  Eigen::VectorXd pick(Eigen::Index i, const Eigen::VectorXd& target) const {
    const Points& f = fibers_[static_cast<std::size_t>(i)];
    return f[nearest(f, target).index];
  }

  LocalFit fit(const Eigen::MatrixXd& X, Eigen::Index from, Eigen::Index to) const {
    std::vector<double> t;
    for (Eigen::Index i = from; i <= to; ++i) t.push_back(grid_[i]);
    return LocalFit(t, X.middleRows(from, to - from + 1), grid_.step());
  }

  /// Step from time t0 (value x0, velocity v0 if known) to t1 whose fiber is f1.
  Eigen::VectorXd advance(const Eigen::VectorXd& x0, const Eigen::VectorXd* v0, double t0, double t1,
                          const Points& f1) const {
    const double dt = t1 - t0;
    Eigen::VectorXd p = v0 ? Eigen::VectorXd(x0 + dt * *v0) : x0;
    Nearest n = nearest(f1, p);
    if (clear(n)) return f1[n.index];
    const int max_r = std::min(opt_.max_refinements, 12);
    for (int r = 1; r <= max_r; ++r) {
      const int m = 1 << r;
      const double d = dt / m;
      Eigen::VectorXd z = x0;
      bool has_v = v0 != nullptr;
      Eigen::VectorXd v = has_v ? *v0 : Eigen::VectorXd::Zero(x0.size());
      bool ok = true;
      for (int k = 1; k <= m && ok; ++k) {
        const Points fk = (k == m) ? f1 : fiber_at(map_, c_, t0 + k * d, opt_.tol);
        const Eigen::VectorXd pk = has_v ? Eigen::VectorXd(z + d * v) : z;
        Nearest nk = nearest(fk, pk);
        ok = clear(nk);
        v = (fk[nk.index] - z) / d;
        has_v = true;
        z = fk[nk.index];
      }
      if (ok) return z;
    }
    return f1[n.index];
  }

  void track_segment(Eigen::Index first, Eigen::Index last, const Eigen::VectorXd& start, Eigen::MatrixXd& X) const {
    X.row(first) = start.transpose();
    const double h = grid_.step();
    for (Eigen::Index i = first + 1; i <= last; ++i) {
      Eigen::VectorXd v;
      if (i - 2 >= first) v = (X.row(i - 1) - X.row(i - 2)).transpose() / h;
      X.row(i) = advance(X.row(i - 1).transpose(), i - 2 >= first ? &v : nullptr, grid_[i - 1], grid_[i],
                         fibers_[static_cast<std::size_t>(i)])
                     .transpose();
    }
  }

  const OrbitMapSigma& map_;
  const CoeffCurve& c_;
  const Grid& grid_;
  const LiftOptions& opt_;
  std::vector<Points> fibers_;
  Eigen::MatrixXd X_;
};

void finalize(LiftResult& res, const OrbitMapSigma& map, const CoeffCurve& c, const LiftOptions& opt) {
  double scaled = 0.0;
  res.residual = 0.0;
  for (Eigen::Index i = 0; i < res.grid.size(); ++i) {
    const Eigen::VectorXd y = c(res.grid[i]);
    const double err = (sigma(map, res.values.row(i).transpose()) - y).cwiseAbs().maxCoeff();
    res.residual = std::max(res.residual, err);
    scaled = std::max(scaled, err / (1.0 + y.cwiseAbs().maxCoeff()));
  }
  if (scaled > 10 * opt.tol) {
    throw Error(ErrorKind::ToleranceViolation, "lift residual " + std::to_string(scaled) + " exceeds 10 tol");
  }
  res.certified = false;
  res.coordinate_reports.clear();
  if (opt.certify && res.grid.is_full() && res.grid.level() - opt.certify_levels >= 1) {
    res.report = certify_samples(res.values, res.grid, opt.certify_levels);
    for (Eigen::Index j = 0; j < res.values.cols(); ++j) {
      res.coordinate_reports.push_back(certify_samples(res.values.col(j), res.grid, opt.certify_levels));
    }
    res.certified = true;
  }
}

}  // namespace

LiftResult lift_curve(const OrbitMapSigma& map, const CoeffCurve& c, const Grid& grid, const LiftOptions& opt) {
  if (c.dims() != map.n_invariants()) {
    throw Error(ErrorKind::DimensionMismatch, "curve has " + std::to_string(c.dims()) + " components, " +
                                                  map.group.spec() + " has " + std::to_string(map.n_invariants()) +
                                                  " invariants");
  }
  if (grid.size() < 2) throw Error(ErrorKind::GridTooCoarse, "lift needs at least two grid points");
  LiftResult res;
  if (map.group.kind() == GroupKind::A) {
    SelectionOptions so;
    so.tol = opt.tol;
    so.eps_fraction = opt.eps_fraction;
    so.slope_window = opt.slope_window;
    so.max_refinements = opt.max_refinements;
    so.tie_tol = opt.tie_tol;
    so.throw_on_unresolved = opt.throw_on_unresolved;
    RootBranches b;
    try {
      b = differentiable_selection(c, grid, so);
    } catch (const TimedError& e) {
      if (e.kind() != ErrorKind::NotHyperbolicAt) throw;
      throw TimedError(ErrorKind::NotInImageAt, e.t(), "c(t) has no preimage under sigma");
    }
    res.grid = grid;
    res.group = map.group;
    res.values = std::move(b.values);
    res.swap_log = std::move(b.swap_log);
    res.collisions = collision_clusters(sorted_branches(c, grid, opt.tol), b.eps);
    res.unresolved = std::move(b.unresolved);
  } else {
    Tracker tr(map, c, grid, opt);
    res = tr.run();
    res.values = tr.take_values();
  }
  finalize(res, map, c, opt);
  return res;
}

double verify_lift(const OrbitMapSigma& map, const LiftResult& lift, const CoeffCurve& c) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < lift.grid.size(); ++i) {
    r = std::max(r, (sigma(map, lift.values.row(i).transpose()) - c(lift.grid[i])).cwiseAbs().maxCoeff());
  }
  return r;
}

LiftResult transform_lift(const LiftResult& lift, const Eigen::MatrixXd& g, const OrbitMapSigma& map,
                          const CoeffCurve& c, const LiftOptions& opt) {
  if (g.rows() != lift.values.cols() || g.cols() != lift.values.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "group element does not act on the lift's space");
  }
  LiftResult out = lift;
  out.values = lift.values * g.transpose();
  finalize(out, map, c, opt);
  return out;
}

std::string_view to_string(HarnessVerdict v) {
  switch (v) {
    case HarnessVerdict::Consistent: return "locally-lipschitz-consistent";
    case HarnessVerdict::ViolationDetected: return "violation-detected";
    case HarnessVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

LipschitzHarnessReport lipschitz_harness(const OrbitMapSigma& map, const BoxMap& f, const std::vector<Probe>& probes,
                                         int level, const LiftOptions& opt) {
  if (probes.empty()) throw Error(ErrorKind::InvalidInput, "harness needs at least one probe");
  LipschitzHarnessReport rep;
  bool all_lipschitz = true, violation = false;
  for (const Probe& pr : probes) {
    auto path = pr.path;
    CoeffCurve curve = CoeffCurve::from_function(
        map.n_invariants(), [f, path](double s) { return f(path(s)); }, pr.domain);
    Grid grid(pr.domain, level);
    LiftResult lift = lift_curve(map, curve, grid, opt);

    ProbeResult r;
    r.name = pr.name;
    r.residual = lift.residual;
    r.unresolved = !lift.unresolved.empty();
    r.verdict = lift.certified ? lift.report.verdict : Verdict::Inconclusive;
    Eigen::MatrixXd d1(lift.values.rows(), lift.values.cols());
    for (Eigen::Index j = 0; j < lift.values.cols(); ++j) {
      d1.col(j) = difference_quotients(lift.values.col(j), grid.step(), 1);
    }
    const Eigen::VectorXd speed = d1.rowwise().norm();
    r.lipschitz = speed.maxCoeff();
    r.subwindow_lipschitz.assign(4, 0.0);
    const double lo = pr.domain.lo, width = pr.domain.width();
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const int q = std::clamp(static_cast<int>((grid[i] - lo) / width * 4.0), 0, 3);
      r.subwindow_lipschitz[static_cast<std::size_t>(q)] =
          std::max(r.subwindow_lipschitz[static_cast<std::size_t>(q)], speed[i]);
    }
    all_lipschitz = all_lipschitz && at_least(r.verdict, Verdict::Lipschitz);
    violation = violation || r.verdict == Verdict::UnboundedDerivative;
    rep.probes.push_back(std::move(r));
  }
  rep.verdict = violation       ? HarnessVerdict::ViolationDetected
                : all_lipschitz ? HarnessVerdict::Consistent
                                : HarnessVerdict::Inconclusive;
  return rep;
}

}  // namespace hyperlift
