#include <hyperlift/assignment.hpp>
#include <hyperlift/hyperpoly.hpp>
#include <hyperlift/rootflow.hpp>

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hyperlift {

Eigen::VectorXd sorted_roots_at(const CoeffCurve& curve, double t, double tol) {
  Eigen::VectorXd a = curve(t);
  try {
    return roots(MonicHyperbolic<double>(std::move(a)), tol).values();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotHyperbolic) throw;
    throw TimedError(ErrorKind::NotHyperbolicAt, t, "polynomial has a complex pair");
  }
}

RootBranches sorted_branches(const CoeffCurve& curve, const Grid& grid, double tol) {
  RootBranches b;
  b.grid = grid;
  b.kind = SelectionKind::Sorted;
  b.values.resize(grid.size(), curve.dims());
  for (Eigen::Index i = 0; i < grid.size(); ++i) b.values.row(i) = sorted_roots_at(curve, grid[i], tol).transpose();
  return b;
}

namespace {

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

double root_range(const Eigen::MatrixXd& sorted) {
  if (sorted.size() == 0) return 0.0;
  return sorted.col(sorted.cols() - 1).maxCoeff() - sorted.col(0).minCoeff();
}

/// Least-squares polynomial (degree <= 2) through (t, y), expressed around tc.
struct LocalFit {
  double value = 0.0;
  double slope = 0.0;
  double curvature = 0.0;  // coefficient of (t - tc)^2
};

LocalFit fit_local(const Eigen::VectorXd& t, const Eigen::VectorXd& y, double tc, double length) {
  const Eigen::Index m = t.size();
  LocalFit f;
  if (m == 0) return f;
  if (m == 1) {
    f.value = y[0];
    return f;
  }
  const int degree = m >= 3 ? 2 : 1;
  Eigen::MatrixXd V(m, degree + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double u = (t[i] - tc) / length;
    V(i, 0) = 1.0;
    V(i, 1) = u;
    if (degree == 2) V(i, 2) = u * u;
  }
  Eigen::VectorXd c = V.colPivHouseholderQr().solve(y);
  f.value = c[0];
  f.slope = c[1] / length;
  if (degree == 2) f.curvature = c[2] / (length * length);
  return f;
}

struct SideFits {
  std::vector<LocalFit> fits;  // one per involved branch, in sorted order
  bool ok = false;
};

}  // namespace

std::vector<CollisionCluster> collision_clusters(const RootBranches& b, double eps) {
  const Eigen::Index N = b.values.rows();
  const Eigen::Index n = b.values.cols();
  std::vector<CollisionCluster> out;
  if (n < 2 || N == 0) return out;
  const Eigen::Index pairs = n - 1;
  auto id = [&](Eigen::Index i, Eigen::Index p) { return static_cast<std::size_t>(i * pairs + p); };
  auto close = [&](Eigen::Index i, Eigen::Index p) { return b.values(i, p + 1) - b.values(i, p) < eps; };

  DisjointSet ds(static_cast<std::size_t>(N * pairs));
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index p = 0; p < pairs; ++p) {
      if (!close(i, p)) continue;
      if (i + 1 < N && close(i + 1, p)) ds.unite(id(i, p), id(i + 1, p));
      if (p + 1 < pairs && close(i, p + 1)) ds.unite(id(i, p), id(i, p + 1));
    }
  }
  // components are keyed by their smallest node id, which is also the
  // earliest (time, pair) entry, so first-seen order is time order
  std::vector<long> slot(static_cast<std::size_t>(N * pairs), -1);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index p = 0; p < pairs; ++p) {
      if (!close(i, p)) continue;
      const std::size_t root = ds.find(id(i, p));
      if (slot[root] < 0) {
        slot[root] = static_cast<long>(out.size());
        CollisionCluster c;
        c.first = c.last = i;
        c.branches = {static_cast<int>(p), static_cast<int>(p + 1)};
        c.min_gap = b.values(i, p + 1) - b.values(i, p);
        out.push_back(c);
      }
      CollisionCluster& c = out[static_cast<std::size_t>(slot[root])];
      c.last = std::max(c.last, i);
      c.branches.front() = std::min(c.branches.front(), static_cast<int>(p));
      c.branches.back() = std::max(c.branches.back(), static_cast<int>(p + 1));
      c.min_gap = std::min(c.min_gap, b.values(i, p + 1) - b.values(i, p));
    }
  }
  for (auto& c : out) {
    std::vector<int> all(static_cast<std::size_t>(c.branches.back() - c.branches.front() + 1));
    std::iota(all.begin(), all.end(), c.branches.front());
    c.branches = std::move(all);
    c.window = {b.grid[c.first], b.grid[c.last]};
  }
  std::stable_sort(out.begin(), out.end(), [](const CollisionCluster& x, const CollisionCluster& y) {
    return x.first != y.first ? x.first < y.first : x.branches.front() < y.branches.front();
  });
  return out;
}

RootBranches differentiable_selection(const CoeffCurve& curve, const Grid& grid, double tol) {
  SelectionOptions o;
  o.tol = tol;
  return differentiable_selection(curve, grid, o);
}

RootBranches differentiable_selection(const CoeffCurve& curve, const Grid& grid, const SelectionOptions& opt) {
  const RootBranches sorted = sorted_branches(curve, grid, opt.tol);
  const Eigen::Index N = sorted.values.rows();
  const Eigen::Index n = sorted.values.cols();
  const double range = root_range(sorted.values);
  const double eps = opt.eps > 0 ? opt.eps : range * opt.eps_fraction;
  const double slope_scale = range > 0 ? range / grid.window().width() : 1.0;
  const double h = grid.step();

  RootBranches out;
  out.grid = grid;
  out.kind = SelectionKind::Differentiable;
  out.eps = eps;
  out.values = sorted.values;

  const std::vector<CollisionCluster> clusters = collision_clusters(sorted, eps);

  // pairing applied from switch index on: sorted index -> sorted index
  struct Event {
    Eigen::Index at;
    std::vector<int> map;
  };
  std::vector<Event> events;

  auto overlaps = [](const CollisionCluster& x, const CollisionCluster& y) {
    return x.branches.front() <= y.branches.back() && y.branches.front() <= x.branches.back();
  };

  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    const CollisionCluster& c = clusters[ci];
    // clusters touching the domain boundary have no side to match against
    if (c.first == 0 || c.last == N - 1) continue;

    // available samples on each side, stopping at neighbouring clusters on the same branches
    Eigen::Index left_limit = 0, right_limit = N - 1;
    for (std::size_t cj = 0; cj < clusters.size(); ++cj) {
      if (cj == ci || !overlaps(c, clusters[cj])) continue;
      if (clusters[cj].last < c.first) left_limit = std::max(left_limit, clusters[cj].last + 1);
      if (clusters[cj].first > c.last) right_limit = std::min(right_limit, clusters[cj].first - 1);
    }
    const Eigen::Index m_left = std::min<Eigen::Index>(opt.slope_window, c.first - left_limit);
    const Eigen::Index m_right = std::min<Eigen::Index>(opt.slope_window, right_limit - c.last);
    const std::size_t k = c.branches.size();
    const int j0 = c.branches.front();
    const double tc = 0.5 * (grid[c.first] + grid[c.last]);

    auto side_fits = [&](int r, bool left) {
      const Eigen::Index m = left ? m_left : m_right;
      SideFits s;
      if (m < 2) return s;
      // lattice index of the last sample outside the cluster, at level + r
      const std::int64_t anchor = (grid.first_index() + (left ? c.first - 1 : c.last + 1)) << r;
      const Grid fine(grid.domain(), grid.level() + r);
      Eigen::VectorXd t(m);
      Eigen::MatrixXd y(m, static_cast<Eigen::Index>(k));
      for (Eigen::Index j = 0; j < m; ++j) {
        const std::int64_t idx = left ? anchor - j : anchor + j;
        t[j] = fine.lattice_point(idx);
        Eigen::VectorXd roots_t;
        if (r == 0) {
          roots_t = sorted.values.row(left ? c.first - 1 - j : c.last + 1 + j).transpose();
        } else {
          roots_t = sorted_roots_at(curve, t[j], opt.tol);
        }
        y.row(j) = roots_t.segment(j0, static_cast<Eigen::Index>(k)).transpose();
      }
      const double len = static_cast<double>(m) * h / std::ldexp(1.0, r);
      for (std::size_t b = 0; b < k; ++b) s.fits.push_back(fit_local(t, y.col(static_cast<Eigen::Index>(b)), tc, len));
      s.ok = true;
      return s;
    };

    SideFits left = side_fits(0, true), right = side_fits(0, false);
    bool resolved = left.ok && right.ok;
    bool stable = false;
    for (int r = 1; resolved && r <= opt.max_refinements; ++r) {
      SideFits l2 = side_fits(r, true), r2 = side_fits(r, false);
      double change = 0.0;
      for (std::size_t b = 0; b < k; ++b) {
        change = std::max(change, std::abs(l2.fits[b].slope - left.fits[b].slope) /
                                      std::max(std::abs(l2.fits[b].slope), slope_scale));
        change = std::max(change, std::abs(r2.fits[b].slope - right.fits[b].slope) /
                                      std::max(std::abs(r2.fits[b].slope), slope_scale));
      }
      left = std::move(l2);
      right = std::move(r2);
      if (change <= opt.slope_rel_change) {
        stable = true;
        break;
      }
    }
    resolved = resolved && stable;

    std::vector<int> pairing(k);
    std::iota(pairing.begin(), pairing.end(), 0);
    if (resolved) {
      const double tie = opt.tie_tol * slope_scale;
      const auto kk = static_cast<Eigen::Index>(k);
      Eigen::MatrixXd cost(kk, kk);
      for (Eigen::Index a = 0; a < kk; ++a)
        for (Eigen::Index b = 0; b < kk; ++b)
          cost(a, b) = std::abs(left.fits[static_cast<std::size_t>(a)].slope - right.fits[static_cast<std::size_t>(b)].slope);
      Assignment best = min_cost_assignment(cost, tie);
      if (best.runner_up - best.cost <= tie) {
        // first-order tie: add the curvature mismatch
        const double len = static_cast<double>(opt.slope_window) * h;
        for (Eigen::Index a = 0; a < kk; ++a)
          for (Eigen::Index b = 0; b < kk; ++b)
            cost(a, b) += 2.0 * len *
                          std::abs(left.fits[static_cast<std::size_t>(a)].curvature -
                                   right.fits[static_cast<std::size_t>(b)].curvature);
        best = min_cost_assignment(cost, tie);
        if (best.runner_up - best.cost <= tie) {
          // still ambiguous: fine when the branches stay merged on both sides
          bool merged = true;
          for (std::size_t b = 1; b < k; ++b) {
            merged = merged && std::abs(left.fits[b].value - left.fits[b - 1].value) < eps &&
                     std::abs(right.fits[b].value - right.fits[b - 1].value) < eps;
          }
          if (!merged) resolved = false;
          best.perm = pairing;
        }
      }
      if (resolved) pairing = best.perm;
    }

    if (!resolved) {
      if (opt.throw_on_unresolved) {
        throw TimedError(ErrorKind::UnresolvedCollision, tc, "one-sided slopes did not stabilise");
      }
      out.unresolved.push_back(c);
      continue;
    }
    bool identity = true;
    for (std::size_t b = 0; b < k; ++b) identity = identity && pairing[b] == static_cast<int>(b);
    if (identity) continue;

    Event e;
    e.at = (c.first + c.last + 1) / 2;
    e.map.resize(static_cast<std::size_t>(n));
    std::iota(e.map.begin(), e.map.end(), 0);
    for (std::size_t b = 0; b < k; ++b) e.map[static_cast<std::size_t>(j0) + b] = j0 + pairing[b];
    events.push_back(std::move(e));
  }

  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.at < b.at; });
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t next = 0;
  for (Eigen::Index i = 0; i < N; ++i) {
    bool changed = false;
    while (next < events.size() && events[next].at == i) {
      for (auto& p : perm) p = events[next].map[static_cast<std::size_t>(p)];
      ++next;
      changed = true;
    }
    if (changed) out.swap_log.push_back({i, perm});
    for (Eigen::Index l = 0; l < n; ++l) out.values(i, l) = sorted.values(i, perm[static_cast<std::size_t>(l)]);
  }
  return out;
}

}  // namespace hyperlift
