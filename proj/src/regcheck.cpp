#include <hyperlift/errors.hpp>
#include <hyperlift/regcheck.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hyperlift {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::UnboundedDerivative: return "unbounded-derivative-detected";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Lipschitz: return "lipschitz";
    case Verdict::DifferentiableBoundedDerivative: return "differentiable-bounded-derivative";
    case Verdict::C1: return "C1";
    case Verdict::TwiceDifferentiable: return "twice-differentiable";
  }
  return "inconclusive";
}

Verdict parse_verdict(std::string_view text) {
  for (Verdict v : {Verdict::UnboundedDerivative, Verdict::Inconclusive, Verdict::Lipschitz,
                    Verdict::DifferentiableBoundedDerivative, Verdict::C1, Verdict::TwiceDifferentiable}) {
    if (to_string(v) == text) return v;
  }
  throw Error(ErrorKind::InvalidInput, "unknown verdict '" + std::string(text) + "'");
}

int rank(Verdict v) { return static_cast<int>(v); }

Eigen::VectorXd difference_quotients(const Eigen::Ref<const Eigen::VectorXd>& f, double h, int order) {
  const Eigen::Index n = f.size();
  if (order != 1 && order != 2) throw Error(ErrorKind::InvalidInput, "order must be 1 or 2");
  if (n < order + 1) throw Error(ErrorKind::GridTooCoarse, "need at least order+1 samples");
  Eigen::VectorXd d(n);
  if (order == 1) {
    if (n == 2) {
      d.setConstant((f[1] - f[0]) / h);
      return d;
    }
    d[0] = (f[1] - f[0]) / h;
    d[n - 1] = (f[n - 1] - f[n - 2]) / h;
    for (Eigen::Index i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2 * h);
    return d;
  }
  const double h2 = h * h;
  for (Eigen::Index i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2 * f[i] + f[i - 1]) / h2;
  d[0] = d[1];
  d[n - 1] = d[n - 2];
  return d;
}

Eigen::VectorXd difference_quotients(const Eigen::Ref<const Eigen::VectorXd>& samples, const Grid& grid,
                                     int order) {
  if (samples.size() != grid.size()) throw Error(ErrorKind::DimensionMismatch, "samples do not match grid");
  return difference_quotients(samples, grid.step(), order);
}

namespace {

struct SupAt {
  double value = 0.0;
  double at = 0.0;

  void offer(double v, double t) {
    if (v > value) {
      value = v;
      at = t;
    }
  }
};

/// sup over fine points of |fine - linear interpolation of coarse|.
SupAt cauchy_gap(const Eigen::VectorXd& coarse, const Eigen::VectorXd& fine, const Grid& fine_grid) {
  SupAt s;
  for (Eigen::Index j = 0; j < fine.size(); ++j) {
    const double interp = (j % 2 == 0) ? coarse[j / 2] : 0.5 * (coarse[(j - 1) / 2] + coarse[(j + 1) / 2]);
    s.offer(std::abs(fine[j] - interp), fine_grid[j]);
  }
  return s;
}

double ratio(double next, double prev, double floor) {
  if (next <= floor && prev <= floor) return 1.0;
  if (prev <= floor) return std::numeric_limits<double>::infinity();
  return next / prev;
}

double decay_ratio(double next, double prev, double floor) {
  if (next <= floor) return 0.0;
  if (prev <= floor) return std::numeric_limits<double>::infinity();
  return next / prev;
}

template <typename Pred>
bool all_of(const std::vector<double>& v, Pred p) {
  return !v.empty() && std::all_of(v.begin(), v.end(), p);
}

}  // namespace

RegularityReport certify(const GridSampler& values, Interval domain, int levels,
                         const RegularityThresholds& th) {
  if (levels < 4) throw Error(ErrorKind::InvalidInput, "certify needs levels >= 4");
  if (th.base_level < 1) throw Error(ErrorKind::GridTooCoarse, "base level must be at least 1");
  if (th.trailing < 1 || th.trailing > levels - 1) {
    throw Error(ErrorKind::InvalidInput, "trailing ratio count must lie in [1, levels-1]");
  }

  RegularityReport rep;
  rep.domain = domain;
  rep.thresholds = th;

  std::vector<Eigen::MatrixXd> d1s, d2s;
  std::vector<Grid> grids;
  double range_last = 0.0;
  for (int k = th.base_level; k <= th.base_level + levels; ++k) {
    Grid g(domain, k);
    Eigen::MatrixXd m = values(g);
    if (m.rows() != g.size()) throw Error(ErrorKind::DimensionMismatch, "sampler returned wrong row count");
    rep.components = static_cast<int>(m.cols());
    Eigen::MatrixXd d1(m.rows(), m.cols()), d2(m.rows(), m.cols());
    LevelEvidence ev;
    ev.level = k;
    ev.step = g.step();
    SupAt s1, s2, jump;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      d1.col(c) = difference_quotients(m.col(c), g.step(), 1);
      d2.col(c) = difference_quotients(m.col(c), g.step(), 2);
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        s1.offer(std::abs(d1(i, c)), g[i]);
        s2.offer(std::abs(d2(i, c)), g[i]);
        if (i >= 1 && i + 1 < m.rows()) jump.offer(std::abs(d1(i + 1, c) - d1(i - 1, c)), g[i]);
      }
    }
    ev.sup_d1 = s1.value;
    ev.witness_d1 = s1.at;
    ev.sup_d2 = s2.value;
    ev.witness_d2 = s2.at;
    ev.jump_d1 = jump.value;
    ev.witness_jump = jump.at;
    ev.cauchy_d1 = ev.cauchy_d2 = std::numeric_limits<double>::quiet_NaN();
    ev.witness_cauchy_d1 = ev.witness_cauchy_d2 = std::numeric_limits<double>::quiet_NaN();
    if (!rep.evidence.empty()) {
      LevelEvidence& prev = rep.evidence.back();
      SupAt c1, c2;
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        SupAt a = cauchy_gap(d1s.back().col(c), d1.col(c), g);
        SupAt b = cauchy_gap(d2s.back().col(c), d2.col(c), g);
        c1.offer(a.value, a.at);
        c2.offer(b.value, b.at);
      }
      prev.cauchy_d1 = c1.value;
      prev.witness_cauchy_d1 = c1.at;
      prev.cauchy_d2 = c2.value;
      prev.witness_cauchy_d2 = c2.at;
    }
    range_last = 0.0;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      range_last = std::max(range_last, m.col(c).maxCoeff() - m.col(c).minCoeff());
    }
    rep.evidence.push_back(ev);
    d1s.push_back(std::move(d1));
    d2s.push_back(std::move(d2));
    grids.push_back(g);
  }

  const LevelEvidence& last = rep.evidence.back();
  const double width = domain.width();
  const double scale1 = std::max(last.sup_d1, range_last / width);
  const double scale2 = std::max(last.sup_d2, scale1 / width);
  const double floor1 = th.noise_floor * scale1;
  const double floor2 = th.noise_floor * scale2;

  const auto n = static_cast<int>(rep.evidence.size());
  for (int i = n - th.trailing; i < n; ++i) {
    rep.growth_d1.push_back(ratio(rep.evidence[i].sup_d1, rep.evidence[i - 1].sup_d1, floor1));
    rep.growth_d2.push_back(ratio(rep.evidence[i].sup_d2, rep.evidence[i - 1].sup_d2, floor2));
  }
  // cauchy entries exist for levels 0 .. n-2
  for (int i = n - 1 - th.trailing; i < n - 1; ++i) {
    rep.decay_d1.push_back(decay_ratio(rep.evidence[i].cauchy_d1, rep.evidence[i - 1].cauchy_d1, floor1));
    rep.decay_d2.push_back(decay_ratio(rep.evidence[i].cauchy_d2, rep.evidence[i - 1].cauchy_d2, floor2));
  }

  const double blowup = th.unbounded_growth * (1.0 - th.growth_rel_slack);
  auto bounded = [&](double r) { return r <= th.bounded_growth; };
  auto contracts = [&](double r) { return r <= th.cauchy_decay; };
  auto shrinks = [&](double r) { return r <= th.differentiable_decay; };

  if (all_of(rep.growth_d1, [&](double r) { return r >= blowup; })) {
    rep.verdict = Verdict::UnboundedDerivative;
  } else if (all_of(rep.growth_d1, bounded)) {
    if (all_of(rep.decay_d1, contracts)) {
      rep.verdict = (all_of(rep.growth_d2, bounded) && all_of(rep.decay_d2, contracts))
                        ? Verdict::TwiceDifferentiable
                        : Verdict::C1;
    } else if (all_of(rep.decay_d1, shrinks)) {
      rep.verdict = Verdict::DifferentiableBoundedDerivative;
    } else {
      rep.verdict = Verdict::Lipschitz;
    }
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

RegularityReport certify_samples(const Eigen::MatrixXd& samples, const Grid& grid, int levels,
                                 RegularityThresholds th) {
  if (!grid.is_full()) throw Error(ErrorKind::InvalidInput, "subsampled certification needs a full dyadic grid");
  if (samples.rows() != grid.size()) throw Error(ErrorKind::DimensionMismatch, "samples do not match grid");
  th.base_level = grid.level() - levels;
  if (th.base_level < 1) {
    throw Error(ErrorKind::GridTooCoarse, "grid level " + std::to_string(grid.level()) + " too coarse for " +
                                              std::to_string(levels) + " levels");
  }
  const int finest = grid.level();
  auto sampler = [&](const Grid& g) {
    const Eigen::Index stride = Eigen::Index{1} << (finest - g.level());
    Eigen::MatrixXd out(g.size(), samples.cols());
    for (Eigen::Index i = 0; i < g.size(); ++i) out.row(i) = samples.row(i * stride);
    return out;
  };
  return certify(sampler, grid.domain(), levels, th);
}

}  // namespace hyperlift
