// Acceptance suite: one PASS/FAIL line per criterion.
// usage: acceptance <path-to-hyperlift-cli> <scratch-dir>

#include <hyperlift/catalog.hpp>
#include <hyperlift/hyperpoly.hpp>
#include <hyperlift/invariants.hpp>
#include <hyperlift/lifting.hpp>
#include <hyperlift/regcheck.hpp>
#include <hyperlift/rootflow.hpp>

#include <Eigen/LU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>

using namespace hyperlift;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

RootBranches select_entry(const CatalogEntry& e, int level) {
  return differentiable_selection(make_curve(e), Grid(e.domain, level), 1e-12);
}

RegularityReport certify_entry(const CatalogEntry& e, int level) {
  if (e.mode == ExampleMode::Select) {
    Grid grid(e.domain, level);
    return certify_samples(select_entry(e, level).values, grid, 4);
  }
  OrbitMapSigma map(ReflectionGroup::parse(e.group));
  return lift_curve(map, make_curve(e), Grid(e.domain, level)).report;
}

using Path = std::function<Eigen::VectorXd(double)>;

double distance_up_to_group(const LiftResult& lift, const Path& g) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& h : lift.group.elements()) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < lift.grid.size(); ++i) {
      worst = std::max(worst, (lift.values.row(i).transpose() - h * g(lift.grid[i])).cwiseAbs().maxCoeff());
    }
    best = std::min(best, worst);
  }
  return best;
}

// ------------------------------------------------------------------ 1

Outcome vieta_round_trip() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> entry(-10, 10);
  std::uniform_int_distribution<int> degree(1, 8);
  std::bernoulli_distribution repeat(0.15);
  // gated: independent uniform entries; reported: 15% of entries copied
  // from their neighbour, which double coefficients cannot always resolve
  double worst = 0.0, worst_repeat = 0.0;
  int missed_repeat = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const bool stress = trial >= 500;
    const int n = degree(rng);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = (stress && i > 0 && repeat(rng)) ? v[i - 1] : entry(rng);
    RootMultiset<double> rm(v);
    auto back = roots(from_roots(rm), 1e-10);
    const double e = (back.values() - rm.values()).cwiseAbs().maxCoeff();
    if (stress) {
      worst_repeat = std::max(worst_repeat, e);
      missed_repeat += e > 1e-7;
    } else {
      worst = std::max(worst, e);
    }
  }
  return {worst <= 1e-7, "500 uniform multisets, worst error " + num(worst) + "; with repeated entries (not gated) " +
                             std::to_string(missed_repeat) + "/500 above 1e-7, worst " + num(worst_repeat)};
}

// ------------------------------------------------------------------ 2

Outcome crossing_resolution() {
  auto c = CoeffCurve::from_expressions(parse_curve_list("0,-t^2"), {-1, 1});
  Grid grid({-1, 1}, 10);
  RootBranches d = differentiable_selection(c, grid, 1e-12);
  double err = std::numeric_limits<double>::infinity();
  for (int flip = 0; flip < 2; ++flip) {
    double e = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double t = grid[i];
      e = std::max({e, std::abs(d.values(i, flip) - t), std::abs(d.values(i, 1 - flip) + t)});
    }
    err = std::min(err, e);
  }
  RootBranches s = sorted_branches(c, grid, 1e-12);
  RegularityReport rs = certify_samples(s.values, grid, 4);
  const LevelEvidence& last = rs.evidence.back();
  const bool jump = std::abs(last.jump_d1 - 2.0) < 1e-9 && std::abs(last.witness_jump) <= grid.step();
  return {err < 1e-8 && jump, "differentiable sup error " + num(err) + ", sorted jump_d1 " + num(last.jump_d1) +
                                  " at t=" + num(last.witness_jump)};
}

// ------------------------------------------------------------------ 3

Outcome regularity_separation() {
  RegularityReport cross = certify_entry(find_example("crossing-lines"), 12);
  RegularityReport cusp = certify_entry(find_example("cusp-3-2"), 12);
  RegularityReport sq = certify_entry(find_example("sqrt-cusp"), 12);
  bool rates = sq.growth_d1.size() == 3;
  std::string g;
  for (double r : sq.growth_d1) {
    rates = rates && r >= 1.3 && r <= 1.5;
    g += num(r) + " ";
  }
  const bool ok = at_least(cross.verdict, Verdict::C1) && at_least(cusp.verdict, Verdict::C1) &&
                  sq.verdict == Verdict::UnboundedDerivative && rates;
  return {ok, "crossing-lines " + std::string(to_string(cross.verdict)) + ", cusp-3-2 " +
                  std::string(to_string(cusp.verdict)) + ", sqrt-cusp " + std::string(to_string(sq.verdict)) +
                  " growth " + g};
}

// ------------------------------------------------------------------ 4

Outcome sharpness() {
  bool ok = true;
  int flips = 0;
  std::string d;
  for (const auto& e : list_examples()) {
    if (e.lowered_from.empty()) continue;
    const Verdict above = certify_entry(find_example(e.lowered_from), 12).verdict;
    const Verdict below = certify_entry(e, 12).verdict;
    const bool flip = at_least(above, Verdict::C1) &&
                      (below == Verdict::UnboundedDerivative || below == Verdict::Inconclusive);
    ok = ok && flip;
    flips += flip;
    d += e.lowered_from + "->" + e.name + ": " + std::string(to_string(above)) + "->" +
         std::string(to_string(below)) + "; ";
  }
  return {ok && flips >= 2, d};
}

// ------------------------------------------------------------------ 5

// largest isotropy among generic points of Fix(g) cap Fix(h) cap V_i, over all pairs
std::int64_t exhaustive_max_isotropy(const ReflectionGroup& g, const Eigen::MatrixXd& B, std::mt19937_64& rng) {
  const auto& el = g.elements();
  const Eigen::Index dim = g.dim();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dim, dim);
  std::normal_distribution<double> n;
  std::int64_t best = 1;
  for (const auto& a : el) {
    for (const auto& b : el) {
      Eigen::MatrixXd M(2 * dim, B.cols());
      M << (a - I) * B, (b - I) * B;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      lu.setThreshold(1e-9);
      Eigen::MatrixXd K = lu.kernel();
      if (K.cols() == 0 || K.norm() == 0) continue;
      Eigen::VectorXd coef(K.cols());
      for (auto& x : coef) x = n(rng);
      Eigen::VectorXd u = B * (K * coef);
      if (u.norm() < 1e-9) continue;
      best = std::max(best, isotropy_order(g, u / u.norm()));
    }
  }
  return best;
}

Outcome k_data() {
  struct Want {
    std::string spec;
    int d, k;
  };
  std::vector<Want> want{{"A:2", 3, 3}, {"B:2", 4, 4}};
  for (int m = 3; m <= 8; ++m) want.push_back({"I2:" + std::to_string(m), m, m});
  bool ok = true;
  std::string bad;
  std::mt19937_64 rng(5);
  for (const auto& w : want) {
    auto g = ReflectionGroup::parse(w.spec);
    KData kd = compute_k(g, OrbitMapSigma(g), 7);
    bool good = kd.d == w.d && kd.k_value == w.k;
    for (const auto& r : kd.records) good = good && exhaustive_max_isotropy(g, r.basis, rng) == r.isotropy_order;
    if (!good) bad += " " + w.spec;
    ok = ok && good;
  }
  return {ok, ok ? "A:2, B:2, I2:3..8 match; isotropy confirmed by exhaustive search" : "mismatch:" + bad};
}

// ------------------------------------------------------------------ 6

Outcome fiber_orbit() {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n;
  int cases = 0;
  for (const char* s : {"A:1", "A:2", "B:2", "D:3", "I2:3", "I2:4", "I2:5", "I2:6"}) {
    OrbitMapSigma map(ReflectionGroup::parse(s));
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd v(map.group.dim());
      for (auto& x : v) x = n(rng);
      auto f = fiber(map, sigma(map, v), 1e-10);
      auto o = orbit(map.group, v);
      auto covered = [](const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b) {
        for (const auto& p : a) {
          if (std::none_of(b.begin(), b.end(), [&](const auto& q) { return (p - q).cwiseAbs().maxCoeff() <= 1e-7; }))
            return false;
        }
        return true;
      };
      if (f.size() != o.size() || !covered(f, o) || !covered(o, f)) {
        return {false, std::string(s) + " trial " + std::to_string(trial) + ": fiber differs from orbit"};
      }
      ++cases;
    }
  }
  return {true, std::to_string(cases) + " points on A:1, A:2, B:2, D:3, I2:3..6"};
}

// ------------------------------------------------------------------ 7

Outcome lift_contract() {
  double worst = 0.0;
  int positives = 0;
  for (const auto& e : list_examples()) {
    if (!e.positive) continue;
    OrbitMapSigma map(ReflectionGroup::parse(e.group));
    LiftResult l = lift_curve(map, make_curve(e), Grid(e.domain, 10));
    worst = std::max(worst, verify_lift(map, l, make_curve(e)));
    ++positives;
  }
  struct Case {
    std::string group;
    Path g;
  };
  std::vector<Case> cases{
      {"A:2", [](double t) -> Eigen::VectorXd { return Eigen::Vector3d(t, -t, 0.5 + t * t); }},
      {"B:2", [](double t) -> Eigen::VectorXd { return Eigen::Vector2d(t, 0.5 + t * t); }},
      {"B:3", [](double t) -> Eigen::VectorXd { return Eigen::Vector3d(std::sin(t), 0.3 + t, 1 - t * t / 2); }},
      {"D:3", [](double t) -> Eigen::VectorXd { return Eigen::Vector3d(t, 1 - t, 2 + t * t / 4); }},
      {"I2:3", [](double t) -> Eigen::VectorXd { return Eigen::Vector2d(std::cos(t), std::sin(t)); }},
      {"I2:5", [](double t) -> Eigen::VectorXd { return Eigen::Vector2d(1 + t / 3, std::exp(t) - 1.2); }},
  };
  bool ok = true;
  double far = 0.0;
  std::string bad;
  for (const auto& cs : cases) {
    OrbitMapSigma map(ReflectionGroup::parse(cs.group));
    auto g = cs.g;
    auto c = CoeffCurve::from_function(
        map.n_invariants(), [&map, g](double t) { return sigma(map, g(t)); }, {-1, 1});
    LiftResult l = lift_curve(map, c, Grid({-1, 1}, 10));
    const double dist = distance_up_to_group(l, g);
    far = std::max(far, dist);
    worst = std::max(worst, l.residual);
    const bool good = l.report.verdict == Verdict::TwiceDifferentiable && dist < 1e-7;
    if (!good) bad += " " + cs.group + "(" + std::string(to_string(l.report.verdict)) + ", " + num(dist) + ")";
    ok = ok && good;
  }
  ok = ok && worst < 1e-8;
  return {ok, std::to_string(positives) + " catalog + " + std::to_string(cases.size()) +
                  " composed lifts, worst residual " + num(worst) + ", worst distance to truth " + num(far) + bad};
}

// ------------------------------------------------------------------ 8

// the smooth map behind harness-b2-smooth and its Jacobian
Eigen::Matrix2d jacobian_b2(const Eigen::Vector2d& u) {
  Eigen::Matrix2d J;
  J << 1, 0.6 * u[1], 0.5 * u[0], 1;
  return J;
}

Outcome harness_bounds() {
  const HarnessExample& h = find_harness("harness-b2-smooth");
  OrbitMapSigma map(ReflectionGroup::parse(h.group));
  LipschitzHarnessReport rep = lipschitz_harness(map, h.f, h.probes, 10);
  bool ok = rep.verdict == HarnessVerdict::Consistent && rep.probes.size() == 7;
  double worst = 0.0;
  for (std::size_t p = 0; p < h.probes.size(); ++p) {
    const Probe& pr = h.probes[p];
    double bound = 0.0;
    const int N = 100000;
    const double ds = 1e-6 * pr.domain.width();
    for (int i = 0; i <= N; ++i) {
      const double s = pr.domain.lo + pr.domain.width() * i / N;
      const double s0 = std::max(pr.domain.lo, s - ds), s1 = std::min(pr.domain.hi, s + ds);
      const Eigen::Vector2d dgamma = (pr.path(s1) - pr.path(s0)) / (s1 - s0);
      bound = std::max(bound, (jacobian_b2(pr.path(s)) * dgamma).norm());
    }
    const double rel = std::abs(rep.probes[p].lipschitz - bound) / bound;
    worst = std::max(worst, rel);
    ok = ok && rel <= 0.1;
  }
  return {ok, "verdict " + std::string(to_string(rep.verdict)) + ", 7 probes, worst relative deviation " + num(worst)};
}

// ------------------------------------------------------------------ 9

using EvidenceKey = std::vector<double>;

EvidenceKey evidence_key(const RegularityReport& r) {
  EvidenceKey k;
  for (const auto& e : r.evidence) {
    for (double x : {e.sup_d1, e.sup_d2, e.jump_d1, e.cauchy_d1, e.cauchy_d2}) k.push_back(std::isnan(x) ? -1.0 : x);
  }
  return k;
}

Outcome equivariance() {
  std::mt19937_64 rng(9);
  bool ok = true;
  int checks = 0;
  std::string failures;
  for (const char* s : {"A:2", "B:3", "D:3", "D:4", "I2:4"}) {
    OrbitMapSigma map(ReflectionGroup::parse(s));
    const int dim = map.group.dim();
    Path g = [dim](double t) -> Eigen::VectorXd {
      Eigen::VectorXd v(dim);
      v[0] = std::sin(t);
      v[1] = 0.3 + t;
      if (dim > 2) v[2] = 1 - t * t / 2;
      if (dim > 3) v[3] = -1.4 + t * t * t / 3;
      return v;
    };
    auto c = CoeffCurve::from_function(
        map.n_invariants(), [&map, g](double t) { return sigma(map, g(t)); }, {-1, 1});
    LiftResult lift = lift_curve(map, c, Grid({-1, 1}, 9));
    const auto& el = map.group.elements();
    std::uniform_int_distribution<std::size_t> pick(1, el.size() - 1);
    for (int trial = 0; trial < 5; ++trial) {
      LiftResult moved = transform_lift(lift, el[pick(rng)], map, c);
      std::vector<EvidenceKey> a, b;
      for (const auto& r : lift.coordinate_reports) a.push_back(evidence_key(r));
      for (const auto& r : moved.coordinate_reports) b.push_back(evidence_key(r));
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      const bool res = moved.residual == lift.residual;
      const bool joint = evidence_key(moved.report) == evidence_key(lift.report);
      const bool coords = a == b;
      if (!(res && joint && coords)) {
        failures += std::string(" ") + s + (res ? "" : " residual " + num(lift.residual) + "/" + num(moved.residual)) +
                    (joint ? "" : " joint") + (coords ? "" : " coordinates") + ";";
      }
      ok = ok && res && joint && coords;
      ++checks;
    }
  }
  // I2:5 has irrational matrix entries, so only rounding-level agreement
  double drift = 0.0;
  {
    OrbitMapSigma map(ReflectionGroup::parse("I2:5"));
    auto c = CoeffCurve::from_function(
        2, [&map](double t) { return sigma(map, Eigen::Vector2d(std::sin(t), 0.3 + t)); }, {-1, 1});
    LiftResult lift = lift_curve(map, c, Grid({-1, 1}, 9));
    for (const auto& g : map.group.elements()) {
      LiftResult moved = transform_lift(lift, g, map, c);
      drift = std::max(drift, std::abs(moved.residual - lift.residual));
    }
  }
  return {ok, std::to_string(checks) + " random group elements on A:2, B:3, D:3, D:4, I2:4 bit-identical" +
                  (failures.empty() ? "" : ", differs:" + failures) + "; I2:5 (not gated) residual drift " +
                  num(drift)};
}

// ------------------------------------------------------------------ 10

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& cli, const fs::path& scratch) {
  const std::vector<std::pair<std::string, std::string>> runs{
      {"roots", "roots --curve=0,-t^2 --domain=-1:1 --level 8"},
      {"select", "select --example triple-lines --level 10"},
      {"lift", "lift --example lift-i2-circle --level 10"},
      {"certify", "certify --example cusp-3-2 --level 10"},
      {"kdata", "kdata --group B:3"},
      {"harness", "harness --example harness-b2-smooth --level 9"},
      {"examples", "examples"},
  };
  bool ok = true;
  std::string bad;
  for (int rep = 0; rep < 2; ++rep) {
    const fs::path dir = scratch / ("run" + std::to_string(rep));
    fs::remove_all(dir);
    fs::create_directories(dir);
    for (const auto& [name, args] : runs) {
      const std::string cmd = "\"" + cli + "\" " + args + " --seed 7 --out \"" + (dir / name).string() + "\" > \"" +
                              (dir / (name + ".stdout")).string() + "\"";
      if (std::system(cmd.c_str()) != 0) {
        ok = false;
        bad += " " + name + "(exit)";
      }
    }
  }
  int files = 0;
  for (const auto& entry : fs::directory_iterator(scratch / "run0")) {
    const fs::path other = scratch / "run1" / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      ok = false;
      bad += " " + entry.path().filename().string();
    }
    ++files;
  }
  return {ok && files >= 7 * 2, std::to_string(files) + " artifacts compared byte-for-byte" + bad};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <hyperlift-cli> <scratch-dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path scratch = argv[2];
  fs::create_directories(scratch);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"vieta round trip", vieta_round_trip},
      {"crossing resolution", crossing_resolution},
      {"regularity separation", regularity_separation},
      {"sharpness direction", sharpness},
      {"k and d", k_data},
      {"fiber equals orbit", fiber_orbit},
      {"lift contract", lift_contract},
      {"lipschitz harness", harness_bounds},
      {"equivariance", equivariance},
      {"determinism", [&] { return determinism(cli, scratch); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail
              << " [" << num(secs) << " s]\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
