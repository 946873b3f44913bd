// hyperlift: command-line front end.
//
//   hyperlift select --curve=0,-t^2 --domain=-1:1 --out run/cross
//   hyperlift certify --csv run/cross.csv
//   hyperlift lift --group I2:3 --curve=1,cos(3*t)
//   hyperlift kdata --group A:2
//   hyperlift harness --example harness-b2-smooth
//   hyperlift examples
//
// Exit status: 0 ok, 1 other errors, 2 not hyperbolic / not in the image,
// 3 inconclusive or unresolved under --strict.

#include <hyperlift/catalog.hpp>
#include <hyperlift/invariants.hpp>
#include <hyperlift/lifting.hpp>
#include <hyperlift/regcheck.hpp>
#include <hyperlift/report_io.hpp>
#include <hyperlift/rootflow.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

using namespace hyperlift;

namespace {

struct RunConfig {
  std::string subcommand;
  std::string group;
  std::string curve;
  std::string csv;
  std::string example;
  std::string domain = "-1:1";
  bool domain_given = false;
  int level = 10;
  int levels = 4;
  double tol = 0.0;  // 0: per-command default
  std::optional<double> at;
  std::string out;
  bool strict = false;
  std::uint64_t seed = 7;
};

Interval parse_domain(const std::string& s) {
  const auto colon = s.find(':', 1);
  if (colon == std::string::npos) throw Error(ErrorKind::InvalidInput, "domain must look like a:b");
  try {
    std::size_t u1 = 0, u2 = 0;
    const std::string a = s.substr(0, colon), b = s.substr(colon + 1);
    Interval iv{std::stod(a, &u1), std::stod(b, &u2)};
    if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument(s);
    if (!(iv.hi > iv.lo)) throw Error(ErrorKind::InvalidInput, "domain needs a < b");
    return iv;
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidInput, "bad domain '" + s + "'");
  }
}

std::vector<std::string> names(const std::string& stem, Eigen::Index n) {
  std::vector<std::string> v;
  for (Eigen::Index i = 1; i <= n; ++i) v.push_back(stem + std::to_string(i));
  return v;
}

class Run {
 public:
  explicit Run(const RunConfig& cfg) : cfg_(cfg) {}

  int exec() {
    const std::string& s = cfg_.subcommand;
    if (s == "roots") roots();
    else if (s == "select") select();
    else if (s == "lift") lift();
    else if (s == "certify") certify();
    else if (s == "kdata") kdata();
    else if (s == "harness") harness();
    else if (s == "examples") examples();
    emit();
    return (cfg_.strict && undecided_) ? 3 : 0;
  }

 private:
  double tol(double fallback) const { return cfg_.tol > 0 ? cfg_.tol : fallback; }

  const CatalogEntry* entry() const { return cfg_.example.empty() ? nullptr : &find_example(cfg_.example); }

  Interval domain() const {
    if (const CatalogEntry* e = entry(); e && !cfg_.domain_given) return e->domain;
    return parse_domain(cfg_.domain);
  }

  CoeffCurve curve() const {
    if (const CatalogEntry* e = entry()) {
      CatalogEntry copy = *e;
      copy.domain = domain();
      return make_curve(copy);
    }
    if (cfg_.curve.empty()) throw Error(ErrorKind::InvalidInput, "need --curve or --example");
    return CoeffCurve::from_expressions(parse_curve_list(cfg_.curve), domain());
  }

  std::string group() const {
    if (!cfg_.group.empty()) return cfg_.group;
    if (const CatalogEntry* e = entry()) return e->group;
    throw Error(ErrorKind::InvalidInput, "need --group");
  }

  void header() {
    report_.add("command", cfg_.subcommand);
    report_.add("seed", static_cast<long long>(cfg_.seed));
    if (!cfg_.example.empty()) report_.add("example", cfg_.example);
  }

  void add_certificate(const Eigen::MatrixXd& values, const Grid& grid) {
    RegularityReport r = certify_samples(values, grid, cfg_.levels);
    report_.append(describe(r), "regularity.");
    undecided_ = undecided_ || r.verdict == Verdict::Inconclusive;
  }

  void roots() {
    header();
    CoeffCurve c = curve();
    if (cfg_.at) {
      report_.add("t", *cfg_.at);
      report_.add("roots", [&] {
        Eigen::VectorXd r = sorted_roots_at(c, *cfg_.at, tol(1e-12));
        std::string s;
        for (Eigen::Index i = 0; i < r.size(); ++i) s += (i ? "," : "") + fmt17(r[i]);
        return s;
      }());
      return;
    }
    Grid grid(c.domain(), cfg_.level);
    RootBranches b = sorted_branches(c, grid, tol(1e-12));
    report_.append(describe(b));
    set_csv(grid, b.values, names("r", b.values.cols()));
  }

  void select() {
    header();
    CoeffCurve c = curve();
    Grid grid(c.domain(), cfg_.level);
    RootBranches b = differentiable_selection(c, grid, tol(1e-12));
    report_.append(describe(b));
    add_certificate(b.values, grid);
    undecided_ = undecided_ || !b.unresolved.empty();
    set_csv(grid, b.values, names("b", b.values.cols()));
  }

  void lift() {
    header();
    OrbitMapSigma map(ReflectionGroup::parse(group()));
    CoeffCurve c = curve();
    Grid grid(c.domain(), cfg_.level);
    LiftOptions opt;
    opt.tol = tol(opt.tol);
    opt.certify_levels = cfg_.levels;
    LiftResult l = lift_curve(map, c, grid, opt);
    report_.append(describe(l));
    undecided_ = !l.unresolved.empty() || (l.certified && l.report.verdict == Verdict::Inconclusive);
    set_csv(grid, l.values, names("x", l.values.cols()));
  }

  void certify() {
    header();
    if (!cfg_.csv.empty()) {
      SampleTable tab = read_csv_file(cfg_.csv);
      Grid grid = grid_of(tab);
      report_.add("source", std::filesystem::path(cfg_.csv).filename().string());
      add_certificate(tab.values, grid);
      return;
    }
    CoeffCurve c = curve();
    Grid grid(c.domain(), cfg_.level);
    add_certificate(sample(c, grid), grid);
  }

  void kdata() {
    header();
    ReflectionGroup g = ReflectionGroup::parse(group());
    KData k = compute_k(g, OrbitMapSigma(g), cfg_.seed);
    report_.append(describe(k, g));
  }

  void harness() {
    header();
    if (cfg_.example.empty()) throw Error(ErrorKind::InvalidInput, "harness needs --example (see 'examples')");
    const HarnessExample& h = find_harness(cfg_.example);
    OrbitMapSigma map(ReflectionGroup::parse(h.group));
    LiftOptions opt;
    opt.tol = tol(opt.tol);
    opt.certify_levels = cfg_.levels;
    LipschitzHarnessReport rep = lipschitz_harness(map, h.f, h.probes, cfg_.level, opt);
    report_.add("group", h.group);
    report_.append(describe(rep));
    undecided_ = rep.verdict == HarnessVerdict::Inconclusive;
  }

  void examples() {
    header();
    for (const auto& e : list_examples()) {
      const std::string k = "example." + e.name + ".";
      report_.add(k + "mode", e.mode == ExampleMode::Select ? "select" : "lift");
      report_.add(k + "group", e.group);
      report_.add(k + "curve", e.curve);
      report_.add(k + "domain", fmt17(e.domain.lo) + ":" + fmt17(e.domain.hi));
      report_.add(k + "declared", e.declared.to_string());
      report_.add(k + "expected", std::string(e.positive ? "at least " : "") + std::string(to_string(e.expected)));
      if (!e.lowered_from.empty()) report_.add(k + "lowered_from", e.lowered_from);
      report_.add(k + "note", e.note);
    }
    for (const auto& h : harness_examples()) {
      const std::string k = "harness." + h.name + ".";
      report_.add(k + "group", h.group);
      report_.add(k + "probes", static_cast<int>(h.probes.size()));
      report_.add(k + "expected", std::string(to_string(h.expected)));
      report_.add(k + "note", h.note);
    }
  }

  void set_csv(const Grid& grid, const Eigen::MatrixXd& values, std::vector<std::string> cols) {
    csv_grid_ = grid;
    csv_values_ = values;
    csv_names_ = std::move(cols);
  }

  void emit() const {
    report_.write(std::cout);
    if (cfg_.out.empty()) return;
    const std::filesystem::path prefix(cfg_.out);
    if (prefix.has_parent_path()) std::filesystem::create_directories(prefix.parent_path());
    std::ofstream rep(cfg_.out + ".report.txt");
    report_.write(rep);
    if (csv_grid_) {
      std::ofstream csv(cfg_.out + ".csv");
      write_csv(csv, *csv_grid_, csv_values_, csv_names_);
    }
    if (!rep) throw Error(ErrorKind::InvalidInput, "cannot write '" + cfg_.out + ".report.txt'");
  }

  const RunConfig& cfg_;
  Report report_;
  bool undecided_ = false;
  std::optional<Grid> csv_grid_;
  Eigen::MatrixXd csv_values_;
  std::vector<std::string> csv_names_;
};

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::NotHyperbolic:
    case ErrorKind::NotHyperbolicAt:
    case ErrorKind::NotInImageAt: return 2;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curves of hyperbolic polynomials, root selections, lifts over reflection-group orbit maps"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--level", cfg.level, "dyadic grid level of the output")->check(CLI::Range(1, 24));
    sub->add_option("--levels", cfg.levels, "refinement levels used by the certificate")->check(CLI::Range(4, 16));
    sub->add_option("--tol", cfg.tol, "tolerance override");
    sub->add_option("--seed", cfg.seed, "seed for randomized candidate sampling");
    sub->add_option("--out", cfg.out, "write <out>.csv and <out>.report.txt");
    sub->add_flag("--strict", cfg.strict, "exit 3 on inconclusive or unresolved results");
  };
  auto curve_opts = [&](CLI::App* sub) {
    sub->add_option("--curve", cfg.curve, "comma-separated expressions in t");
    sub->add_option("--example", cfg.example, "catalog example name");
    sub->add_option("--domain", cfg.domain, "domain a:b");
  };

  CLI::App* roots = app.add_subcommand("roots", "sorted roots along a coefficient curve");
  curve_opts(roots);
  roots->add_option("--at", cfg.at, "roots at a single time");
  CLI::App* select = app.add_subcommand("select", "differentiable root selection with certificate");
  curve_opts(select);
  CLI::App* lift = app.add_subcommand("lift", "lift an orbit-space curve");
  curve_opts(lift);
  lift->add_option("--group", cfg.group, "A:n, B:n, D:n or I2:m");
  CLI::App* certify = app.add_subcommand("certify", "regularity certificate of a sampled curve");
  curve_opts(certify);
  certify->add_option("--csv", cfg.csv, "CSV with header t,...");
  CLI::App* kdata = app.add_subcommand("kdata", "degrees d and constant k of a reflection group");
  kdata->add_option("--group", cfg.group, "A:n, B:n, D:n or I2:m")->required();
  CLI::App* harness = app.add_subcommand("harness", "multi-parameter Lipschitz harness");
  harness->add_option("--example", cfg.example, "harness example name")->required();
  CLI::App* examples = app.add_subcommand("examples", "list the built-in catalog");
  for (CLI::App* sub : {roots, select, lift, certify, kdata, harness, examples}) common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  for (CLI::App* sub : app.get_subcommands()) {
    cfg.subcommand = sub->get_name();
    const CLI::Option* d = sub->get_option_no_throw("--domain");
    cfg.domain_given = d != nullptr && d->count() > 0;
  }

  try {
    return Run(cfg).exec();
  } catch (const Error& e) {
    std::cerr << "hyperlift " << cfg.subcommand << ": " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "hyperlift " << cfg.subcommand << ": " << e.what() << '\n';
    return 1;
  }
}
