#include <hyperlift/report_io.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hyperlift {

std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + fmt17(xs[i]);
  return s;
}

std::string join(const Eigen::VectorXd& v) {
  return join(std::vector<double>(v.data(), v.data() + v.size()));
}

std::string join(const std::vector<int>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

std::string interval(const Interval& iv) { return fmt17(iv.lo) + ":" + fmt17(iv.hi); }

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const Grid& grid, const Eigen::MatrixXd& values,
               const std::vector<std::string>& names) {
  if (values.rows() != grid.size()) throw Error(ErrorKind::DimensionMismatch, "values do not match grid");
  if (static_cast<Eigen::Index>(names.size()) != values.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "column names do not match values");
  }
  out << "t";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out << fmt17(grid[i]);
    for (Eigen::Index j = 0; j < values.cols(); ++j) out << ',' << fmt17(values(i, j));
    out << '\n';
  }
}

SampleTable read_csv(std::istream& in) {
  std::string line;
  int lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) {
      header = split(trim(line));
      break;
    }
  }
  if (header.empty() || header.front() != "t") {
    throw Error(ErrorKind::InvalidInput, "CSV header must start with 't'");
  }
  if (header.size() < 2) throw Error(ErrorKind::InvalidInput, "CSV needs at least one value column");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split(trim(line));
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::InvalidInput, "CSV line " + std::to_string(lineno) + ": expected " +
                                               std::to_string(header.size()) + " fields");
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || *end != '\0') {
        throw Error(ErrorKind::InvalidInput, "CSV line " + std::to_string(lineno) + ": bad number '" + c + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw Error(ErrorKind::InvalidInput, "CSV needs at least two rows");
  SampleTable tab;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(header.size() - 1);
  tab.t.resize(n);
  tab.values.resize(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    tab.t[i] = rows[static_cast<std::size_t>(i)][0];
    for (Eigen::Index j = 0; j < m; ++j) tab.values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j + 1)];
    if (i > 0 && !(tab.t[i] > tab.t[i - 1])) throw Error(ErrorKind::InvalidInput, "CSV t column must increase");
  }
  tab.names.assign(header.begin() + 1, header.end());
  return tab;
}

SampleTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
  return read_csv(in);
}

Grid grid_of(const SampleTable& table) {
  const Eigen::Index n = table.t.size();
  int level = 0;
  while ((Eigen::Index{1} << level) < n - 1) ++level;
  if ((Eigen::Index{1} << level) != n - 1) {
    throw Error(ErrorKind::InvalidInput, "sample count " + std::to_string(n) + " is not 2^k + 1");
  }
  Grid g({table.t[0], table.t[n - 1]}, level);
  const double slack = 1e-9 * g.domain().width();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(g[i] - table.t[i]) > slack) {
      throw Error(ErrorKind::InvalidInput, "samples are not on a uniform dyadic grid (row " + std::to_string(i + 1) + ")");
    }
  }
  return g;
}

void Report::add(std::string key, std::string value) { fields_.emplace_back(std::move(key), std::move(value)); }

void Report::append(const Report& other, const std::string& prefix) {
  for (const auto& [k, v] : other.fields_) fields_.emplace_back(prefix + k, v);
}

void Report::write(std::ostream& out) const {
  for (const auto& [k, v] : fields_) out << k << ": " << v << '\n';
}

Report describe(const RegularityReport& r) {
  Report rep;
  rep.add("verdict", std::string(to_string(r.verdict)));
  rep.add("certificate", "empirical: difference quotients on nested dyadic grids, not a proof");
  rep.add("domain", interval(r.domain));
  rep.add("components", r.components);
  if (!r.evidence.empty()) {
    rep.add("levels", std::to_string(r.evidence.front().level) + ".." + std::to_string(r.evidence.back().level));
  }
  const auto& th = r.thresholds;
  rep.add("thresholds", "unbounded_growth=" + fmt17(th.unbounded_growth) + " bounded_growth=" +
                            fmt17(th.bounded_growth) + " cauchy_decay=" + fmt17(th.cauchy_decay) +
                            " differentiable_decay=" + fmt17(th.differentiable_decay) +
                            " noise_floor=" + fmt17(th.noise_floor) + " trailing=" + std::to_string(th.trailing));
  for (const auto& e : r.evidence) {
    rep.add("level." + std::to_string(e.level),
            "step=" + fmt17(e.step) + " sup_d1=" + fmt17(e.sup_d1) + " sup_d2=" + fmt17(e.sup_d2) +
                " jump_d1=" + fmt17(e.jump_d1) + " cauchy_d1=" + fmt17(e.cauchy_d1) +
                " cauchy_d2=" + fmt17(e.cauchy_d2) + " at_d1=" + fmt17(e.witness_d1) +
                " at_jump=" + fmt17(e.witness_jump));
  }
  rep.add("growth_d1", join(r.growth_d1));
  rep.add("growth_d2", join(r.growth_d2));
  rep.add("decay_d1", join(r.decay_d1));
  rep.add("decay_d2", join(r.decay_d2));
  return rep;
}

Report describe(const KData& k, const ReflectionGroup& group) {
  Report rep;
  rep.add("group", group.spec());
  rep.add("order", static_cast<long long>(group.order()));
  rep.add("dim", group.dim());
  rep.add("degrees", join(OrbitMapSigma(group).degrees));
  rep.add("d", k.d);
  rep.add("k", k.k_value);
  rep.add("irreducibles", static_cast<int>(k.records.size()));
  for (std::size_t i = 0; i < k.records.size(); ++i) {
    const auto& r = k.records[i];
    const std::string p = "irreducible." + std::to_string(i + 1) + ".";
    rep.add(p + "dim", static_cast<int>(r.basis.cols()));
    rep.add(p + "v", join(r.v));
    rep.add(p + "isotropy_order", static_cast<long long>(r.isotropy_order));
    rep.add(p + "orbit_size", static_cast<long long>(r.orbit_size));
    rep.add(p + "fixed_lines_checked", r.fixed_lines_checked);
    rep.add(p + "random_checked", r.random_checked);
    rep.add(p + "max_random_isotropy", static_cast<long long>(r.max_random_isotropy));
  }
  return rep;
}

namespace {

void add_windows(Report& rep, const std::string& key, const std::vector<CollisionCluster>& cs) {
  rep.add(key, static_cast<int>(cs.size()));
  for (std::size_t i = 0; i < cs.size(); ++i) {
    std::string v = interval(cs[i].window);
    if (!cs[i].branches.empty()) v += " branches=" + join(cs[i].branches);
    rep.add(key + "." + std::to_string(i + 1), v);
  }
}

void add_swaps(Report& rep, const Grid& grid, const std::vector<SwapEvent>& swaps) {
  rep.add("swaps", static_cast<int>(swaps.size()));
  for (std::size_t i = 0; i < swaps.size(); ++i) {
    rep.add("swap." + std::to_string(i + 1),
            "t=" + fmt17(grid[swaps[i].time_index]) + " perm=" + join(swaps[i].permutation));
  }
}

}  // namespace

Report describe(const RootBranches& b) {
  Report rep;
  rep.add("selection", b.kind == SelectionKind::Sorted ? "sorted" : "differentiable");
  rep.add("domain", interval(b.grid.domain()));
  rep.add("level", b.grid.level());
  rep.add("branches", static_cast<int>(b.values.cols()));
  rep.add("eps", b.eps);
  add_swaps(rep, b.grid, b.swap_log);
  add_windows(rep, "unresolved", b.unresolved);
  return rep;
}

Report describe(const LiftResult& lift) {
  Report rep;
  rep.add("group", lift.group.spec());
  rep.add("domain", interval(lift.grid.domain()));
  rep.add("level", lift.grid.level());
  rep.add("residual", lift.residual);
  add_windows(rep, "collisions", lift.collisions);
  add_windows(rep, "unresolved", lift.unresolved);
  add_swaps(rep, lift.grid, lift.swap_log);
  if (lift.certified) {
    std::string per;
    for (std::size_t j = 0; j < lift.coordinate_reports.size(); ++j) {
      per += (j ? "," : "") + std::string(to_string(lift.coordinate_reports[j].verdict));
    }
    rep.add("coordinate_verdicts", per);
    rep.append(describe(lift.report), "regularity.");
  }
  return rep;
}

Report describe(const LipschitzHarnessReport& h) {
  Report rep;
  rep.add("verdict", std::string(to_string(h.verdict)));
  rep.add("probes", static_cast<int>(h.probes.size()));
  for (const auto& p : h.probes) {
    const std::string k = "probe." + p.name + ".";
    rep.add(k + "verdict", std::string(to_string(p.verdict)));
    rep.add(k + "lipschitz", p.lipschitz);
    rep.add(k + "subwindows", join(p.subwindow_lipschitz));
    rep.add(k + "residual", p.residual);
    rep.add(k + "unresolved", p.unresolved ? "yes" : "no");
  }
  return rep;
}

}  // namespace hyperlift
