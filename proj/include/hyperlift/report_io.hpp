#pragma once

// CSV curve files and plain-text reports with a fixed field order.

#include <hyperlift/curvedsl.hpp>
#include <hyperlift/grid.hpp>
#include <hyperlift/invariants.hpp>
#include <hyperlift/lifting.hpp>
#include <hyperlift/regcheck.hpp>
#include <hyperlift/rootflow.hpp>

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hyperlift {

/// Shortest-safe round-trip formatting: 17 significant digits.
std::string fmt17(double x);

/// Header `t,<names...>`, one row per grid point.
void write_csv(std::ostream& out, const Grid& grid, const Eigen::MatrixXd& values,
               const std::vector<std::string>& names);
SampleTable read_csv(std::istream& in);
SampleTable read_csv_file(const std::string& path);

/// The full dyadic grid a sample table was written on; throws InvalidInput
/// unless the rows are 2^k + 1 equally spaced points.
Grid grid_of(const SampleTable& table);

class Report {
 public:
  void add(std::string key, std::string value);
  void add(std::string key, double value) { add(std::move(key), fmt17(value)); }
  void add(std::string key, long long value) { add(std::move(key), std::to_string(value)); }
  void add(std::string key, int value) { add(std::move(key), std::to_string(value)); }
  void append(const Report& other, const std::string& prefix = "");

  const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }
  void write(std::ostream& out) const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

Report describe(const RegularityReport& r);
Report describe(const KData& k, const ReflectionGroup& group);
Report describe(const LiftResult& lift);
Report describe(const RootBranches& b);
Report describe(const LipschitzHarnessReport& h);

}  // namespace hyperlift
