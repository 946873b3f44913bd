#pragma once

#include <hyperlift/errors.hpp>

#include <Eigen/Core>

#include <cstdint>

namespace hyperlift {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double width() const { return hi - lo; }
  bool contains(double t, double slack = 0.0) const { return t >= lo - slack && t <= hi + slack; }
};

/// Uniform dyadic grid: the lattice lo + i * width / 2^level over a base
/// domain, restricted to the index range [first, last]. Level-k points are
/// bitwise equal to the corresponding level-(k+1) points.
class Grid {
 public:
  Grid(Interval domain, int level);

  const Interval& domain() const { return domain_; }
  int level() const { return level_; }
  double step() const;

  Eigen::Index size() const { return static_cast<Eigen::Index>(last_ - first_ + 1); }
  double operator[](Eigen::Index i) const { return lattice_point(first_ + i); }
  Eigen::VectorXd points() const;

  /// Lattice indices of the first and last point (level-relative).
  std::int64_t first_index() const { return first_; }
  std::int64_t last_index() const { return last_; }
  Interval window() const { return {(*this)[0], (*this)[size() - 1]}; }
  bool is_full() const { return first_ == 0 && last_ == (std::int64_t{1} << level_); }

  /// Same lattice point set, restricted to [first, last].
  Grid restricted(std::int64_t first, std::int64_t last) const;

  double lattice_point(std::int64_t index) const;

 private:
  Interval domain_;
  int level_;
  std::int64_t first_;
  std::int64_t last_;
};

/// Level+1 grid restricted to `window` (snapped inward to the finer lattice).
Grid refine(const Grid& grid, Interval window);

}  // namespace hyperlift
