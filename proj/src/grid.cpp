#include <hyperlift/grid.hpp>

#include <cmath>
#include <string>

namespace hyperlift {

Grid::Grid(Interval domain, int level) : domain_(domain), level_(level), first_(0) {
  if (!(domain.hi > domain.lo) || !std::isfinite(domain.lo) || !std::isfinite(domain.hi)) {
    throw Error(ErrorKind::InvalidWindow, "grid domain must be a nondegenerate finite interval");
  }
  if (level < 0 || level > 40) throw Error(ErrorKind::InvalidInput, "grid level out of range [0, 40]");
  last_ = std::int64_t{1} << level;
}

double Grid::step() const { return domain_.width() / std::ldexp(1.0, level_); }

double Grid::lattice_point(std::int64_t index) const {
  if (index == (std::int64_t{1} << level_)) return domain_.hi;
  return domain_.lo + domain_.width() * std::ldexp(static_cast<double>(index), -level_);
}

Eigen::VectorXd Grid::points() const {
  Eigen::VectorXd p(size());
  for (Eigen::Index i = 0; i < size(); ++i) p[i] = (*this)[i];
  return p;
}

Grid Grid::restricted(std::int64_t first, std::int64_t last) const {
  if (first < 0 || last > (std::int64_t{1} << level_) || first > last) {
    throw Error(ErrorKind::InvalidWindow, "index range outside the lattice");
  }
  Grid g = *this;
  g.first_ = first;
  g.last_ = last;
  return g;
}

Grid refine(const Grid& grid, Interval window) {
  if (!(window.hi > window.lo)) {
    throw Error(ErrorKind::InvalidWindow, "window has zero width");
  }
  const Interval span = grid.window();
  const double slack = 1e-12 * (1.0 + std::abs(span.lo) + std::abs(span.hi));
  if (window.lo < span.lo - slack || window.hi > span.hi + slack) {
    throw Error(ErrorKind::InvalidWindow, "window [" + std::to_string(window.lo) + ", " +
                                              std::to_string(window.hi) + "] leaves the grid");
  }
  Grid fine(grid.domain(), grid.level() + 1);
  const double h = fine.step();
  const double lo = grid.domain().lo;
  auto first = static_cast<std::int64_t>(std::ceil((window.lo - lo) / h - 1e-9));
  auto last = static_cast<std::int64_t>(std::floor((window.hi - lo) / h + 1e-9));
  first = std::max(first, 2 * grid.first_index());
  last = std::min(last, 2 * grid.last_index());
  if (first >= last) throw Error(ErrorKind::InvalidWindow, "window contains fewer than two refined points");
  return fine.restricted(first, last);
}

}  // namespace hyperlift
