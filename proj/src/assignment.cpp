#include <hyperlift/assignment.hpp>
#include <hyperlift/errors.hpp>

#include <algorithm>
#include <numeric>

namespace hyperlift {

Assignment hungarian(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw Error(ErrorKind::DimensionMismatch, "assignment needs a square cost matrix");
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is the virtual start
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Assignment a;
  a.perm.assign(static_cast<std::size_t>(n), 0);
  for (int j = 1; j <= n; ++j) a.perm[static_cast<std::size_t>(match[j] - 1)] = j - 1;
  for (int i = 0; i < n; ++i) a.cost += cost(i, a.perm[static_cast<std::size_t>(i)]);
  return a;
}

Assignment lexicographic_assignment(const Eigen::MatrixXd& cost, double tie_tol) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw Error(ErrorKind::DimensionMismatch, "assignment needs a square cost matrix");
  if (n > 9) throw Error(ErrorKind::EnumerationTooLarge, "lexicographic assignment limited to n <= 9");
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  Assignment best;
  best.cost = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (int i = 0; i < n; ++i) c += cost(i, p[static_cast<std::size_t>(i)]);
    if (c < best.cost - tie_tol) {
      best.runner_up = std::min(best.runner_up, best.cost);
      best.cost = c;
      best.perm = p;
    } else {
      best.runner_up = std::min(best.runner_up, c);
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

Assignment min_cost_assignment(const Eigen::MatrixXd& cost, double tie_tol) {
  if (cost.rows() <= 8) return lexicographic_assignment(cost, tie_tol);
  return hungarian(cost);
}

}  // namespace hyperlift
