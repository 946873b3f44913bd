#include <hyperlift/assignment.hpp>

#include <doctest.h>

#include <random>

using namespace hyperlift;

TEST_CASE("assignment on a small matrix") {
  Eigen::MatrixXd c(3, 3);
  c << 4, 1, 3,
       2, 0, 5,
       3, 2, 2;
  auto h = hungarian(c);
  auto l = lexicographic_assignment(c, 0.0);
  CHECK(h.cost == 5.0);
  CHECK(l.cost == 5.0);
  CHECK(l.perm == std::vector<int>{1, 0, 2});
}

TEST_CASE("ties resolve to the lexicographically smallest permutation") {
  Eigen::MatrixXd c = Eigen::MatrixXd::Ones(3, 3);
  auto l = lexicographic_assignment(c, 1e-12);
  CHECK(l.perm == std::vector<int>{0, 1, 2});
  CHECK(l.runner_up == l.cost);
}

TEST_CASE("property: Hungarian agrees with exhaustive search on cost") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0, 10);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 7;
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(i, j) = u(rng);
    auto h = hungarian(c);
    auto l = lexicographic_assignment(c, 0.0);
    CHECK(h.cost == doctest::Approx(l.cost).epsilon(1e-12));
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (int j : h.perm) seen[static_cast<std::size_t>(j)]++;
    for (int s : seen) CHECK(s == 1);
  }
}

TEST_CASE("large matrices dispatch to Hungarian") {
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(12, 12) * -1.0;
  CHECK(min_cost_assignment(c, 0.0).cost == -12.0);
}
