#include <hyperlift/invariants.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace hyperlift;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

bool contains(const std::vector<Eigen::VectorXd>& set, const Eigen::VectorXd& p, double tol) {
  return std::any_of(set.begin(), set.end(), [&](const auto& q) { return (q - p).cwiseAbs().maxCoeff() <= tol; });
}

// naive invariants written out term by term
Eigen::VectorXd naive_sigma_a2(const Eigen::VectorXd& v) {
  const double x = v[0], y = v[1], z = v[2];
  return vec({x + y + z, x * y + y * z + x * z, x * y * z});
}

Eigen::VectorXd naive_sigma_d3(const Eigen::VectorXd& v) {
  const double a = v[0] * v[0], b = v[1] * v[1], c = v[2] * v[2];
  return vec({a + b + c, a * b + b * c + a * c, v[0] * v[1] * v[2]});
}

}  // namespace

TEST_CASE("group orders and parsing") {
  CHECK(ReflectionGroup::parse("A:2").order() == 6);
  CHECK(ReflectionGroup::parse("B:2").order() == 8);
  CHECK(ReflectionGroup::parse("I2:5").order() == 10);
  CHECK(ReflectionGroup::parse("D:4").order() == 192);
  CHECK(ReflectionGroup::parse("A:1").dim() == 2);
  CHECK(ReflectionGroup::parse("B:3").elements().size() == 48);
  CHECK_THROWS_AS(ReflectionGroup::parse("D:2"), Error);
  CHECK_THROWS_AS(ReflectionGroup::parse("E:6"), Error);
  CHECK_THROWS_AS(ReflectionGroup::parse("A:x"), Error);
  CHECK_THROWS_AS(ReflectionGroup::parse("A2"), Error);
  try {
    ReflectionGroup::parse("I2:1");
    FAIL("expected UnsupportedParameter");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedParameter);
  }

  auto big = ReflectionGroup::parse("A:8");
  CHECK(big.order() == 362880);
  CHECK_FALSE(big.enumerated());
  try {
    big.elements();
    FAIL("expected EnumerationTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EnumerationTooLarge);
  }
}

TEST_CASE("elements are orthogonal and closed") {
  for (const char* s : {"A:3", "B:3", "D:4", "I2:7"}) {
    auto g = ReflectionGroup::parse(s);
    const auto& el = g.elements();
    CHECK((el.front() - Eigen::MatrixXd::Identity(g.dim(), g.dim())).norm() == 0.0);
    for (const auto& m : el) {
      CHECK((m.transpose() * m - Eigen::MatrixXd::Identity(g.dim(), g.dim())).cwiseAbs().maxCoeff() < 1e-12);
    }
    // product of two random elements is again an element
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, el.size() - 1);
    for (int i = 0; i < 20; ++i) {
      Eigen::MatrixXd p = el[pick(rng)] * el[pick(rng)];
      bool found = std::any_of(el.begin(), el.end(), [&](const auto& q) { return (q - p).cwiseAbs().maxCoeff() < 1e-9; });
      CHECK(found);
    }
  }
}

TEST_CASE("sigma values") {
  OrbitMapSigma a2(ReflectionGroup::parse("A:2"));
  CHECK(sigma(a2, vec({1, 2, 3})) == vec({6, 11, 6}));
  OrbitMapSigma b2(ReflectionGroup::parse("B:2"));
  CHECK(sigma(b2, vec({1, -1})) == vec({2, 1}));
  OrbitMapSigma i4(ReflectionGroup::parse("I2:4"));
  CHECK(sigma(i4, vec({1, 0})) == vec({1, 1}));
  CHECK(a2.d() == 3);
  CHECK(OrbitMapSigma(ReflectionGroup::parse("D:5")).degrees == std::vector<int>{2, 4, 6, 8, 5});
  CHECK(OrbitMapSigma(ReflectionGroup::parse("I2:6")).degrees == std::vector<int>{2, 6});
  CHECK_THROWS_AS(sigma(a2, vec({1, 2})), Error);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  OrbitMapSigma d3(ReflectionGroup::parse("D:3"));
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXd v = vec({n(rng), n(rng), n(rng)});
    CHECK((sigma(a2, v) - naive_sigma_a2(v)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((sigma(d3, v) - naive_sigma_d3(v)).cwiseAbs().maxCoeff() < 1e-13);
    const double x = n(rng), y = n(rng);
    // Re (x + iy)^4 = x^4 - 6 x^2 y^2 + y^4
    Eigen::VectorXd s = sigma(i4, vec({x, y}));
    CHECK(std::abs(s[1] - (x * x * x * x - 6 * x * x * y * y + y * y * y * y)) < 1e-12 * (1 + s[0] * s[0]));
  }
}

TEST_CASE("sigma is invariant, bitwise for signed permutations") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (const char* s : {"A:1", "A:3", "B:2", "B:4", "D:3", "D:4"}) {
    OrbitMapSigma map(ReflectionGroup::parse(s));
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd v(map.group.dim());
      for (auto& x : v) x = n(rng);
      const Eigen::VectorXd base = sigma(map, v);
      for (const auto& g : map.group.elements()) CHECK(sigma(map, g * v) == base);
    }
  }
  for (int m = 2; m <= 7; ++m) {
    OrbitMapSigma map(ReflectionGroup::make(GroupKind::I2, m));
    Eigen::VectorXd v = vec({n(rng), n(rng)});
    const Eigen::VectorXd base = sigma(map, v);
    for (const auto& g : map.group.elements()) {
      CHECK((sigma(map, g * v) - base).cwiseAbs().maxCoeff() < 1e-12 * (1 + base.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("orbits") {
  auto a2 = ReflectionGroup::parse("A:2");
  auto o = orbit(a2, vec({1, 2, 3}));
  REQUIRE(o.size() == 6);
  CHECK(o.front() == vec({1, 2, 3}));
  CHECK(o.back() == vec({3, 2, 1}));
  CHECK(orbit(a2, vec({1, 1, 2})).size() == 3);
  CHECK(orbit(ReflectionGroup::parse("B:2"), vec({1, 0})).size() == 4);
  CHECK(orbit(ReflectionGroup::parse("I2:5"), vec({1, 0})).size() == 5);
  CHECK(orbit(ReflectionGroup::parse("I2:5"), vec({1, 0.3})).size() == 10);
  CHECK(orbit(ReflectionGroup::parse("D:3"), vec({1, 1, 1})).size() == 4);
}

TEST_CASE("fiber examples") {
  OrbitMapSigma a1(ReflectionGroup::parse("A:1"));
  auto f = fiber(a1, vec({0, -1}), 1e-12);
  REQUIRE(f.size() == 2);
  CHECK(f[0] == vec({-1, 1}));
  CHECK(f[1] == vec({1, -1}));
  CHECK(fiber(a1, vec({0, 1}), 1e-12).empty());

  OrbitMapSigma b2(ReflectionGroup::parse("B:2"));
  auto fb = fiber(b2, vec({2, 1}), 1e-12);
  REQUIRE(fb.size() == 4);
  for (const auto& p : {vec({1, 1}), vec({1, -1}), vec({-1, 1}), vec({-1, -1})}) CHECK(contains(fb, p, 1e-7));
  // z-roots real but negative
  CHECK(fiber(b2, vec({-3, 2}), 1e-12).empty());

  OrbitMapSigma i4(ReflectionGroup::parse("I2:4"));
  auto fi = fiber(i4, vec({1, 1}), 1e-12);
  CHECK(fi.size() == 4);
  CHECK(contains(fi, vec({1, 0}), 1e-7));
  CHECK(contains(fi, vec({0, -1}), 1e-7));
  CHECK(fiber(i4, vec({1, 2}), 1e-12).empty());
  CHECK(fiber(i4, vec({-1, 0}), 1e-12).empty());
  auto origin = fiber(i4, vec({0, 0}), 1e-12);
  REQUIRE(origin.size() == 1);
  CHECK(origin[0].norm() == 0.0);

  OrbitMapSigma d3(ReflectionGroup::parse("D:3"));
  auto fd = fiber(d3, sigma(d3, vec({1, 2, 3})), 1e-12);
  CHECK(fd.size() == 24);
  CHECK_FALSE(contains(fd, vec({-1, 2, 3}), 1e-6));
  CHECK(contains(fd, vec({-1, -2, 3}), 1e-9));
}

TEST_CASE("fiber equals orbit (property)") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n;
  std::vector<std::string> specs{"A:1", "A:2", "B:2", "D:3", "I2:3", "I2:4", "I2:5", "I2:6"};
  for (const auto& s : specs) {
    OrbitMapSigma map(ReflectionGroup::parse(s));
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd v(map.group.dim());
      for (auto& x : v) x = n(rng);
      const Eigen::VectorXd y = sigma(map, v);
      auto f = fiber(map, y, 1e-10);
      auto o = orbit(map.group, v);
      INFO(s, " trial ", trial);
      REQUIRE(f.size() == o.size());
      const double tol = 1e-7 * (1 + v.cwiseAbs().maxCoeff());
      for (const auto& w : f) {
        CHECK(sigma_residual(map, w, y) <= 1e-10);
        CHECK(contains(o, w, tol));
      }
      for (const auto& w : o) CHECK(contains(f, w, tol));
    }
  }
}

TEST_CASE("irreducible decomposition") {
  auto a3 = ReflectionGroup::parse("A:3");
  auto parts = irreducible_decomposition(a3, 1);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].cols() == 1);
  CHECK(parts[1].cols() == 3);
  // trivial summand is the diagonal line
  Eigen::VectorXd diag = parts[0].col(0) * (parts[0](0, 0) > 0 ? 1.0 : -1.0);
  CHECK((diag - Eigen::VectorXd::Constant(4, 0.5)).cwiseAbs().maxCoeff() < 1e-10);
  // complement is the sum-zero hyperplane
  CHECK((Eigen::RowVectorXd::Ones(4) * parts[1]).cwiseAbs().maxCoeff() < 1e-10);

  CHECK(irreducible_decomposition(ReflectionGroup::parse("B:3"), 1).size() == 1);
  CHECK(irreducible_decomposition(ReflectionGroup::parse("I2:5"), 1).size() == 1);
  CHECK(irreducible_decomposition(ReflectionGroup::parse("I2:2"), 1).size() == 2);
}

TEST_CASE("k data against known stabilisers") {
  struct Case {
    const char* spec;
    int d;
    int k;
  };
  for (const Case& c : {Case{"A:1", 2, 2}, Case{"A:2", 3, 3}, Case{"A:4", 5, 5}, Case{"B:2", 4, 4},
                        Case{"B:3", 6, 6}, Case{"D:3", 4, 4}, Case{"D:4", 6, 8}, Case{"D:5", 8, 10},
                        Case{"I2:2", 2, 2}, Case{"I2:5", 5, 5}, Case{"I2:8", 8, 8}}) {
    auto g = ReflectionGroup::parse(c.spec);
    KData kd = compute_k(g, OrbitMapSigma(g));
    INFO(c.spec);
    CHECK(kd.d == c.d);
    CHECK(kd.k_value == c.k);
    for (const auto& r : kd.records) {
      CHECK(r.orbit_size * r.isotropy_order == g.order());
      CHECK(r.max_random_isotropy <= r.isotropy_order);
      CHECK(isotropy_order(g, r.v) == r.isotropy_order);
      CHECK(std::abs(r.v.norm() - 1.0) < 1e-12);
      // v lies in its summand
      CHECK((r.basis * (r.basis.transpose() * r.v) - r.v).norm() < 1e-9);
    }
  }
}

TEST_CASE("k data against lattice search") {
  // maximise isotropy over small integer lattice points projected into each summand
  for (const char* s : {"A:2", "A:3", "B:3", "D:4"}) {
    auto g = ReflectionGroup::parse(s);
    KData kd = compute_k(g, OrbitMapSigma(g));
    const int dim = g.dim();
    for (const auto& r : kd.records) {
      const Eigen::MatrixXd P = r.basis * r.basis.transpose();
      std::int64_t best = 0;
      std::vector<int> digits(static_cast<std::size_t>(dim), -2);
      while (true) {
        Eigen::VectorXd x(dim);
        for (int i = 0; i < dim; ++i) x[i] = digits[static_cast<std::size_t>(i)];
        Eigen::VectorXd u = P * x;
        if (u.norm() > 1e-9) best = std::max(best, isotropy_order(g, u / u.norm()));
        int i = 0;
        while (i < dim && digits[static_cast<std::size_t>(i)] == 2) digits[static_cast<std::size_t>(i++)] = -2;
        if (i == dim) break;
        ++digits[static_cast<std::size_t>(i)];
      }
      INFO(s);
      CHECK(best == r.isotropy_order);
    }
  }
}

TEST_CASE("k data is deterministic") {
  auto g = ReflectionGroup::parse("B:3");
  KData a = compute_k(g, OrbitMapSigma(g), 9);
  KData b = compute_k(g, OrbitMapSigma(g), 9);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].v == b.records[i].v);
}
