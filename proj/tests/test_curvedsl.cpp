#include <hyperlift/curvedsl.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hyperlift;

TEST_CASE("parse: grammar smoke cases") {
  auto sq = parse_curve_expr("t^2");
  CHECK(sq.op() == CurveExpr::Op::Pow);
  CHECK(sq.polynomial_degree() == 2);
  CHECK(sq(3.0) == 9.0);

  auto cusp = parse_curve_expr("-powabs(t,3)");
  CHECK(cusp.op() == CurveExpr::Op::Neg);
  CHECK(cusp.node().args[0].op() == CurveExpr::Op::PowAbs);
  CHECK(cusp(-2.0) == -8.0);
  CHECK_FALSE(cusp.polynomial_degree().has_value());

  auto osc = parse_curve_expr("sin(1/t)");
  CHECK(osc(2.0) == doctest::Approx(std::sin(0.5)));
  try {
    osc(0.0);
    FAIL("expected EvalError");
  } catch (const TimedError& e) {
    CHECK(e.kind() == ErrorKind::EvalError);
    CHECK(e.t() == 0.0);
  }
}

TEST_CASE("parse: precedence and literals") {
  CHECK(parse_curve_expr("-t^2")(3.0) == -9.0);
  CHECK(parse_curve_expr("2*t+1")(2.0) == 5.0);
  CHECK(parse_curve_expr("2-t-1")(1.0) == 0.0);
  CHECK_THROWS_AS(parse_curve_expr("t^(3/2)"), Error);
  CHECK(parse_curve_expr("abs(t)^(3/2)")(4.0) == 8.0);
  CHECK(parse_curve_expr("pow(abs(t), 1/2)")(4.0) == 2.0);
  CHECK(parse_curve_expr("1.5e1")(0.0) == 15.0);
  CHECK(parse_curve_expr("cos(pi)")(0.0) == doctest::Approx(-1.0));
  CHECK(parse_curve_expr("exp(t)")(0.0) == 1.0);
  CHECK(parse_curve_expr("t^-1")(4.0) == 0.25);
}

TEST_CASE("parse: errors carry positions") {
  try {
    parse_curve_expr("t + * 2");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(parse_curve_expr(""), SyntaxError);
  CHECK_THROWS_AS(parse_curve_expr("foo(t)"), SyntaxError);
  CHECK_THROWS_AS(parse_curve_expr("(t"), SyntaxError);
  CHECK_THROWS_AS(parse_curve_expr("t)"), SyntaxError);
  try {
    parse_curve_expr("pow(t, 0.5)");
    FAIL("expected DomainError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainError);
  }
  CHECK_NOTHROW(parse_curve_expr("pow(t, 3)"));
  CHECK_NOTHROW(parse_curve_expr("pow(t^2, 0.5)"));
}

TEST_CASE("print/parse round trip is stable") {
  for (const char* src : {"t^2", "-powabs(t,3)", "sin(1/t)", "2*t - 3/(1+t^2)", "exp(-t)*cos(5*t)",
                          "powabs(t - 0.1, 1/3)", "pi*t", "-(-t)"}) {
    const std::string once = parse_curve_expr(src).to_string();
    CHECK(parse_curve_expr(once).to_string() == once);
  }
}

TEST_CASE("property: fuzzed input parses or raises a library error") {
  const std::vector<std::string> tokens = {"t", "1", "2.5", "+", "-", "*", "/", "^", "(", ")", ",",
                                           "sin", "cos", "exp", "abs", "pow", "powabs", "pi", " ", "e", "3/2", "."};
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, tokens.size() - 1);
  std::uniform_int_distribution<int> len(1, 12);
  int parsed = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    std::string src;
    for (int k = len(rng); k > 0; --k) src += tokens[pick(rng)];
    try {
      auto e = parse_curve_expr(src);
      ++parsed;
      try {
        (void)e(0.3);
      } catch (const TimedError&) {
      }
    } catch (const Error& e) {
      CHECK((e.kind() == ErrorKind::SyntaxError || e.kind() == ErrorKind::DomainError));
    }
  }
  CHECK(parsed > 0);
}

TEST_CASE("parse_curve_list splits on top-level commas") {
  auto list = parse_curve_list("0, -powabs(t,1), pow(t, 2)");
  REQUIRE(list.size() == 3);
  CHECK(list[1](-0.25) == -0.25);
  CHECK(list[2](3.0) == 9.0);
}

TEST_CASE("sample") {
  auto curve = CoeffCurve::from_expressions(parse_curve_list("0,-t^2"), {-1, 1});
  auto rows = sample(curve, Grid({-1, 1}, 1));
  REQUIRE(rows.rows() == 3);
  CHECK(rows(0, 0) == 0.0);
  CHECK(rows(0, 1) == -1.0);
  CHECK(rows(1, 1) == 0.0);
  CHECK(rows(2, 1) == -1.0);

  auto lin = CoeffCurve::from_expressions(parse_curve_list("t"), {0, 1});
  CHECK(lin(0.5)[0] == 0.5);

  auto abs_curve = CoeffCurve::from_expressions(parse_curve_list("0,-powabs(t,1)"), {-1, 1});
  CHECK(abs_curve(-0.25)[1] == -0.25);

  auto singular = CoeffCurve::from_expressions(parse_curve_list("1/t"), {-1, 1});
  try {
    sample(singular, Grid({-1, 1}, 2));
    FAIL("expected EvalError");
  } catch (const TimedError& e) {
    CHECK(e.t() == 0.0);
  }
}

TEST_CASE("sampled curves reproduce nodes and interpolate C1-smoothly") {
  SampleTable tab;
  const int n = 33;
  tab.t = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
  tab.values.resize(n, 1);
  for (int i = 0; i < n; ++i) tab.values(i, 0) = std::sin(tab.t[i]);
  auto curve = CoeffCurve::from_samples(tab, Smoothness::C(1));
  CHECK(curve(tab.t[5])[0] == tab.values(5, 0));
  CHECK(std::abs(curve(0.51)[0] - std::sin(0.51)) < 1e-5);
  CHECK_THROWS_AS(curve(1.5), TimedError);

  // monotone data does not overshoot
  SampleTable step;
  step.t = Eigen::VectorXd::LinSpaced(5, 0.0, 4.0);
  step.values = (Eigen::MatrixXd(5, 1) << 0, 0, 1, 1, 1).finished();
  auto sc = CoeffCurve::from_samples(step);
  for (double x = 0; x <= 4; x += 0.05) {
    CHECK(sc(x)[0] >= 0.0);
    CHECK(sc(x)[0] <= 1.0 + 1e-15);
  }
}

TEST_CASE("smoothness classes") {
  CHECK(Smoothness::parse("C^2") == Smoothness::C(2));
  CHECK(Smoothness::parse("C^{0,1}") == Smoothness::lipschitz_class(0));
  CHECK(Smoothness::parse("Cinf").infinite);
  CHECK(Smoothness::C(2).at_least(Smoothness::lipschitz_class(1)));
  CHECK_FALSE(Smoothness::lipschitz_class(0).at_least(Smoothness::C(1)));
  CHECK(Smoothness::parse(Smoothness::lipschitz_class(1).to_string()) == Smoothness::lipschitz_class(1));
}
