#include <hyperlift/catalog.hpp>

#include <cmath>

namespace hyperlift {

namespace {

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> c;
  auto add = [&](CatalogEntry e) { c.push_back(std::move(e)); };

  add({"crossing-lines", ExampleMode::Select, "A:1", "0,-t^2", {-1, 1}, Smoothness::smooth(), Verdict::C1, true, "",
       "roots +-t cross transversally at 0"});
  add({"double-root", ExampleMode::Select, "A:1", "2*t,t^2", {-1, 1}, Smoothness::smooth(),
       Verdict::TwiceDifferentiable, true, "", "roots t, t collide for all t"});
  add({"triple-lines", ExampleMode::Select, "A:2", "2*t,-t^2,-2*t^3", {-1, 1}, Smoothness::smooth(), Verdict::C1,
       true, "", "roots t, -t, 2t meet at 0"});
  add({"cusp-3-2", ExampleMode::Select, "A:1", "0,-powabs(t,3)", {-1, 1}, Smoothness::C(2), Verdict::C1, true, "",
       "roots +-|t|^(3/2); coefficient of class C^2"});
  add({"cusp-3-4", ExampleMode::Select, "A:1", "0,-powabs(t,1.5)", {-1, 1}, Smoothness::C(1),
       Verdict::Inconclusive, false, "cusp-3-2", "roots +-|t|^(3/4); coefficient only C^1"});
  add({"sqrt-cusp", ExampleMode::Select, "A:1", "0,-powabs(t,1)", {-1, 1}, Smoothness::lipschitz_class(0),
       Verdict::UnboundedDerivative, false, "cusp-3-2", "roots +-|t|^(1/2); coefficient only Lipschitz"});

  add({"lift-a1-cusp", ExampleMode::Lift, "A:1", "0,-powabs(t,3)", {-1, 1}, Smoothness::C(2), Verdict::C1, true, "",
       "class C^k with k = 2"});
  add({"lift-i2-circle", ExampleMode::Lift, "I2:3", "1,cos(3*t)", {-1, 1}, Smoothness::smooth(),
       Verdict::TwiceDifferentiable, true, "", "unit-speed circle through a mirror"});
  add({"lift-b2-crossing", ExampleMode::Lift, "B:2", "t^2+(0.5+t^2)^2,t^2*(0.5+t^2)^2", {-1, 1},
       Smoothness::smooth(), Verdict::TwiceDifferentiable, true, "", "sigma of (t, 1/2 + t^2)"});
  add({"lift-b2-cusp", ExampleMode::Lift, "B:2", "1+powabs(t,5),powabs(t,5)", {-1, 1}, Smoothness::C(4), Verdict::C1,
       true, "", "class C^k with k = 4; lift +-|t|^(5/2)"});
  add({"lift-b2-sqrt", ExampleMode::Lift, "B:2", "1+powabs(t,1),powabs(t,1)", {-1, 1},
       Smoothness::lipschitz_class(0), Verdict::UnboundedDerivative, false, "lift-b2-cusp",
       "lift +-|t|^(1/2); coefficients only Lipschitz"});
  return c;
}

// u -> (u0 + 0.3 u1^2, 0.5 + u1 + u0^2 / 4)
Eigen::VectorXd smooth_b2(const Eigen::VectorXd& u) {
  return Eigen::Vector2d(u[0] + 0.3 * u[1] * u[1], 0.5 + u[1] + 0.25 * u[0] * u[0]);
}

std::vector<Probe> seven_probes() {
  auto line = [](std::string name, Eigen::Vector2d p, Eigen::Vector2d d) {
    return Probe{std::move(name), [p, d](double s) -> Eigen::VectorXd { return p + s * d; }, {-1, 1}};
  };
  return {
      line("u-line", {0, 0.1}, {1, 0}),
      line("v-line", {0.2, 0}, {0, 1}),
      line("diagonal", {0, 0}, {0.7, 0.7}),
      line("antidiagonal", {0, 0}, {0.7, -0.7}),
      line("low-u-line", {0, -0.6}, {0.9, 0}),
      {"parabola-u", [](double s) -> Eigen::VectorXd { return Eigen::Vector2d(s, s * s - 0.5); }, {-1, 1}},
      {"parabola-v", [](double s) -> Eigen::VectorXd { return Eigen::Vector2d(0.5 * s * s - 0.3, s); }, {-1, 1}},
  };
}

std::vector<HarnessExample> build_harness() {
  std::vector<HarnessExample> h;
  {
    OrbitMapSigma map(ReflectionGroup::parse("B:2"));
    h.push_back({"harness-b2-smooth", "B:2",
                 [map](const Eigen::VectorXd& u) { return sigma(map, smooth_b2(u)); }, seven_probes(),
                 HarnessVerdict::Consistent, "sigma of (u + 0.3 v^2, 1/2 + v + u^2/4) on [-1,1]^2"});
  }
  h.push_back({"harness-corner", "A:1", [](const Eigen::VectorXd& u) -> Eigen::VectorXd {
                 return Eigen::Vector2d(0, -u[0] * u[0]);
               },
               {{"u-axis", [](double s) -> Eigen::VectorXd { return Eigen::Vector2d(s, 0); }, {-1, 1}},
                {"v-line", [](double s) -> Eigen::VectorXd { return Eigen::Vector2d(0.5, s); }, {-1, 1}}},
               HarnessVerdict::Consistent, "(0, -u^2): lift (u, -u), slopes bounded"});
  h.push_back({"harness-constant", "B:2", [](const Eigen::VectorXd&) -> Eigen::VectorXd {
                 return Eigen::Vector2d(5, 4);
               },
               {{"diagonal", [](double s) -> Eigen::VectorXd { return Eigen::Vector2d(s, s); }, {-1, 1}}},
               HarnessVerdict::Consistent, "constant map, all constants 0"});
  h.push_back({"harness-sqrt", "A:1", [](const Eigen::VectorXd& u) -> Eigen::VectorXd {
                 return Eigen::Vector2d(0, -std::abs(u[0]));
               },
               {{"u-axis", [](double s) -> Eigen::VectorXd { return Eigen::Vector2d(s, 0); }, {-1, 1}}},
               HarnessVerdict::ViolationDetected, "(0, -|u|): lift +-|u|^(1/2)"});
  return h;
}

}  // namespace

const std::vector<CatalogEntry>& list_examples() {
  static const std::vector<CatalogEntry> catalog = build_catalog();
  return catalog;
}

const CatalogEntry& find_example(const std::string& name) {
  for (const auto& e : list_examples()) {
    if (e.name == name) return e;
  }
  throw Error(ErrorKind::InvalidInput, "no catalog example named '" + name + "'");
}

CoeffCurve make_curve(const CatalogEntry& entry) {
  return CoeffCurve::from_expressions(parse_curve_list(entry.curve), entry.domain, entry.declared);
}

const std::vector<HarnessExample>& harness_examples() {
  static const std::vector<HarnessExample> examples = build_harness();
  return examples;
}

const HarnessExample& find_harness(const std::string& name) {
  for (const auto& e : harness_examples()) {
    if (e.name == name) return e;
  }
  throw Error(ErrorKind::InvalidInput, "no harness example named '" + name + "'");
}

}  // namespace hyperlift
