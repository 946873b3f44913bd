#pragma once

// Curve expressions in one variable t.
//
//   expr     := term { ('+' | '-') term }
//   term     := unary { ('*' | '/') unary }
//   unary    := '-' unary | power
//   power    := primary [ '^' rational ]
//   primary  := number | 't' | 'pi' | '(' expr ')'
//             | ('abs' | 'sin' | 'cos' | 'exp') '(' expr ')'
//             | ('pow' | 'powabs') '(' expr ',' rational ')'
//   rational := ['-'] number [ '/' number ] | '(' rational ')'
//
// powabs(e, r) is |e|^r. A non-integer exponent is only accepted on a base
// that is nonnegative by construction (abs, powabs, exp, even powers,
// nonnegative constants); anything else is a DomainError at parse time.

#include <hyperlift/errors.hpp>
#include <hyperlift/grid.hpp>

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hyperlift {

class CurveExpr {
 public:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, PowAbs, Abs, Sin, Cos, Exp };

  struct Node;

  CurveExpr() = default;
  explicit CurveExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static CurveExpr constant(double value);
  static CurveExpr variable();

  Op op() const;
  /// Evaluates at t; throws TimedError(EvalError) at singular points.
  double operator()(double t) const;
  /// Canonical, fully parenthesized text; parse(to_string()) reprints identically.
  std::string to_string() const;
  /// Degree when the expression is a polynomial in t, otherwise nullopt.
  std::optional<int> polynomial_degree() const;

  const Node& node() const { return *node_; }

 private:
  std::shared_ptr<const Node> node_;
};

struct CurveExpr::Node {
  Op op;
  double value = 0.0;  // constant value or exponent
  std::vector<CurveExpr> args;
};

CurveExpr parse_curve_expr(std::string_view src);

/// Comma-separated list of expressions, e.g. "0,-t^2". Commas inside
/// parentheses belong to pow/powabs.
std::vector<CurveExpr> parse_curve_list(std::string_view src);

/// Declared smoothness C^k, C^{k,1} or C^inf. Metadata only.
struct Smoothness {
  int order = 0;
  bool lipschitz = false;  // C^{order,1}
  bool infinite = false;

  static Smoothness C(int k) { return {k, false, false}; }
  static Smoothness lipschitz_class(int k = 0) { return {k, true, false}; }
  static Smoothness smooth() { return {0, false, true}; }

  /// Strict partial order on the usual scale C^0 < C^{0,1} < C^1 < ...
  bool at_least(const Smoothness& other) const;
  std::string to_string() const;
  static Smoothness parse(std::string_view text);

  bool operator==(const Smoothness&) const = default;
};

/// Dense samples over a uniform grid; off-node queries use monotone
/// piecewise-cubic Hermite interpolation (C^1, no overshoot).
struct SampleTable {
  Eigen::VectorXd t;
  Eigen::MatrixXd values;  // rows = samples, cols = components
  std::vector<std::string> names;

  Eigen::VectorXd interpolate(double t) const;
};

/// t -> (a_1(t), ..., a_n(t)) on a fixed domain, with a declared class.
class CoeffCurve {
 public:
  using Function = std::function<Eigen::VectorXd(double)>;

  static CoeffCurve from_expressions(std::vector<CurveExpr> components, Interval domain,
                                     Smoothness declared = Smoothness::smooth());
  static CoeffCurve from_samples(SampleTable table, Smoothness declared = Smoothness::C(0));
  static CoeffCurve from_function(Eigen::Index dims, Function f, Interval domain,
                                  Smoothness declared = Smoothness::smooth());

  Eigen::Index dims() const { return dims_; }
  const Interval& domain() const { return domain_; }
  const Smoothness& declared_class() const { return declared_; }
  /// Expression components, empty for sampled or function-backed curves.
  const std::vector<CurveExpr>& expressions() const { return exprs_; }

  Eigen::VectorXd operator()(double t) const { return eval_(t); }

 private:
  Eigen::Index dims_ = 0;
  Interval domain_;
  Smoothness declared_;
  std::vector<CurveExpr> exprs_;
  Function eval_;
};

/// Row i is the coefficient vector at grid point i.
Eigen::MatrixXd sample(const CoeffCurve& curve, const Grid& grid);

}  // namespace hyperlift
