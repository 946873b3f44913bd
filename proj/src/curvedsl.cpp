#include <hyperlift/curvedsl.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace hyperlift {

namespace {

using Op = CurveExpr::Op;

CurveExpr make(Op op, std::vector<CurveExpr> args, double value = 0.0) {
  auto node = std::make_shared<CurveExpr::Node>();
  node->op = op;
  node->value = value;
  node->args = std::move(args);
  return CurveExpr(std::move(node));
}

bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

bool nonnegative_by_construction(const CurveExpr& e) {
  const auto& n = e.node();
  switch (n.op) {
    case Op::Const: return n.value >= 0.0;
    case Op::Abs:
    case Op::PowAbs:
    case Op::Exp: return true;
    case Op::Pow:
      if (!is_integer(n.value)) return true;  // validated when built
      return std::fmod(n.value, 2.0) == 0.0 || nonnegative_by_construction(n.args[0]);
    case Op::Add:
    case Op::Mul:
    case Op::Div:
      return nonnegative_by_construction(n.args[0]) && nonnegative_by_construction(n.args[1]);
    default: return false;
  }
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  CurveExpr parse() {
    skip_ws();
    if (pos_ == src_.size()) throw SyntaxError(pos_, "empty expression");
    CurveExpr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError(pos_, std::string("unexpected '") + src_[pos_] + "'");
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      throw SyntaxError(pos_, std::string("expected '") + c + "'");
    }
  }

  CurveExpr expr() {
    CurveExpr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Op::Add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(Op::Sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  CurveExpr term() {
    CurveExpr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Op::Mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Op::Div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  CurveExpr unary() {
    if (accept('-')) return make(Op::Neg, {unary()});
    return power();
  }

  CurveExpr power() {
    const std::size_t start = pos_;
    CurveExpr base = primary();
    if (accept('^')) return build_pow(Op::Pow, base, rational(), start);
    return base;
  }

  static CurveExpr build_pow(Op op, CurveExpr base, double exponent, std::size_t at) {
    if (op == Op::Pow && !is_integer(exponent) && !nonnegative_by_construction(base)) {
      throw Error(ErrorKind::DomainError, "non-integer power of a possibly negative base at position " +
                                              std::to_string(at) + " (use powabs)");
    }
    return make(op, {std::move(base)}, exponent);
  }

  double number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E') && pos_ > start) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    if (pos_ == start) throw SyntaxError(pos_, "expected a number");
    const std::string text(src_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) throw SyntaxError(start, "malformed number '" + text + "'");
    return v;
  }

  double rational() {
    if (accept('(')) {
      double r = rational();
      expect(')');
      return r;
    }
    const bool negative = accept('-');
    double num = number();
    if (accept('/')) {
      const std::size_t at = pos_;
      double den = number();
      if (den == 0.0) throw SyntaxError(at, "zero denominator in exponent");
      num /= den;
    }
    return negative ? -num : num;
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  CurveExpr primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, "unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return CurveExpr::constant(number());
    if (accept('(')) {
      CurveExpr e = expr();
      expect(')');
      return e;
    }
    const std::size_t start = pos_;
    const std::string id = identifier();
    if (id.empty()) throw SyntaxError(start, std::string("unexpected '") + c + "'");
    if (id == "t") return CurveExpr::variable();
    if (id == "pi") return CurveExpr::constant(std::numbers::pi);
    if (id == "pow" || id == "powabs") {
      expect('(');
      CurveExpr base = expr();
      expect(',');
      const double r = rational();
      expect(')');
      return build_pow(id == "pow" ? Op::Pow : Op::PowAbs, base, r, start);
    }
    Op op;
    if (id == "abs") {
      op = Op::Abs;
    } else if (id == "sin") {
      op = Op::Sin;
    } else if (id == "cos") {
      op = Op::Cos;
    } else if (id == "exp") {
      op = Op::Exp;
    } else {
      throw SyntaxError(start, "unknown identifier '" + id + "'");
    }
    expect('(');
    CurveExpr arg = expr();
    expect(')');
    return make(op, {arg});
  }
};

[[noreturn]] void eval_error(double t, const std::string& what) {
  throw TimedError(ErrorKind::EvalError, t, what);
}

double checked(double v, double t, const char* what) {
  if (!std::isfinite(v)) eval_error(t, what);
  return v;
}

}  // namespace

CurveExpr CurveExpr::constant(double value) { return make(Op::Const, {}, value); }
CurveExpr CurveExpr::variable() { return make(Op::Var, {}); }

CurveExpr::Op CurveExpr::op() const { return node_->op; }

double CurveExpr::operator()(double t) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return t;
    case Op::Add: return checked(n.args[0](t) + n.args[1](t), t, "overflow in +");
    case Op::Sub: return checked(n.args[0](t) - n.args[1](t), t, "overflow in -");
    case Op::Mul: return checked(n.args[0](t) * n.args[1](t), t, "overflow in *");
    case Op::Div: {
      const double den = n.args[1](t);
      if (den == 0.0) eval_error(t, "division by zero");
      return checked(n.args[0](t) / den, t, "overflow in /");
    }
    case Op::Neg: return -n.args[0](t);
    case Op::Pow:
    case Op::PowAbs: {
      double base = n.args[0](t);
      if (n.op == Op::PowAbs) base = std::abs(base);
      if (base < 0.0 && !is_integer(n.value)) eval_error(t, "non-integer power of a negative value");
      if (base == 0.0 && n.value < 0.0) eval_error(t, "negative power of zero");
      return checked(std::pow(base, n.value), t, "overflow in power");
    }
    case Op::Abs: return std::abs(n.args[0](t));
    case Op::Sin: return std::sin(n.args[0](t));
    case Op::Cos: return std::cos(n.args[0](t));
    case Op::Exp: return checked(std::exp(n.args[0](t)), t, "overflow in exp");
  }
  return 0.0;
}

std::string CurveExpr::to_string() const {
  const Node& n = *node_;
  auto bin = [&](const char* sym) {
    return "(" + n.args[0].to_string() + " " + sym + " " + n.args[1].to_string() + ")";
  };
  switch (n.op) {
    case Op::Const: return n.value < 0 ? "(-" + format_number(-n.value) + ")" : format_number(n.value);
    case Op::Var: return "t";
    case Op::Add: return bin("+");
    case Op::Sub: return bin("-");
    case Op::Mul: return bin("*");
    case Op::Div: return bin("/");
    case Op::Neg: return "(-" + n.args[0].to_string() + ")";
    case Op::Pow: return "pow(" + n.args[0].to_string() + ", " + format_number(n.value) + ")";
    case Op::PowAbs: return "powabs(" + n.args[0].to_string() + ", " + format_number(n.value) + ")";
    case Op::Abs: return "abs(" + n.args[0].to_string() + ")";
    case Op::Sin: return "sin(" + n.args[0].to_string() + ")";
    case Op::Cos: return "cos(" + n.args[0].to_string() + ")";
    case Op::Exp: return "exp(" + n.args[0].to_string() + ")";
  }
  return {};
}

std::optional<int> CurveExpr::polynomial_degree() const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const: return 0;
    case Op::Var: return 1;
    case Op::Add:
    case Op::Sub: {
      auto a = n.args[0].polynomial_degree();
      auto b = n.args[1].polynomial_degree();
      if (!a || !b) return std::nullopt;
      return std::max(*a, *b);
    }
    case Op::Mul: {
      auto a = n.args[0].polynomial_degree();
      auto b = n.args[1].polynomial_degree();
      if (!a || !b) return std::nullopt;
      return *a + *b;
    }
    case Op::Div: {
      auto a = n.args[0].polynomial_degree();
      auto b = n.args[1].polynomial_degree();
      if (!a || !b || *b != 0) return std::nullopt;
      return a;
    }
    case Op::Neg: return n.args[0].polynomial_degree();
    case Op::Pow: {
      auto a = n.args[0].polynomial_degree();
      if (!a || !is_integer(n.value) || n.value < 0) return std::nullopt;
      return *a * static_cast<int>(n.value);
    }
    default: return std::nullopt;
  }
}

CurveExpr parse_curve_expr(std::string_view src) { return Parser(src).parse(); }

std::vector<CurveExpr> parse_curve_list(std::string_view src) {
  std::vector<CurveExpr> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= src.size(); ++i) {
    if (i == src.size() || (src[i] == ',' && depth == 0)) {
      try {
        out.push_back(parse_curve_expr(src.substr(start, i - start)));
      } catch (const SyntaxError& e) {
        throw SyntaxError(start + e.position(), "in component " + std::to_string(out.size() + 1));
      }
      start = i + 1;
    } else if (src[i] == '(') {
      ++depth;
    } else if (src[i] == ')') {
      --depth;
    }
  }
  return out;
}

bool Smoothness::at_least(const Smoothness& other) const {
  if (infinite) return true;
  if (other.infinite) return false;
  return 2 * order + (lipschitz ? 1 : 0) >= 2 * other.order + (other.lipschitz ? 1 : 0);
}

std::string Smoothness::to_string() const {
  if (infinite) return "C^inf";
  if (lipschitz) return "C^{" + std::to_string(order) + ",1}";
  return "C^" + std::to_string(order);
}

Smoothness Smoothness::parse(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != '^' && c != '{' && c != '}' && !std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s == "Cinf" || s == "smooth" || s == "C∞") return smooth();
  if (s == "Lip" || s == "lipschitz") return lipschitz_class(0);
  if (s.size() < 2 || (s[0] != 'C' && s[0] != 'c')) {
    throw Error(ErrorKind::InvalidInput, "bad smoothness class '" + std::string(text) + "'");
  }
  const std::string body = s.substr(1);
  const auto comma = body.find(',');
  try {
    if (comma == std::string::npos) return C(std::stoi(body));
    if (body.substr(comma + 1) != "1") throw Error(ErrorKind::InvalidInput, "only C^{k,1} is supported");
    return lipschitz_class(std::stoi(body.substr(0, comma)));
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidInput, "bad smoothness class '" + std::string(text) + "'");
  }
}

Eigen::VectorXd SampleTable::interpolate(double x) const {
  const Eigen::Index n = t.size();
  if (n == 0) throw Error(ErrorKind::InvalidInput, "empty sample table");
  if (x < t[0] || x > t[n - 1]) eval_error(x, "outside sampled domain");
  if (n == 1) return values.row(0).transpose();
  Eigen::Index i = std::upper_bound(t.data(), t.data() + n, x) - t.data() - 1;
  i = std::clamp<Eigen::Index>(i, 0, n - 2);
  if (x == t[i]) return values.row(i).transpose();
  if (x == t[i + 1]) return values.row(i + 1).transpose();

  // Fritsch-Carlson slopes at the two bracketing nodes
  auto secant = [&](Eigen::Index k, Eigen::Index c) {
    return (values(k + 1, c) - values(k, c)) / (t[k + 1] - t[k]);
  };
  auto node_slope = [&](Eigen::Index k, Eigen::Index c) {
    if (k == 0) return secant(0, c);
    if (k == n - 1) return secant(n - 2, c);
    const double d0 = secant(k - 1, c);
    const double d1 = secant(k, c);
    if (d0 * d1 <= 0.0) return 0.0;
    const double w0 = 2 * (t[k + 1] - t[k]) + (t[k] - t[k - 1]);
    const double w1 = (t[k + 1] - t[k]) + 2 * (t[k] - t[k - 1]);
    return (w0 + w1) / (w0 / d0 + w1 / d1);
  };
  const double h = t[i + 1] - t[i];
  const double s = (x - t[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  Eigen::VectorXd out(values.cols());
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    out[c] = h00 * values(i, c) + h10 * h * node_slope(i, c) + h01 * values(i + 1, c) +
             h11 * h * node_slope(i + 1, c);
  }
  return out;
}

CoeffCurve CoeffCurve::from_expressions(std::vector<CurveExpr> components, Interval domain,
                                        Smoothness declared) {
  if (components.empty()) throw Error(ErrorKind::InvalidInput, "curve needs at least one component");
  CoeffCurve c;
  c.dims_ = static_cast<Eigen::Index>(components.size());
  c.domain_ = domain;
  c.declared_ = declared;
  c.exprs_ = components;
  c.eval_ = [exprs = std::move(components)](double t) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(exprs.size()));
    for (std::size_t j = 0; j < exprs.size(); ++j) v[static_cast<Eigen::Index>(j)] = exprs[j](t);
    return v;
  };
  return c;
}

CoeffCurve CoeffCurve::from_samples(SampleTable table, Smoothness declared) {
  if (table.t.size() < 2) throw Error(ErrorKind::InvalidInput, "sample table needs two rows");
  CoeffCurve c;
  c.dims_ = table.values.cols();
  c.domain_ = {table.t[0], table.t[table.t.size() - 1]};
  c.declared_ = declared;
  c.eval_ = [tab = std::move(table)](double t) { return tab.interpolate(t); };
  return c;
}

CoeffCurve CoeffCurve::from_function(Eigen::Index dims, Function f, Interval domain, Smoothness declared) {
  CoeffCurve c;
  c.dims_ = dims;
  c.domain_ = domain;
  c.declared_ = declared;
  c.eval_ = std::move(f);
  return c;
}

Eigen::MatrixXd sample(const CoeffCurve& curve, const Grid& grid) {
  const double slack = 1e-12 * (1.0 + std::abs(curve.domain().lo) + std::abs(curve.domain().hi));
  Eigen::MatrixXd out(grid.size(), curve.dims());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    if (!curve.domain().contains(t, slack)) eval_error(t, "grid point outside the curve domain");
    Eigen::VectorXd v = curve(t);
    if (v.size() != curve.dims()) throw Error(ErrorKind::DimensionMismatch, "curve returned wrong size");
    out.row(i) = v.transpose();
  }
  return out;
}

}  // namespace hyperlift
