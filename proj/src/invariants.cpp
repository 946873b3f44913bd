#include <hyperlift/hyperpoly.hpp>
#include <hyperlift/invariants.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <set>

namespace hyperlift {

namespace {

std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Eigen::MatrixXd transposition(int dim, int i, int j) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim);
  m(i, i) = m(j, j) = 0.0;
  m(i, j) = m(j, i) = 1.0;
  return m;
}

std::vector<long long> matrix_key(const Eigen::MatrixXd& m) {
  std::vector<long long> key(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.size(); ++i) key[static_cast<std::size_t>(i)] = std::llround(m.data()[i] * 1e9);
  return key;
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

/// Greedy tolerance dedup, then lexicographic order.
std::vector<Eigen::VectorXd> dedup_points(std::vector<Eigen::VectorXd> pts, double tol) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
  std::vector<Eigen::VectorXd> kept;
  for (auto& p : pts) {
    bool dup = false;
    for (auto it = kept.rbegin(); it != kept.rend() && (*it)[0] >= p[0] - tol; ++it) {
      if ((*it - p).cwiseAbs().maxCoeff() <= tol) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(std::move(p));
  }
  std::sort(kept.begin(), kept.end(), lex_less);
  return kept;
}

/// e_1 .. e_n of the (already sorted) values, accumulated in long double.
Eigen::VectorXd elementary_symmetric(std::vector<long double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  std::vector<long double> e(n + 1, 0.0L);
  e[0] = 1.0L;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j >= 1; --j) e[j] += x[i] * e[j - 1];
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) out[static_cast<Eigen::Index>(j)] = static_cast<double>(e[j + 1]);
  return out;
}

/// Sorted roots of the monic polynomial with a_j = coeffs_j, or nothing
/// when it is not hyperbolic within tol.
std::optional<Eigen::VectorXd> hyperbolic_roots(const Eigen::VectorXd& coeffs, double tol) {
  try {
    return roots(MonicHyperbolic<double>(coeffs), tol).values();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotHyperbolic) return std::nullopt;
    throw;
  }
}

void check_enumerable(double count) {
  if (count > 1e6) throw Error(ErrorKind::EnumerationTooLarge, "fiber enumeration exceeds 10^6 points");
}

/// All distinct arrangements of `mags` with sign patterns accepted by `keep`.
std::vector<Eigen::VectorXd> signed_permutations(const Eigen::VectorXd& mags,
                                                 const std::function<bool(const Eigen::VectorXd&)>& keep) {
  const auto n = static_cast<int>(mags.size());
  check_enumerable(static_cast<double>(factorial(n)) * std::ldexp(1.0, n));
  std::vector<double> p(mags.data(), mags.data() + n);
  std::sort(p.begin(), p.end());
  std::vector<Eigen::VectorXd> out;
  do {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      Eigen::VectorXd w(n);
      bool redundant = false;
      for (int i = 0; i < n; ++i) {
        const bool flip = (mask >> i) & 1u;
        if (flip && p[static_cast<std::size_t>(i)] == 0.0) redundant = true;
        w[i] = flip ? -p[static_cast<std::size_t>(i)] : p[static_cast<std::size_t>(i)];
      }
      if (!redundant && keep(w)) out.push_back(std::move(w));
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Ordinary coefficients of T_m, ascending powers.
std::vector<long double> chebyshev(int m) {
  std::vector<long double> prev{1.0L}, cur{0.0L, 1.0L};
  if (m == 0) return prev;
  for (int k = 1; k < m; ++k) {
    std::vector<long double> next(cur.size() + 1, 0.0L);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2.0L * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

std::vector<Eigen::VectorXd> dihedral_fiber(int m, double y1, double y2, double tol) {
  const double scale = 1.0 + std::max(std::abs(y1), std::abs(y2));
  if (y1 < -tol * scale) return {};
  const double r = std::sqrt(std::max(0.0, y1));
  if (r <= std::sqrt(tol)) {
    if (std::abs(y2) <= 10 * tol * scale) return {Eigen::Vector2d::Zero()};
    return {};
  }
  // cos(m theta) = c  <=>  T_m(x) = c with x = cos theta
  const long double target = static_cast<long double>(y2) / std::pow(static_cast<long double>(r), m);
  if (std::abs(target) > 1.0L + 10.0L * static_cast<long double>(tol)) return {};
  const long double c = std::clamp(target, -1.0L, 1.0L);
  const std::vector<long double> T = chebyshev(m);
  const long double lead = T.back();
  Vector<long double> a(m);
  for (int j = 1; j <= m; ++j) {
    long double cj = T[static_cast<std::size_t>(m - j)] / lead;
    if (j == m) cj -= c / lead;
    a[j - 1] = (j % 2 == 0) ? cj : -cj;
  }
  RootMultiset<long double> xs = roots(MonicHyperbolic<long double>(a), static_cast<long double>(tol) * 1e-6L);
  std::vector<Eigen::VectorXd> pts;
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    long double theta = std::acos(std::clamp(xs[i], -1.0L, 1.0L));
    // Newton polish on cos(m theta) = c where the slope allows it
    for (int it = 0; it < 3; ++it) {
      const long double g = std::cos(m * theta) - c;
      const long double dg = -m * std::sin(m * theta);
      if (std::abs(dg) < 1e-6L) break;
      const long double next = theta - g / dg;
      if (std::abs(std::cos(m * next) - c) >= std::abs(g)) break;
      theta = next;
    }
    for (long double s : {1.0L, -1.0L}) {
      Eigen::Vector2d w(static_cast<double>(r * std::cos(theta)), static_cast<double>(s * r * std::sin(theta)));
      pts.push_back(w);
    }
  }
  return pts;
}

}  // namespace

namespace {

// entries within rounding of 0, +-1/2, +-1 are made exact, so rotations by
// multiples of pi/2 act as exact signed permutations
Eigen::MatrixXd snap(Eigen::MatrixXd m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double h = std::round(2.0 * m.data()[i]) / 2.0;
    if (std::abs(h) <= 1.0 && std::abs(m.data()[i] - h) < 1e-14) m.data()[i] = h;
  }
  return m;
}

}  // namespace

std::vector<Eigen::MatrixXd> enumerate_closure(const std::vector<Eigen::MatrixXd>& gens, std::int64_t limit) {
  if (gens.empty()) throw Error(ErrorKind::InvalidInput, "no generators");
  const Eigen::Index dim = gens.front().rows();
  std::vector<Eigen::MatrixXd> elems{Eigen::MatrixXd::Identity(dim, dim)};
  std::set<std::vector<long long>> seen{matrix_key(elems.front())};
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (const auto& g : gens) {
      Eigen::MatrixXd y = snap(g * elems[head]);
      if (seen.insert(matrix_key(y)).second) {
        elems.push_back(std::move(y));
        if (static_cast<std::int64_t>(elems.size()) > limit) {
          throw Error(ErrorKind::EnumerationTooLarge, "group closure exceeds " + std::to_string(limit));
        }
      }
    }
  }
  return elems;
}

ReflectionGroup ReflectionGroup::make(GroupKind kind, int p) {
  ReflectionGroup g;
  g.kind_ = kind;
  g.parameter_ = p;
  switch (kind) {
    case GroupKind::A:
      if (p < 1 || p > 11) throw Error(ErrorKind::UnsupportedParameter, "A(n) needs 1 <= n <= 11");
      g.dim_ = p + 1;
      g.order_ = factorial(p + 1);
      for (int i = 0; i + 1 < g.dim_; ++i) g.generators_.push_back(transposition(g.dim_, i, i + 1));
      break;
    case GroupKind::B:
    case GroupKind::D: {
      const int lo = kind == GroupKind::B ? 2 : 3;
      if (p < lo || p > 12) {
        throw Error(ErrorKind::UnsupportedParameter, std::string(kind == GroupKind::B ? "B" : "D") +
                                                         "(n) needs " + std::to_string(lo) + " <= n <= 12");
      }
      g.dim_ = p;
      g.order_ = factorial(p) << (kind == GroupKind::B ? p : p - 1);
      for (int i = 0; i + 1 < p; ++i) g.generators_.push_back(transposition(p, i, i + 1));
      Eigen::MatrixXd s = Eigen::MatrixXd::Identity(p, p);
      if (kind == GroupKind::B) {
        s(p - 1, p - 1) = -1.0;
      } else {
        // (.., x, y) -> (.., -y, -x)
        s(p - 2, p - 2) = s(p - 1, p - 1) = 0.0;
        s(p - 2, p - 1) = s(p - 1, p - 2) = -1.0;
      }
      g.generators_.push_back(s);
      break;
    }
    case GroupKind::I2: {
      if (p < 2 || p > 1000) throw Error(ErrorKind::UnsupportedParameter, "I2(m) needs 2 <= m <= 1000");
      g.dim_ = 2;
      g.order_ = 2 * p;
      Eigen::Matrix2d s0, s1;
      s0 << 1, 0, 0, -1;
      const double a = 2.0 * std::numbers::pi / p;
      s1 << std::cos(a), std::sin(a), std::sin(a), -std::cos(a);
      g.generators_ = {s0, snap(s1)};
      break;
    }
  }
  if (g.order_ <= kMaxEnumerated) {
    auto elems = enumerate_closure(g.generators_, kMaxEnumerated);
    if (static_cast<std::int64_t>(elems.size()) != g.order_) {
      throw Error(ErrorKind::InvalidInput, "closure of " + g.spec() + " has order " + std::to_string(elems.size()));
    }
    g.elements_ = std::make_shared<const std::vector<Eigen::MatrixXd>>(std::move(elems));
  }
  return g;
}

ReflectionGroup ReflectionGroup::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw Error(ErrorKind::InvalidInput, "group spec must look like A:n");
  const std::string family(spec.substr(0, colon));
  const std::string num(spec.substr(colon + 1));
  int p = 0;
  try {
    std::size_t used = 0;
    p = std::stoi(num, &used);
    if (used != num.size()) throw std::invalid_argument(num);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidInput, "bad group parameter '" + num + "'");
  }
  if (family == "A") return make(GroupKind::A, p);
  if (family == "B") return make(GroupKind::B, p);
  if (family == "D") return make(GroupKind::D, p);
  if (family == "I2") return make(GroupKind::I2, p);
  throw Error(ErrorKind::UnsupportedParameter, "unknown group family '" + family + "'");
}

std::string ReflectionGroup::spec() const {
  const char* fam = kind_ == GroupKind::A ? "A" : kind_ == GroupKind::B ? "B" : kind_ == GroupKind::D ? "D" : "I2";
  return std::string(fam) + ":" + std::to_string(parameter_);
}

const std::vector<Eigen::MatrixXd>& ReflectionGroup::elements() const {
  if (!elements_) {
    throw Error(ErrorKind::EnumerationTooLarge, spec() + " has order " + std::to_string(order_) + " > " +
                                                    std::to_string(kMaxEnumerated));
  }
  return *elements_;
}

OrbitMapSigma::OrbitMapSigma(ReflectionGroup g) : group(std::move(g)) {
  const int p = group.parameter();
  switch (group.kind()) {
    case GroupKind::A:
      for (int j = 1; j <= p + 1; ++j) degrees.push_back(j);
      break;
    case GroupKind::B:
      for (int j = 1; j <= p; ++j) degrees.push_back(2 * j);
      break;
    case GroupKind::D:
      for (int j = 1; j < p; ++j) degrees.push_back(2 * j);
      degrees.push_back(p);
      break;
    case GroupKind::I2:
      degrees = {2, p};
      break;
  }
}

int OrbitMapSigma::d() const { return *std::max_element(degrees.begin(), degrees.end()); }

Eigen::VectorXd sigma(const OrbitMapSigma& map, const Eigen::Ref<const Eigen::VectorXd>& v) {
  const int dim = map.group.dim();
  if (v.size() != dim) {
    throw Error(ErrorKind::DimensionMismatch, "point has dimension " + std::to_string(v.size()) + ", expected " +
                                                  std::to_string(dim));
  }
  std::vector<long double> x(v.data(), v.data() + dim);
  switch (map.group.kind()) {
    case GroupKind::A: return elementary_symmetric(std::move(x));
    case GroupKind::B: {
      for (auto& xi : x) xi *= xi;
      return elementary_symmetric(std::move(x));
    }
    case GroupKind::D: {
      int negatives = 0;
      std::vector<long double> mags(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        negatives += x[i] < 0;
        mags[i] = std::abs(x[i]);
      }
      std::vector<long double> sq = mags;
      for (auto& s : sq) s *= s;
      Eigen::VectorXd e = elementary_symmetric(std::move(sq));
      std::sort(mags.begin(), mags.end());
      long double prod = 1.0L;
      for (auto m : mags) prod *= m;
      e[dim - 1] = static_cast<double>(negatives % 2 ? -prod : prod);
      return e;
    }
    case GroupKind::I2: {
      const long double re = x[0], im = x[1];
      long double pr = 1.0L, pi = 0.0L;
      for (int k = 0; k < map.group.parameter(); ++k) {
        const long double nr = pr * re - pi * im;
        pi = pr * im + pi * re;
        pr = nr;
      }
      return Eigen::Vector2d(static_cast<double>(re * re + im * im), static_cast<double>(pr));
    }
  }
  return {};
}

double sigma_residual(const OrbitMapSigma& map, const Eigen::Ref<const Eigen::VectorXd>& w,
                      const Eigen::Ref<const Eigen::VectorXd>& y) {
  return (sigma(map, w) - y).cwiseAbs().maxCoeff() / (1.0 + y.cwiseAbs().maxCoeff());
}

std::vector<Eigen::VectorXd> orbit(const ReflectionGroup& group, const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() != group.dim()) throw Error(ErrorKind::DimensionMismatch, "point dimension does not match group");
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(group.elements().size());
  for (const auto& g : group.elements()) pts.push_back(g * v);
  return dedup_points(std::move(pts), 1e-10 * (1.0 + v.cwiseAbs().maxCoeff()));
}

std::vector<Eigen::VectorXd> fiber(const OrbitMapSigma& map, const Eigen::Ref<const Eigen::VectorXd>& y, double tol) {
  const int n = map.n_invariants();
  if (y.size() != n) throw Error(ErrorKind::DimensionMismatch, "orbit-space point has wrong dimension");
  const double yscale = 1.0 + y.cwiseAbs().maxCoeff();
  std::vector<Eigen::VectorXd> pts;
  switch (map.group.kind()) {
    case GroupKind::A: {
      auto r = hyperbolic_roots(y, tol);
      if (!r) return {};
      check_enumerable(static_cast<double>(factorial(n)));
      std::vector<double> p(r->data(), r->data() + n);
      do {
        pts.push_back(Eigen::Map<Eigen::VectorXd>(p.data(), n));
      } while (std::next_permutation(p.begin(), p.end()));
      break;
    }
    case GroupKind::B:
    case GroupKind::D: {
      Eigen::VectorXd a = y;
      const bool is_d = map.group.kind() == GroupKind::D;
      if (is_d) a[n - 1] = y[n - 1] * y[n - 1];
      // exact trailing zeros deflate to exact zero roots (sqrt would amplify any error)
      Eigen::Index live = n;
      while (live > 0 && a[live - 1] == 0.0) --live;
      Eigen::VectorXd zs = Eigen::VectorXd::Zero(n);
      if (live > 0) {
        auto z = hyperbolic_roots(a.head(live), tol);
        if (!z) return {};
        zs.tail(live) = *z;
      }
      const std::optional<Eigen::VectorXd> z = zs;
      Eigen::VectorXd mags(n);
      for (int i = 0; i < n; ++i) {
        if ((*z)[i] < -tol * yscale) return {};
        mags[i] = std::sqrt(std::max(0.0, (*z)[i]));
      }
      const double target = y[n - 1];
      pts = signed_permutations(mags, [&](const Eigen::VectorXd& w) {
        if (!is_d) return true;
        if ((w.array() == 0.0).any()) return true;
        const bool negative = (w.array() < 0.0).count() % 2 == 1;
        return target == 0.0 || negative == (target < 0.0);
      });
      break;
    }
    case GroupKind::I2:
      pts = dihedral_fiber(map.group.parameter(), y[0], y[1], tol);
      break;
  }
  if (pts.empty()) return {};
  double worst = 0.0;
  for (const auto& w : pts) worst = std::max(worst, sigma_residual(map, w, y));
  if (worst > 10 * tol) return {};
  if (worst > tol) {
    throw Error(ErrorKind::ToleranceViolation, "fiber residual " + std::to_string(worst) + " in (tol, 10 tol]");
  }
  double mag = 0.0;
  for (const auto& w : pts) mag = std::max(mag, w.cwiseAbs().maxCoeff());
  return dedup_points(std::move(pts), 1e-10 * (1.0 + mag));
}

std::vector<Eigen::MatrixXd> irreducible_decomposition(const ReflectionGroup& group, std::uint64_t seed) {
  const auto& elems = group.elements();
  const int dim = group.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd R(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) R(i, j) = normal(rng);
  R = (R + R.transpose()).eval();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& g : elems) M += g.transpose() * R * g;
  M /= static_cast<double>(elems.size());
  M = (0.5 * (M + M.transpose())).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const Eigen::VectorXd& lam = es.eigenvalues();
  const double gap = 1e-8 * (1.0 + lam.cwiseAbs().maxCoeff());
  std::vector<Eigen::MatrixXd> parts;
  int start = 0;
  for (int i = 1; i <= dim; ++i) {
    if (i == dim || lam[i] - lam[i - 1] > gap) {
      parts.push_back(es.eigenvectors().middleCols(start, i - start));
      start = i;
    }
  }
  for (const auto& B : parts) {
    // <chi, chi> = 1 for an absolutely irreducible summand
    double norm = 0.0;
    for (const auto& g : elems) {
      const double chi = (B.transpose() * g * B).trace();
      norm += chi * chi;
    }
    norm /= static_cast<double>(elems.size());
    if (std::abs(norm - 1.0) > 1e-6) {
      throw Error(ErrorKind::InvalidInput, "isotypic component of " + group.spec() + " is not irreducible");
    }
  }
  std::stable_sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.cols() < b.cols(); });
  return parts;
}

std::int64_t isotropy_order(const ReflectionGroup& group, const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double tol = 1e-9 * std::max(1.0, v.cwiseAbs().maxCoeff());
  std::int64_t count = 0;
  for (const auto& g : group.elements()) count += ((g * v - v).cwiseAbs().maxCoeff() <= tol);
  return count;
}

KData compute_k(const ReflectionGroup& group, const OrbitMapSigma& map, std::uint64_t seed) {
  KData kd;
  kd.d = map.d();
  const auto& elems = group.elements();
  const int dim = group.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  for (const Eigen::MatrixXd& B : irreducible_decomposition(group, seed)) {
    IrreducibleRecord rec;
    rec.basis = B;
    const Eigen::MatrixXd P = B * B.transpose();

    auto canonical = [](Eigen::VectorXd u) {
      u.normalize();
      for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (std::abs(u[i]) > 1e-9) {
          if (u[i] < 0) u = -u;
          break;
        }
      }
      return u;
    };

    // fixed lines of every element inside V_i, then structured directions
    std::vector<Eigen::VectorXd> lines;
    for (const auto& g : elems) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu((g - Eigen::MatrixXd::Identity(dim, dim)) * B);
      lu.setThreshold(1e-9);
      Eigen::MatrixXd K = lu.kernel();
      if (K.cols() == 1 && K.norm() > 0) lines.push_back(canonical(B * K));
    }
    std::vector<Eigen::VectorXd> structured;
    for (int j = 0; j < dim; ++j) structured.push_back(P * Eigen::VectorXd::Unit(dim, j));
    structured.push_back(P * Eigen::VectorXd::Ones(dim));
    for (int j = 0; j < dim; ++j)
      for (int l = j + 1; l < dim; ++l) structured.push_back(P * (Eigen::VectorXd::Unit(dim, j) + Eigen::VectorXd::Unit(dim, l)));
    for (auto& s : structured) {
      if (s.norm() > 1e-9) lines.push_back(canonical(s));
    }
    lines = dedup_points(std::move(lines), 1e-9);

    bool have = false;
    for (const auto& u : lines) {
      const std::int64_t iso = isotropy_order(group, u);
      if (!have || iso > rec.isotropy_order) {
        rec.isotropy_order = iso;
        rec.v = u;
        have = true;
      }
    }
    rec.fixed_lines_checked = static_cast<int>(lines.size());

    for (int s = 0; s < 64; ++s) {
      Eigen::VectorXd c(B.cols());
      for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = normal(rng);
      Eigen::VectorXd u = (B * c).normalized();
      const std::int64_t iso = isotropy_order(group, u);
      rec.max_random_isotropy = std::max(rec.max_random_isotropy, iso);
      if (iso > rec.isotropy_order) {
        rec.isotropy_order = iso;
        rec.v = u;
      }
    }
    rec.random_checked = 64;
    rec.orbit_size = group.order() / rec.isotropy_order;
    kd.records.push_back(std::move(rec));
  }

  kd.k_value = kd.d;
  for (const auto& r : kd.records) kd.k_value = std::max<int>(kd.k_value, static_cast<int>(r.orbit_size));
  return kd;
}

}  // namespace hyperlift
