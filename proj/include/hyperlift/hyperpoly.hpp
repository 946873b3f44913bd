#pragma once

// Monic hyperbolic polynomials P(x) = x^n + sum_j (-1)^j a_j x^(n-j).
//
// With this sign convention a_j is the j-th elementary symmetric function of
// the roots. Root extraction exploits hyperbolicity: the critical points of a
// hyperbolic polynomial are real and interlace its roots, so each root is
// bracketed between consecutive critical points (computed recursively) and
// refined by bisection. Multiple roots sit on critical points and are picked
// up without ever being reported as a complex pair.
//
// Everything is templated on the scalar type; evaluation and bisection run in
// a wider working type (long double by default).

#include <hyperlift/errors.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hyperlift {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using VectorXd = Vector<double>;
using MatrixXd = Eigen::MatrixXd;

/// Sorted multiset of real roots.
template <typename Scalar>
class RootMultiset {
 public:
  RootMultiset() = default;
  explicit RootMultiset(Vector<Scalar> values) : values_(std::move(values)) {
    std::sort(values_.data(), values_.data() + values_.size());
  }

  const Vector<Scalar>& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  Scalar operator[](Eigen::Index i) const { return values_[i]; }

 private:
  Vector<Scalar> values_;
};

template <typename Scalar>
class MonicHyperbolic {
 public:
  explicit MonicHyperbolic(Vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() < 1) {
      throw Error(ErrorKind::InvalidInput, "polynomial degree must be positive");
    }
  }

  Eigen::Index degree() const { return coeffs_.size(); }

  /// a_1..a_n in the alternating-sign convention.
  const Vector<Scalar>& coeffs() const { return coeffs_; }

  /// 1 + max |a_j|; denominator of the relative residual bound.
  Scalar scale() const { return Scalar(1) + coeffs_.cwiseAbs().maxCoeff(); }

  /// Ordinary coefficients c_0 = 1, c_j = (-1)^j a_j of x^(n-j).
  template <typename Work = Scalar>
  Vector<Work> monomial_coeffs() const {
    Vector<Work> c(degree() + 1);
    c[0] = Work(1);
    for (Eigen::Index j = 1; j <= degree(); ++j) {
      Work a = static_cast<Work>(coeffs_[j - 1]);
      c[j] = (j % 2 == 0) ? a : -a;
    }
    return c;
  }

 private:
  Vector<Scalar> coeffs_;
};

namespace detail {

template <typename Work>
Work horner(const Vector<Work>& c, Work x) {
  Work acc = c[0];
  for (Eigen::Index j = 1; j < c.size(); ++j) acc = acc * x + c[j];
  return acc;
}

/// Monic derivative: P'/n, still in ordinary coefficients.
template <typename Work>
Vector<Work> monic_derivative(const Vector<Work>& c) {
  const Eigen::Index n = c.size() - 1;
  Vector<Work> d(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    d[j] = c[j] * static_cast<Work>(n - j) / static_cast<Work>(n);
  }
  return d;
}

template <typename Work>
Work cauchy_bound(const Vector<Work>& c) {
  Work m = 0;
  for (Eigen::Index j = 1; j < c.size(); ++j) m = std::max(m, std::abs(c[j]));
  return Work(1) + m;
}

template <typename Work>
Work bisect(const Vector<Work>& c, Work lo, Work hi, Work flo) {
  for (int it = 0; it < 400; ++it) {
    Work mid = lo + (hi - lo) / 2;
    if (!(mid > lo && mid < hi)) break;
    Work fm = horner(c, mid);
    if (fm == 0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2;
}

/// All n roots of the monic polynomial with ordinary coefficients `c`,
/// assuming hyperbolicity. `worst_miss` receives the largest |P| accepted at
/// a critical point that carried no sign change; for a hyperbolic polynomial
/// it is rounding noise, for a complex pair it is bounded away from zero.
template <typename Work>
std::vector<Work> interlacing_roots(const Vector<Work>& c, Work& worst_miss) {
  const Eigen::Index n = c.size() - 1;
  if (n == 1) return {-c[1]};

  Work inner_miss = 0;
  std::vector<Work> crit = interlacing_roots(monic_derivative(c), inner_miss);
  const Work bound = cauchy_bound(c);

  std::vector<Work> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Work lo = (i == 0) ? -bound : crit[static_cast<std::size_t>(i - 1)];
    Work hi = (i == n - 1) ? bound : crit[static_cast<std::size_t>(i)];
    if (hi < lo) std::swap(lo, hi);
    Work flo = horner(c, lo);
    Work fhi = horner(c, hi);
    if (flo == 0) {
      out.push_back(lo);
    } else if (fhi == 0) {
      out.push_back(hi);
    } else if ((flo < 0) != (fhi < 0)) {
      out.push_back(bisect(c, lo, hi, flo));
    } else {
      // no sign change: the root is (numerically) a critical point
      bool pick_lo = std::abs(flo) <= std::abs(fhi);
      // the outer bracket endpoints are never roots
      if (i == 0) pick_lo = false;
      if (i == n - 1) pick_lo = true;
      Work f = pick_lo ? flo : fhi;
      worst_miss = std::max(worst_miss, std::abs(f));
      out.push_back(pick_lo ? lo : hi);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// m-th Taylor coefficient of the polynomial at x0, by repeated synthetic division.
template <typename Work>
Work taylor_coeff(Vector<Work> c, Work x0, Eigen::Index m) {
  Eigen::Index len = c.size();
  for (Eigen::Index k = 0; k < m; ++k, --len) {
    for (Eigen::Index i = 1; i < len; ++i) c[i] += x0 * c[i - 1];
  }
  Work v = c[0];
  for (Eigen::Index i = 1; i < len; ++i) v = v * x0 + c[i];
  return v;
}

/// The simple root of P^(k) near a k+1 cluster, by Newton from x0; the
/// cluster mean when Newton leaves the window [lo, hi] widened by its width.
template <typename Work>
Work derivative_root(Vector<Work> c, Eigen::Index k, Work x0, Work lo, Work hi) {
  for (Eigen::Index d = 0; d < k; ++d) {
    const Eigen::Index n = c.size() - 1;
    Vector<Work> e(n);
    for (Eigen::Index i = 0; i < n; ++i) e[i] = c[i] * static_cast<Work>(n - i);
    c = e;
  }
  const Work pad = std::max(hi - lo, Work(16) * Work(std::numeric_limits<double>::epsilon()) * (1 + std::abs(x0)));
  Work x = x0;
  for (int it = 0; it < 60; ++it) {
    Work v = 0, dv = 0;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      dv = dv * x + v;
      v = v * x + c[i];
    }
    if (dv == 0) break;
    const Work nx = x - v / dv;
    if (!(nx >= lo - pad && nx <= hi + pad)) return x0;
    if (nx == x) break;
    x = nx;
  }
  return x;
}

/// Collapse clusters of m roots to the root x of P^(m-1) inside them. A
/// cluster qualifies when narrower than tol^(1/m), or when it is what
/// rounding the coefficients to double does to an m-fold root: the Taylor
/// coefficients of order below m vanish at x to rounding level, order m does
/// not, and exactly the m cluster roots lie within twice
/// max_k (e_k / q_m)^(1/(m-k)) of x.
template <typename Work>
void collapse_clusters(std::vector<Work>& r, Work tol, const Vector<Work>& c) {
  const Work unit = Work(2) * Work(std::numeric_limits<double>::epsilon());
  const Vector<Work> mag = c.cwiseAbs();
  auto center = [&](std::size_t i, std::size_t j) {
    Work mean = 0;
    for (std::size_t k = i; k <= j; ++k) mean += r[k];
    mean /= static_cast<Work>(j - i + 1);
    return derivative_root(c, static_cast<Eigen::Index>(j - i), mean, r[i], r[j]);
  };
  auto multiple = [&](std::size_t i, std::size_t j, Work x) {
    const auto m = static_cast<Eigen::Index>(j - i + 1);
    if (r[j] - r[i] < std::pow(tol, Work(1) / static_cast<Work>(m))) return true;
    const Work q = std::abs(taylor_coeff(c, x, m));
    if (q <= Work(8) * unit * taylor_coeff(mag, std::abs(x), m)) return false;
    Work rho = 0;
    for (Eigen::Index k = 0; k < m; ++k) {
      const Work e = unit * taylor_coeff(mag, std::abs(x), k);
      if (std::abs(taylor_coeff(c, x, k)) > Work(8) * e) return false;
      rho = std::max(rho, std::pow(e / q, Work(1) / static_cast<Work>(m - k)));
    }
    std::size_t inside = 0;
    for (const Work y : r) inside += std::abs(y - x) < Work(2) * rho;
    return std::max(x - r[i], r[j] - x) < Work(2) * rho && inside == j - i + 1;
  };
  std::size_t i = 0;
  while (i < r.size()) {
    std::size_t best = i + 1;
    Work at = r[i];
    for (std::size_t j = i + 1; j < r.size(); ++j) {
      const Work x = center(i, j);
      if (multiple(i, j, x)) {
        best = j + 1;
        at = x;
      }
    }
    for (std::size_t k = i; k < best; ++k) r[k] = at;
    i = best;
  }
}

/// Number of sign variations of a Sturm chain at x (zeros skipped).
template <typename Work>
int sign_variations(const std::vector<Vector<Work>>& chain, Work x) {
  int count = 0;
  int last = 0;
  for (const auto& p : chain) {
    Work v = horner(p, x);
    int s = (v > 0) - (v < 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

/// Remainder of polynomial division a / b (ordinary coefficients, leading first).
template <typename Work>
Vector<Work> poly_remainder(Vector<Work> a, const Vector<Work>& b) {
  const Eigen::Index db = b.size() - 1;
  while (a.size() - 1 >= db && a.size() > 0) {
    Work q = a[0] / b[0];
    for (Eigen::Index j = 0; j <= db; ++j) a[j] -= q * b[j];
    a = Vector<Work>(a.tail(a.size() - 1));
  }
  return a;
}

/// Count of distinct real roots via the Sturm chain; -1 when the chain
/// degenerates (a numerically common factor, i.e. a multiple root).
template <typename Work>
int sturm_distinct_real_roots(const Vector<Work>& c) {
  std::vector<Vector<Work>> chain;
  chain.push_back(c);
  Vector<Work> d(c.size() - 1);
  const Eigen::Index n = c.size() - 1;
  for (Eigen::Index j = 0; j < n; ++j) d[j] = c[j] * static_cast<Work>(n - j);
  chain.push_back(d);
  const Work eps = std::numeric_limits<Work>::epsilon();
  while (chain.back().size() > 1) {
    Vector<Work> r = poly_remainder(chain[chain.size() - 2], chain.back());
    // strip leading numerical zeros relative to the dividend's scale
    const Work ref = chain[chain.size() - 2].cwiseAbs().maxCoeff();
    Eigen::Index lead = 0;
    while (lead < r.size() && std::abs(r[lead]) <= 1e3 * eps * ref) ++lead;
    if (lead == r.size()) return -1;
    chain.push_back(-Vector<Work>(r.tail(r.size() - lead)));
  }
  const Work bound = cauchy_bound(c);
  return sign_variations(chain, -bound) - sign_variations(chain, bound);
}

}  // namespace detail

/// Polynomial with the given roots: a_j = e_j(roots).
template <typename Scalar>
MonicHyperbolic<Scalar> from_roots(const RootMultiset<Scalar>& roots) {
  using Work = long double;
  const Eigen::Index n = roots.size();
  if (n < 1) throw Error(ErrorKind::InvalidInput, "empty root multiset");
  Vector<Work> e = Vector<Work>::Zero(n + 1);
  e[0] = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Work r = static_cast<Work>(roots[i]);
    for (Eigen::Index j = i + 1; j >= 1; --j) e[j] += r * e[j - 1];
  }
  Vector<Scalar> a(n);
  for (Eigen::Index j = 0; j < n; ++j) a[j] = static_cast<Scalar>(e[j + 1]);
  return MonicHyperbolic<Scalar>(std::move(a));
}

template <typename Scalar>
Scalar evaluate(const MonicHyperbolic<Scalar>& p, Scalar x) {
  using Work = long double;
  return static_cast<Scalar>(detail::horner(p.template monomial_coeffs<Work>(), static_cast<Work>(x)));
}

/// True iff all roots are real up to a tol-sized perturbation. Simple real
/// roots are certified by the Sturm count; otherwise the interlacing
/// construction decides within the tol ball.
template <typename Scalar>
bool is_hyperbolic(const MonicHyperbolic<Scalar>& p, Scalar tol) {
  using Work = long double;
  const Vector<Work> c = p.template monomial_coeffs<Work>();
  if (!c.allFinite()) return false;
  if (detail::sturm_distinct_real_roots(c) == static_cast<int>(p.degree())) return true;
  Work miss = 0;
  detail::interlacing_roots(c, miss);
  return miss <= static_cast<Work>(tol) * static_cast<Work>(p.scale());
}

/// Sorted real roots with multiplicity. Throws NotHyperbolic when a complex
/// pair is certified (|P| at the would-be multiple root exceeds tol*scale).
template <typename Scalar>
RootMultiset<Scalar> roots(const MonicHyperbolic<Scalar>& p, Scalar tol) {
  using Work = long double;
  const Vector<Work> c = p.template monomial_coeffs<Work>();
  if (!c.allFinite()) throw Error(ErrorKind::NotHyperbolic, "non-finite coefficients");
  Work miss = 0;
  std::vector<Work> r = detail::interlacing_roots(c, miss);
  if (miss > static_cast<Work>(tol) * static_cast<Work>(p.scale())) {
    throw Error(ErrorKind::NotHyperbolic, "complex pair detected");
  }
  detail::collapse_clusters(r, static_cast<Work>(tol), c);
  Vector<Scalar> out(p.degree());
  for (Eigen::Index i = 0; i < p.degree(); ++i) out[i] = static_cast<Scalar>(r[static_cast<std::size_t>(i)]);
  return RootMultiset<Scalar>(std::move(out));
}

}  // namespace hyperlift
