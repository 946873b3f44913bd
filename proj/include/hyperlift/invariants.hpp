#pragma once

// Finite reflection groups from the classical catalog, their basic
// invariants sigma = (sigma_1, ..., sigma_n), orbits, fibers sigma^{-1}(y)
// and the constants d = max deg sigma_i and
// k = max(d, |G| / |G_v| over maximal-isotropy points of each irreducible summand).
//
//   A(n)  : S_{n+1} permuting coordinates of R^{n+1}; sigma_j = e_j(v)
//   B(n)  : signed permutations of R^n;              sigma_j = e_j(v^2)
//   D(n)  : even signed permutations of R^n;         e_j(v^2), j < n, and v_1 ... v_n
//   I2(m) : dihedral group of order 2m on R^2;       (x^2 + y^2, Re (x + iy)^m)

#include <hyperlift/errors.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hyperlift {

enum class GroupKind { A, B, D, I2 };

class ReflectionGroup {
 public:
  /// Groups up to this order are enumerated by closure when built.
  static constexpr std::int64_t kMaxEnumerated = 10000;

  static ReflectionGroup make(GroupKind kind, int parameter);
  /// "A:n", "B:n", "D:n" or "I2:m".
  static ReflectionGroup parse(std::string_view spec);

  GroupKind kind() const { return kind_; }
  int parameter() const { return parameter_; }
  int dim() const { return dim_; }
  std::int64_t order() const { return order_; }
  std::string spec() const;

  const std::vector<Eigen::MatrixXd>& generators() const { return generators_; }
  bool enumerated() const { return elements_ != nullptr; }
  /// All group elements, identity first; throws EnumerationTooLarge beyond kMaxEnumerated.
  const std::vector<Eigen::MatrixXd>& elements() const;

 private:
  GroupKind kind_ = GroupKind::A;
  int parameter_ = 1;
  int dim_ = 2;
  std::int64_t order_ = 2;
  std::vector<Eigen::MatrixXd> generators_;
  std::shared_ptr<const std::vector<Eigen::MatrixXd>> elements_;
};

/// Enumerate the closure of a generating set (dedup to 1e-9); throws past `limit`.
std::vector<Eigen::MatrixXd> enumerate_closure(const std::vector<Eigen::MatrixXd>& generators, std::int64_t limit);

struct OrbitMapSigma {
  ReflectionGroup group;
  std::vector<int> degrees;

  explicit OrbitMapSigma(ReflectionGroup g);

  int n_invariants() const { return static_cast<int>(degrees.size()); }
  int d() const;
};

/// sigma(v). Computed from canonically sorted inputs, so signed permutations
/// of v give bitwise-identical results.
Eigen::VectorXd sigma(const OrbitMapSigma& map, const Eigen::Ref<const Eigen::VectorXd>& v);

/// {g v : g in G}, deduplicated to 1e-10 and sorted lexicographically.
std::vector<Eigen::VectorXd> orbit(const ReflectionGroup& group, const Eigen::Ref<const Eigen::VectorXd>& v);

/// sigma^{-1}(y) computed from the invariants directly (roots of the
/// associated hyperbolic polynomial, then all admissible permutations and
/// signs; circle/Chebyshev intersection for I2). Empty if y is not in
/// sigma(V). Throws ToleranceViolation when the scaled residual of the
/// recovered points lies in (tol, 10 tol].
std::vector<Eigen::VectorXd> fiber(const OrbitMapSigma& map, const Eigen::Ref<const Eigen::VectorXd>& y, double tol);

/// Scaled residual max |sigma(w) - y| / (1 + max |y|).
double sigma_residual(const OrbitMapSigma& map, const Eigen::Ref<const Eigen::VectorXd>& w,
                      const Eigen::Ref<const Eigen::VectorXd>& y);

struct IrreducibleRecord {
  Eigen::MatrixXd basis;  // orthonormal columns spanning V_i
  Eigen::VectorXd v;      // chosen maximal-isotropy point
  std::int64_t isotropy_order = 0;
  std::int64_t orbit_size = 0;
  // certificate: stabilisers were enumerated over all group elements for
  // every fixed line of every element inside V_i, plus random directions
  int fixed_lines_checked = 0;
  int random_checked = 0;
  std::int64_t max_random_isotropy = 0;
};

struct KData {
  int d = 0;
  int k_value = 0;
  std::vector<IrreducibleRecord> records;
};

/// Orthogonal decomposition of V into irreducible invariant subspaces via the
/// eigenspaces of a group-averaged random symmetric matrix.
std::vector<Eigen::MatrixXd> irreducible_decomposition(const ReflectionGroup& group, std::uint64_t seed);

/// Number of g with g v = v (to 1e-9 relative), by enumeration.
std::int64_t isotropy_order(const ReflectionGroup& group, const Eigen::Ref<const Eigen::VectorXd>& v);

KData compute_k(const ReflectionGroup& group, const OrbitMapSigma& map, std::uint64_t seed = 7);

}  // namespace hyperlift
