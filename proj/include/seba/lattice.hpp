#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "seba/error.hpp"

namespace seba {

/// Rectangular unimodular lattice Z(a,0) + Z(0,1/a).
///
/// The geometry carries a user-asserted flag saying whether a^4 is an
/// irrational (diophantine) number. Rational test values such as a = 1 are
/// allowed but are marked non-generic, which switches norm grouping from
/// integer keys to tolerance clustering.
class TorusGeometry {
 public:
  static TorusGeometry from_a(double a, bool irrational = false);
  static TorusGeometry from_a_fourth(double a_fourth, bool irrational = false);

  /// a^4 = (1 + sqrt 5) / 2 = 1.6180339887498949 (golden ratio).
  static TorusGeometry golden();
  /// a^4 = sqrt 2 = 1.4142135623730951.
  static TorusGeometry sqrt2();

  double a() const { return a_; }
  double a_sq() const { return a_sq_; }
  double a_fourth() const { return a_fourth_; }  ///< as given; norms use a_sq()
  double min_aspect() const { return min_aspect_; }
  bool irrational() const { return irrational_; }

  std::string describe() const;

 private:
  TorusGeometry(double a, double a_fourth, bool irrational);

  double a_;
  double a_sq_;
  double a_fourth_;
  double min_aspect_;
  bool irrational_;
};

/// Integer coordinates (m, n) of the lattice point (a m, n / a).
struct LatticeVector {
  std::int64_t m = 0;
  std::int64_t n = 0;

  friend constexpr bool operator==(const LatticeVector&, const LatticeVector&) = default;
  constexpr LatticeVector operator-() const { return {-m, -n}; }
  constexpr LatticeVector operator+(const LatticeVector& o) const { return {m + o.m, n + o.n}; }
  constexpr LatticeVector operator-(const LatticeVector& o) const { return {m - o.m, n - o.n}; }
  constexpr bool is_zero() const { return m == 0 && n == 0; }
};

/// A distinct Laplace eigenvalue with its multiplicity.
struct NormClass {
  std::int64_t key_m = 0;  ///< |m| of the first representative
  std::int64_t key_n = 0;  ///< |n| of the first representative
  double value = 0.0;
  int multiplicity = 0;
};

inline double norm_sq(const TorusGeometry& geom, const LatticeVector& v) {
  const double mm = static_cast<double>(v.m) * static_cast<double>(v.m);
  const double nn = static_cast<double>(v.n) * static_cast<double>(v.n);
  return geom.a_sq() * mm + nn / geom.a_sq();
}

inline double inner(const TorusGeometry& geom, const LatticeVector& v, const LatticeVector& w) {
  const double mm = static_cast<double>(v.m) * static_cast<double>(w.m);
  const double nn = static_cast<double>(v.n) * static_cast<double>(w.n);
  return geom.a_sq() * mm + nn / geom.a_sq();
}

inline double euclidean_norm(const TorusGeometry& geom, const LatticeVector& v) {
  return std::sqrt(norm_sq(geom, v));
}

/// Limits guarding enumeration against runaway memory use.
struct EnumerationLimits {
  double max_points = 6.0e7;
};

/// Estimated number of lattice points with norm_sq in [lo, hi].
double estimated_window_count(const TorusGeometry& geom, double lo, double hi);

/// Visit every v with norm_sq(v) in [lo, hi] in row order (m, then n, both
/// ascending). The callback receives (v, norm_sq(v)).
template <typename Visitor>
void for_each_in_window(const TorusGeometry& geom, double lo, double hi, Visitor&& visit) {
  if (!(hi >= lo)) throw InvalidArgument("enumeration window has hi < lo");
  if (hi < 0.0) return;
  const double a = geom.a();
  const auto m_max = static_cast<std::int64_t>(std::ceil(std::sqrt(hi) / a));
  for (std::int64_t m = -m_max; m <= m_max; ++m) {
    const double row = geom.a_sq() * (static_cast<double>(m) * static_cast<double>(m));
    const double rem_hi = hi - row;
    if (rem_hi < 0.0) continue;
    const double rem_lo = lo - row;
    const auto n_hi = static_cast<std::int64_t>(std::floor(a * std::sqrt(rem_hi))) + 1;
    const auto n_lo =
        rem_lo > 0.0 ? std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(a * std::sqrt(rem_lo))) - 1)
                     : std::int64_t{0};
    // negative half, then non-negative half, keeps n ascending
    for (std::int64_t n = -n_hi; n <= -std::max<std::int64_t>(n_lo, 1); ++n) {
      const LatticeVector v{m, n};
      const double q = norm_sq(geom, v);
      if (q >= lo && q <= hi) visit(v, q);
    }
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
      const LatticeVector v{m, n};
      const double q = norm_sq(geom, v);
      if (q >= lo && q <= hi) visit(v, q);
    }
  }
}

/// All v with norm_sq(v) in [lo, hi], sorted by (norm_sq, m, n).
std::vector<LatticeVector> enumerate_window(const TorusGeometry& geom, double lo, double hi,
                                            const EnumerationLimits& limits = {});

/// Sort in the canonical (norm_sq, m, n) order.
void sort_canonical(const TorusGeometry& geom, std::vector<LatticeVector>& vectors);

/// Distinct norms in [0, X] with multiplicities, strictly increasing.
std::vector<NormClass> norm_classes(const TorusGeometry& geom, double x_max,
                                    const EnumerationLimits& limits = {});

/// Distinct norms in [lo, hi]. A class straddling `lo` under tolerance
/// clustering is reported with the members inside the window only.
std::vector<NormClass> norm_classes_window(const TorusGeometry& geom, double lo, double hi,
                                           const EnumerationLimits& limits = {});

/// M(k) = #{v : norm_sq(v) in [k, k+1)}.
std::int64_t count_in_unit_window(const TorusGeometry& geom, std::int64_t k);

/// #{v : norm_sq(v) <= x}.
std::int64_t count_in_disk(const TorusGeometry& geom, double x);

/// Relative tolerance used to cluster norms of non-generic geometries.
inline constexpr double kClusterTolerance = 1e-9;
/// Relative separation below which two keys collide under an irrational geometry.
inline constexpr double kCollisionTolerance = 1e-12;

}  // namespace seba
