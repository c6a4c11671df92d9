#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seba/lattice.hpp"

namespace seba {

enum class Truncation { annulus, disk, shell, custom };

std::string to_string(Truncation t);

/// Fourier coefficients c(v) = 1/(|v|^2 - lambda) of a truncated Green's
/// function, stored in canonical (norm_sq, m, n) order.
///
/// Invariants: the vector set is closed under v -> -v with c(-v) = c(v), and
/// lambda is not a norm of any included vector.
struct CoefficientMap {
  TorusGeometry geometry = TorusGeometry::from_a(1.0);
  double lambda = 0.0;
  Truncation truncation = Truncation::custom;
  double truncation_parameter = 0.0;  ///< half width L, or radius T
  std::vector<LatticeVector> vectors;
  Eigen::VectorXd coefficients;

  Eigen::Index size() const { return coefficients.size(); }
  bool empty() const { return coefficients.size() == 0; }
  /// Largest |m| and |n| over the entries.
  std::pair<std::int64_t, std::int64_t> max_index() const;
};

struct MapLimits {
  double max_entries = 2.0e7;
  double max_grid_points = 6.0e7;
};

/// Relative distance below which lambda counts as hitting a norm.
inline constexpr double kSingularTolerance = 1e-12;

/// Entries v with norm_sq(v) in [lambda - L, lambda + L].
CoefficientMap coefficients_annulus(const TorusGeometry& geom, double lambda, double half_width,
                                    const MapLimits& limits = {});

/// Entries with |v| <= radius (default 10 sqrt(lambda)).
CoefficientMap coefficients_disk(const TorusGeometry& geom, double lambda, double radius,
                                 const MapLimits& limits = {});
CoefficientMap coefficients_disk(const TorusGeometry& geom, double lambda, const MapLimits& limits = {});

/// Entries with inner < |v| <= outer: the difference G^outer - G^inner.
CoefficientMap coefficients_shell(const TorusGeometry& geom, double lambda, double inner_radius,
                                  double outer_radius, const MapLimits& limits = {});

/// Map with caller-chosen coefficients; validates central symmetry.
CoefficientMap make_custom_map(const TorusGeometry& geom, double lambda, std::vector<LatticeVector> vectors,
                               std::span<const double> coefficients);

/// True iff the entry set is closed under negation with equal coefficients.
bool is_centrally_symmetric(const CoefficientMap& map);

/// sum c^2, compensated, canonical order.
double l2_norm_sq(const CoefficientMap& map);

// ---------------------------------------------------------------------------
// Grid evaluation
//
// The torus R^2 / 2 pi L is identified with [0, 2pi)^2 through t1 = x1 / a,
// t2 = a x2, so the plane wave of v = (m, n) is exp(i (m t1 + n t2)). Grids are
// uniform: t1 = 2 pi j1 / rows, t2 = 2 pi j2 / cols.

using GridField = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct GridShape {
  Eigen::Index rows = 1;  ///< samples along t1 (the m direction)
  Eigen::Index cols = 1;  ///< samples along t2 (the n direction)
  double points() const { return static_cast<double>(rows) * static_cast<double>(cols); }
};

/// Smallest grid on which the grid mean of G^power is exact: rows > power *
/// max|m|, cols > power * max|n|, rounded up to a 7-smooth FFT size.
GridShape aliasing_free_shape(const CoefficientMap& map, int power);

/// Apply a caller override; it may only enlarge the automatic shape.
GridShape override_shape(const GridShape& automatic, const GridShape& requested);

/// Samples of G(t - offset) = sum c cos(<v, t - offset>) on the grid.
GridField evaluate_grid(const CoefficientMap& map, const GridShape& shape,
                        std::pair<double, double> offset = {0.0, 0.0},
                        const MapLimits& limits = {});
GridField evaluate_grid(const CoefficientMap& map, Eigen::Index grid_n);

struct GridMoments {
  GridShape shape;
  double mean = 0.0;
  double mean_sq = 0.0;
  double mean_fourth = 0.0;
};

/// Grid means of G, G^2, G^4 on the aliasing-free grid for power 4 (or the
/// enlarged override), without materializing a copy of the field.
GridMoments grid_moments(const CoefficientMap& map, const GridShape* override_request = nullptr,
                         std::pair<double, double> offset = {0.0, 0.0},
                         const MapLimits& limits = {});

/// Row-major CSV, 17 significant digits.
void write_field_csv(std::ostream& out, const GridField& field);

// ---------------------------------------------------------------------------
// Tail diagnostics

struct TailSum {
  double window = 0.0;    ///< exact lattice sum over the finite window
  double remainder = 0.0; ///< Weyl-density integral beyond the window
  double total() const { return window + remainder; }
};

/// sum over |n - lambda| >= L of r(n) / (n - lambda)^2 for the supplied
/// classes (all assumed within [0, window_hi]), plus pi / (window_hi - lambda).
TailSum l2_tail_from_classes(std::span<const NormClass> classes, double lambda, double half_width,
                             double window_hi);

/// ||G_lambda - G_{lambda,L}||_2^2 over the window [0, 100 lambda] plus the integral estimate beyond.
TailSum l2_tail(const TorusGeometry& geom, double lambda, double half_width);

/// l2_tail for several half widths in one pass over the window.
std::vector<TailSum> l2_tail_profile(const TorusGeometry& geom, double lambda,
                                     std::span<const double> half_widths);

struct Tail43 {
  TailSum upper;       ///< sum over lambda + L <= n <= 2 lambda of (n - lambda)^{-4/3}, remainder beyond 2 lambda
  double lower = 0.0;  ///< sum over n <= lambda - L of (lambda - n)^{-4/3}
  double total() const { return upper.total() + lower; }
};

Tail43 tail_exponent_43_from_classes(std::span<const NormClass> classes, double lambda, double half_width,
                                     double window_hi);
Tail43 tail_exponent_43(const TorusGeometry& geom, double lambda, double half_width);

struct CauchyRate {
  std::vector<std::pair<double, double>> terms;  ///< (T_k, ||G^{2T_k} - G^{T_k}||_4)
  std::vector<double> parseval_error;            ///< relative |grid mean G^2 - sum c^2| per term
  double fitted_slope = 0.0;                     ///< log-log slope of the terms against T
};

/// L^4 size of consecutive dyadic shell differences, T_k = 2^k 10 sqrt(lambda),
/// k = 0 .. dyadic_steps - 1, by exact grid quadrature.
CauchyRate cauchy_l4_rate(const TorusGeometry& geom, double lambda, int dyadic_steps,
                          const MapLimits& limits = {});

}  // namespace seba
