#pragma once

#include <span>
#include <utility>
#include <vector>

#include "seba/greens.hpp"
#include "seba/moments.hpp"

namespace seba {

/// Scatterer position in the normalized rectangle [0, 1]^2.
///
/// Boundary points are accepted so that degenerate limits can be evaluated;
/// `interior()` reports whether the position is strictly inside.
class ScattererPosition {
 public:
  ScattererPosition(double y1, double y2, bool generic = false);
  /// (sqrt 2 - 1, sqrt 3 - 1), flagged generic.
  static ScattererPosition default_position();

  double y1() const { return y1_; }
  double y2() const { return y2_; }
  bool generic() const { return generic_; }
  bool interior() const { return y1_ > 0.0 && y1_ < 1.0 && y2_ > 0.0 && y2_ < 1.0; }

 private:
  double y1_;
  double y2_;
  bool generic_;
};

/// sin(pi m x1) sin(pi n x2) for m, n >= 1 and x in [0, 1]^2.
double psi(const LatticeVector& v, double x1, double x2);

/// Sine-mode Green's function with scatterer at y. Entries are the positive
/// quadrant modes of the annulus; weight = c psi_v(y).
struct DirichletCoefficientMap {
  TorusGeometry geometry = TorusGeometry::from_a(1.0);
  double lambda = 0.0;
  double half_width = 0.0;
  ScattererPosition position{0.5, 0.5};
  std::vector<LatticeVector> modes;
  Eigen::VectorXd coefficients;  ///< c = 1 / (|v|^2 - lambda)
  Eigen::VectorXd weights;       ///< c psi_v(y)

  Eigen::Index size() const { return weights.size(); }
};

DirichletCoefficientMap coefficients_dirichlet(const TorusGeometry& geom, double lambda, double half_width,
                                               const ScattererPosition& y, const MapLimits& limits = {});

/// Direct sum of w psi_v(x).
double evaluate_quadrant(const DirichletCoefficientMap& map, double x1, double x2);

/// The same field as a full-lattice exponential sum in theta = pi x:
/// b(s1 m, s2 n) = -(1/4) s1 s2 w for the four sign choices.
CoefficientMap full_lattice_map(const DirichletCoefficientMap& map);

/// Evaluate a full-lattice map at x in [0, 1]^2 (theta = pi x), direct sum.
double evaluate_full_lattice(const CoefficientMap& map, double x1, double x2);

/// Samples at x = (j1 / rows, j2 / cols), 0 <= j1 <= rows, 0 <= j2 <= cols, so
/// both boundary lines are included. Taken from the periodic evaluation in theta.
GridField evaluate_dirichlet_grid(const DirichletCoefficientMap& map, const GridShape& shape,
                                  const MapLimits& limits = {});

/// sum of psi_xi(y)^2 over every lattice vector of the class (sign variants
/// included, axis vectors contribute 0); bounded by the multiplicity.
double r_weighted(const TorusGeometry& geom, const NormClass& n_class, const ScattererPosition& y);

/// Distinct norms in [0, X] having a representative with m, n >= 1.
std::vector<NormClass> dirichlet_spectrum(const TorusGeometry& geom, double x_max,
                                          const EnumerationLimits& limits = {});

struct BadPositions {
  std::vector<double> flagged;
  std::size_t population = 0;  ///< lambdas in [1, X]
  double fraction() const {
    return population ? static_cast<double>(flagged.size()) / static_cast<double>(population) : 0.0;
  }
};

/// Flag lambda in [1, X] when some class of N in [m_- - 3, m + 3] (m the upper
/// end of lambda's gap, m_- the lower end) has a quadrant representative with
/// |psi(y)| < threshold.
BadPositions bad_positions(const TorusGeometry& geom, std::span<const double> lambdas, double x_max,
                           const ScattererPosition& y, double threshold);

/// Brute-force, closed-form and grid moments of the sine-mode annulus map.
MomentReport dirichlet_moment_report(const TorusGeometry& geom, double lambda, const SieveParams& params,
                                     const ScattererPosition& y, const MomentOptions& options = {});

}  // namespace seba
