#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "seba/lattice.hpp"

namespace seba {

/// Exponents of the good/bad sieve. Valid iff 0 < theta < 1/2 and
/// 0 < delta < (2/3)(1/2 - theta); then delta0 = 1/2 - theta - 3 delta / 2 > 0.
class SieveParams {
 public:
  SieveParams(double delta, double theta);
  static SieveParams defaults() { return SieveParams(0.1, 1.0 / 3.0); }

  double delta() const { return delta_; }
  double theta() const { return theta_; }
  double delta0() const { return 0.5 - theta_ - 1.5 * delta_; }
  /// Exponent of the bad-set counting ceiling X^{1 - delta0}.
  double bad_exponent_ceiling() const { return 1.0 - delta0(); }

 private:
  double delta_;
  double theta_;
};

struct Witness {
  LatticeVector zeta;
  LatticeVector eta;
};

struct Classification {
  double lambda = 0.0;
  bool good = true;
  std::optional<Witness> witness;   ///< present iff bad
  std::size_t annulus_size = 0;     ///< |A(lambda, lambda^delta)|
  std::size_t zeta_count = 0;       ///< nonzero zeta with |zeta| < lambda^{delta/2}
  std::size_t marginal_hits = 0;    ///< comparisons within 1e-9 relative of the threshold
};

/// L(lambda) = min(a, 1/a) lambda^{delta/2} / 20.
double half_width(const TorusGeometry& geom, double lambda, double delta);

struct MembershipTest {
  bool member = false;
  bool marginal = false;
};

/// eta in S_zeta  <=>  |<eta, zeta>| <= |eta|^{2 delta}.
MembershipTest in_S_zeta_checked(const TorusGeometry& geom, const LatticeVector& eta,
                                 const LatticeVector& zeta, double delta);
bool in_S_zeta(const TorusGeometry& geom, const LatticeVector& eta, const LatticeVector& zeta,
               double delta);

/// Nonzero lattice vectors with |zeta| < radius, canonical order.
std::vector<LatticeVector> short_vectors(const TorusGeometry& geom, double radius);

/// Exhaustive good/bad test: lambda is good iff no eta in A(lambda, lambda^delta)
/// lies in S_zeta for any 0 < |zeta| < lambda^{delta/2}.
Classification classify(const TorusGeometry& geom, double lambda, const SieveParams& params);

/// Re-check all three witness conditions for (lambda, delta).
bool witness_valid(const TorusGeometry& geom, double lambda, double delta, const Witness& w);

struct BadDensity {
  std::size_t bad_count = 0;
  std::size_t total = 0;
  std::vector<double> checkpoints;              ///< X/8, X/4, X/2, X
  std::vector<std::size_t> checkpoint_bad;      ///< bad lambda <= checkpoint
  std::vector<std::size_t> checkpoint_total;
  double fitted_exponent = 0.0;                 ///< -inf when no bad lambda
  double ceiling = 0.0;                         ///< 1 - delta0
};

/// Fit log(bad count) against log(X) at dyadic checkpoints from a
/// precomputed good/bad labelling of the sorted lambdas in [1, X].
BadDensity bad_density_from_labels(std::span<const double> lambdas, const std::vector<bool>& bad,
                                   double x_max, const SieveParams& params);

/// Classify every lambda in [1, X] and fit the bad-set growth exponent.
BadDensity bad_density(const TorusGeometry& geom, std::span<const double> lambdas, double x_max,
                       const SieveParams& params);

struct ZetaCount {
  std::size_t count = 0;
  double bound = 0.0;   ///< X^{1/2 + theta + delta} / |zeta|
  double margin = 0.0;  ///< bound - count
  bool within_bound() const { return static_cast<double>(count) <= bound; }
};

/// #{lambda <= X : A(lambda, lambda^delta) meets S_zeta}, with the per-zeta ceiling.
ZetaCount bad_count_per_zeta(const TorusGeometry& geom, std::span<const double> lambdas,
                             const LatticeVector& zeta, double x_max, const SieveParams& params);

/// All distinct pairs of A(lambda, half_width) at distance >= lambda^{delta/2}.
bool verify_spacing(const TorusGeometry& geom, double lambda, const SieveParams& params);
bool verify_spacing(const TorusGeometry& geom, std::span<const LatticeVector> points, double min_distance);

/// Every solution of xi - eta = eta' - xi' (xi != eta) inside A(lambda, half_width)
/// is (xi', eta') = (eta, xi) or (-xi, -eta).
bool trivial_solutions_check(const TorusGeometry& geom, double lambda, const SieveParams& params);
bool trivial_solutions_check(std::span<const LatticeVector> points);

}  // namespace seba
