#pragma once

#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "seba/greens.hpp"
#include "seba/sieve.hpp"

namespace seba {

/// Fourth-moment bookkeeping for one truncated Green's function.
///
/// Empty maps produce a sentinel report: `empty` is set, the sums are zero and
/// every ratio is NaN.
struct MomentReport {
  double lambda = 0.0;
  std::size_t annulus_size = 0;
  bool empty = false;
  double l2_sq = 0.0;          ///< sum c^2
  double l2_quadrature = 0.0;  ///< grid mean of G^2
  double l4_paper = 0.0;       ///< 3 S2^2 - 2 S4
  double l4_corrected = 0.0;   ///< 3 S2^2 - 3 S4
  double l4_brute = 0.0;       ///< NaN when the map exceeds the brute-force cap
  double l4_quadrature = 0.0;
  double peak_ratio = 0.0;        ///< S4 / S2^2
  double normalized_fourth = 0.0; ///< ||G||_4^4 / ||G||_2^4
  double method_agreement = 0.0;  ///< max relative spread of brute, corrected, quadrature
  std::string method;             ///< source of normalized_fourth: "brute" or "quadrature"
};

struct MomentOptions {
  std::size_t brute_force_cap = 5000;
  MapLimits limits;
  const GridShape* grid_override = nullptr;
};

enum class ClosedFormVariant { paper, corrected };

/// Sum over ordered quadruples with v1 + v2 = v3 + v4 of c1 c2 c3 c4, grouped
/// by exact integer pair-sum keys.
double l4_bruteforce(const CoefficientMap& map, std::size_t cap = 5000);

/// 3 S2^2 - 2 S4 (paper) or 3 S2^2 - 3 S4 (corrected). Valid only when the
/// map's additive quadruples are trivial; the caller establishes that by
/// classifying lambda. Rejects maps that are not centrally symmetric.
double l4_closed_form(const CoefficientMap& map, ClosedFormVariant variant);

/// Grid mean of G^4 on the aliasing-free grid.
double l4_quadrature(const CoefficientMap& map, const MapLimits& limits = {});

/// Fill every report field from an explicit map.
MomentReport moment_report(const CoefficientMap& map, const MomentOptions& options = {});

/// Report for the annulus map of half width L(lambda).
MomentReport normalized_fourth_moment(const TorusGeometry& geom, double lambda, const SieveParams& params,
                                      const MomentOptions& options = {});

// ---------------------------------------------------------------------------
// Near-spectrum statistics and the density-(1 - epsilon) filter

struct NearStats {
  double tail_F = 0.0;       ///< sum over |n - m| > 3 of r(n) / (n - m)^2, windowed plus integral remainder
  double near_count_E = 0.0; ///< #{n : 0 < |n - m| <= 3}
  double gap_G = 0.0;        ///< |m - lambda_m|
};

/// Half length of the exact part of the tail_F window.
inline constexpr double kNearTailWindow = 100.0;

/// Stats for the spectral value `values[m_index]`; `weights` plays the role of
/// r(n) and `density` is the mean weight per unit of n used beyond the window.
NearStats near_spectrum_stats(std::span<const double> values, std::span<const double> weights,
                              std::size_t m_index, double lambda_m, double density = std::numbers::pi);

/// Torus version; m must be a norm value.
NearStats near_spectrum_stats(const TorusGeometry& geom, double m, double lambda_m);

struct FilterResult {
  std::vector<double> kept;        ///< selected lambdas, ascending
  std::vector<bool> in_filter;     ///< aligned with the input sequence
  std::vector<NearStats> stats;    ///< aligned with the input; m is the upper end of lambda's gap
  double threshold_E = 0.0;
  double threshold_F = 0.0;
  double threshold_G = 0.0;
  std::size_t population = 0;      ///< lambdas in [1, X]
  double fraction() const {
    return population ? static_cast<double>(kept.size()) / static_cast<double>(population) : 0.0;
  }
};

/// Keep lambda when the stats of its gap and of the preceding gap are all at
/// or below the lower (1 - epsilon/3)-quantiles over lambdas in [1, X].
/// `values` must reach beyond X + kNearTailWindow for the tails to be exact.
FilterResult subsequence_filter(std::span<const double> values, std::span<const double> weights,
                                std::span<const double> lambdas, double x_max, double epsilon,
                                double density = std::numbers::pi);
FilterResult subsequence_filter(const TorusGeometry& geom, std::span<const double> lambdas, double x_max,
                                double epsilon);

// ---------------------------------------------------------------------------
// Value distribution

struct ValueDistribution {
  std::vector<double> bin_lo;  ///< underflow first, overflow last
  std::vector<double> bin_hi;
  std::vector<double> mass;
  double m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
  double kolmogorov_distance = 0.0;
  GridShape shape;
};

/// Histogram on [-6, 6] with `bins` equal bins plus two overflow bins,
/// moments of g = G / ||G||_2 and the sup distance to the standard normal CDF.
ValueDistribution value_distribution(const CoefficientMap& map, int bins,
                                     const GridShape* grid_override = nullptr, const MapLimits& limits = {});

void write_histogram_csv(std::ostream& out, const ValueDistribution& dist);

struct MomentStability {
  double e_annulus = 0.0;
  double e_disk = 0.0;
  double l4_annulus = 0.0, l2_annulus = 0.0;
  double l4_disk = 0.0, l2_disk = 0.0;
  double difference = 0.0;  ///< e_annulus - e_disk
};

/// Normalized fourth moment of the annulus map against the disk map (radius 10 sqrt lambda).
MomentStability moment_stability(const TorusGeometry& geom, double lambda, const SieveParams& params,
                                 const MapLimits& limits = {});

}  // namespace seba
