#include "seba/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include "seba/numerics.hpp"
#include "seba/spectrum.hpp"

namespace seba {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct PairTerm {
  std::int64_t km;
  std::int64_t kn;
  double product;
};

double sum_of_powers(const CoefficientMap& map, int p) {
  return compensated_sum(map.coefficients.array().pow(p));
}

bool stat_passes(const NearStats& s, const FilterResult& f) {
  return s.near_count_E <= f.threshold_E && s.tail_F <= f.threshold_F && s.gap_G <= f.threshold_G;
}

}  // namespace

double l4_bruteforce(const CoefficientMap& map, std::size_t cap) {
  const auto p = static_cast<std::size_t>(map.size());
  if (p > cap) throw CapExceeded("l4_bruteforce: " + std::to_string(p) + " entries exceed the cap");
  std::vector<PairTerm> pairs;
  pairs.reserve(p * p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      pairs.push_back({map.vectors[i].m + map.vectors[j].m, map.vectors[i].n + map.vectors[j].n,
                       map.coefficients[static_cast<Eigen::Index>(i)] *
                           map.coefficients[static_cast<Eigen::Index>(j)]});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const PairTerm& x, const PairTerm& y) {
    return x.km != y.km ? x.km < y.km : x.kn < y.kn;
  });
  CompensatedSum<double> total;
  for (std::size_t i = 0; i < pairs.size();) {
    CompensatedSum<double> group;
    std::size_t j = i;
    for (; j < pairs.size() && pairs[j].km == pairs[i].km && pairs[j].kn == pairs[i].kn; ++j) {
      group.add(pairs[j].product);
    }
    const double s = group.value();
    total.add(s * s);
    i = j;
  }
  return total.value();
}

double l4_closed_form(const CoefficientMap& map, ClosedFormVariant variant) {
  if (!is_centrally_symmetric(map)) throw InvalidArgument("l4_closed_form: map is not centrally symmetric");
  const double s2 = sum_of_powers(map, 2);
  const double s4 = sum_of_powers(map, 4);
  const double k = variant == ClosedFormVariant::paper ? 2.0 : 3.0;
  return 3.0 * s2 * s2 - k * s4;
}

double l4_quadrature(const CoefficientMap& map, const MapLimits& limits) {
  return grid_moments(map, nullptr, {0.0, 0.0}, limits).mean_fourth;
}

MomentReport moment_report(const CoefficientMap& map, const MomentOptions& options) {
  MomentReport r;
  r.lambda = map.lambda;
  r.annulus_size = static_cast<std::size_t>(map.size());
  if (map.empty()) {
    r.empty = true;
    r.l4_brute = 0.0;
    r.peak_ratio = kNaN;
    r.normalized_fourth = kNaN;
    r.method_agreement = kNaN;
    r.method = "none";
    return r;
  }
  r.l2_sq = l2_norm_sq(map);
  const double s4 = sum_of_powers(map, 4);
  r.l4_paper = 3.0 * r.l2_sq * r.l2_sq - 2.0 * s4;
  r.l4_corrected = 3.0 * r.l2_sq * r.l2_sq - 3.0 * s4;
  r.peak_ratio = s4 / (r.l2_sq * r.l2_sq);
  const auto grid = grid_moments(map, options.grid_override, {0.0, 0.0}, options.limits);
  r.l2_quadrature = grid.mean_sq;
  r.l4_quadrature = grid.mean_fourth;
  if (r.annulus_size <= options.brute_force_cap) {
    r.l4_brute = l4_bruteforce(map, options.brute_force_cap);
    r.method = "brute";
    r.normalized_fourth = r.l4_brute / (r.l2_sq * r.l2_sq);
    r.method_agreement = std::max({relative_difference(r.l4_brute, r.l4_corrected),
                                   relative_difference(r.l4_brute, r.l4_quadrature),
                                   relative_difference(r.l4_corrected, r.l4_quadrature)});
  } else {
    r.l4_brute = kNaN;
    r.method = "quadrature";
    r.normalized_fourth = r.l4_quadrature / (r.l2_sq * r.l2_sq);
    r.method_agreement = relative_difference(r.l4_corrected, r.l4_quadrature);
  }
  return r;
}

MomentReport normalized_fourth_moment(const TorusGeometry& geom, double lambda, const SieveParams& params,
                                      const MomentOptions& options) {
  const double hw = half_width(geom, lambda, params.delta());
  return moment_report(coefficients_annulus(geom, lambda, hw, options.limits), options);
}

NearStats near_spectrum_stats(std::span<const double> values, std::span<const double> weights,
                              std::size_t m_index, double lambda_m, double density) {
  if (values.size() != weights.size()) throw InvalidArgument("near_spectrum_stats: size mismatch");
  if (m_index >= values.size()) throw InvalidArgument("near_spectrum_stats: index out of range");
  const double m = values[m_index];
  const double w = kNearTailWindow;
  if (values.back() < m + w) throw InvalidArgument("near_spectrum_stats: spectrum does not cover m + window");
  NearStats s;
  s.gap_G = std::abs(m - lambda_m);
  const auto first = std::lower_bound(values.begin(), values.end(), m - w);
  const auto last = std::upper_bound(values.begin(), values.end(), m + w);
  CompensatedSum<double> tail;
  for (auto it = first; it != last; ++it) {
    const double d = *it - m;
    const double ad = std::abs(d);
    if (ad > 3.0) {
      tail.add(weights[static_cast<std::size_t>(it - values.begin())] / (d * d));
    } else if (ad > 0.0) {
      s.near_count_E += 1.0;
    }
  }
  double remainder = density / w;
  if (m > w) remainder += density * (1.0 / w - 1.0 / m);
  s.tail_F = tail.value() + remainder;
  return s;
}

NearStats near_spectrum_stats(const TorusGeometry& geom, double m, double lambda_m) {
  // the exact window needs some spectral value at or beyond m + W
  double reach = kNearTailWindow + 1.0;
  auto classes = norm_classes_window(geom, std::max(0.0, m - kNearTailWindow - 1.0), m + reach);
  while (classes.empty() || classes.back().value < m + kNearTailWindow) {
    reach *= 2.0;
    classes = norm_classes_window(geom, std::max(0.0, m - kNearTailWindow - 1.0), m + reach);
  }
  const auto values = class_values(classes);
  std::vector<double> weights(classes.size());
  std::transform(classes.begin(), classes.end(), weights.begin(),
                 [](const NormClass& c) { return static_cast<double>(c.multiplicity); });
  const auto it = std::lower_bound(values.begin(), values.end(), m * (1.0 - kCollisionTolerance));
  if (it == values.end() || relative_difference(*it, m) > kCollisionTolerance) {
    throw InvalidArgument("near_spectrum_stats: m is not a norm value");
  }
  return near_spectrum_stats(values, weights, static_cast<std::size_t>(it - values.begin()), lambda_m);
}

FilterResult subsequence_filter(std::span<const double> values, std::span<const double> weights,
                                std::span<const double> lambdas, double x_max, double epsilon, double density) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("subsequence_filter: epsilon must lie in (0, 1)");
  FilterResult f;
  const double nan = kNaN;
  f.stats.assign(lambdas.size(), NearStats{nan, nan, nan});
  f.in_filter.assign(lambdas.size(), false);
  std::vector<std::optional<std::size_t>> gaps(lambdas.size());
  std::vector<double> e, t, g;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] > x_max) continue;
    gaps[i] = gap_index(values, lambdas[i]);
    if (!gaps[i]) throw InvalidArgument("subsequence_filter: lambda outside the spectrum gaps");
    f.stats[i] = near_spectrum_stats(values, weights, *gaps[i] + 1, lambdas[i], density);
    if (lambdas[i] >= 1.0) {
      e.push_back(f.stats[i].near_count_E);
      t.push_back(f.stats[i].tail_F);
      g.push_back(f.stats[i].gap_G);
    }
  }
  f.population = e.size();
  if (f.population == 0) return f;
  const double q = 1.0 - epsilon / 3.0;
  f.threshold_E = quantile(std::move(e), q);
  f.threshold_F = quantile(std::move(t), q);
  f.threshold_G = quantile(std::move(g), q);
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    if (lambdas[i] < 1.0 || lambdas[i] > x_max) continue;
    // the predecessor m_- of m owns the preceding gap
    if (!gaps[i - 1] || *gaps[i - 1] + 1 != *gaps[i]) continue;
    if (stat_passes(f.stats[i], f) && stat_passes(f.stats[i - 1], f)) {
      f.in_filter[i] = true;
      f.kept.push_back(lambdas[i]);
    }
  }
  return f;
}

FilterResult subsequence_filter(const TorusGeometry& geom, std::span<const double> lambdas, double x_max,
                                double epsilon) {
  const auto classes = norm_classes(geom, x_max + kNearTailWindow + 4.0);
  const auto values = class_values(classes);
  std::vector<double> weights(classes.size());
  std::transform(classes.begin(), classes.end(), weights.begin(),
                 [](const NormClass& c) { return static_cast<double>(c.multiplicity); });
  return subsequence_filter(values, weights, lambdas, x_max, epsilon);
}

ValueDistribution value_distribution(const CoefficientMap& map, int bins, const GridShape* grid_override,
                                     const MapLimits& limits) {
  if (bins < 10) throw InvalidArgument("value_distribution: need at least 10 bins");
  if (map.empty()) throw InvalidArgument("value_distribution: empty map");
  ValueDistribution d;
  d.shape = aliasing_free_shape(map, 4);
  if (grid_override) d.shape = override_shape(d.shape, *grid_override);
  const GridField field = evaluate_grid(map, d.shape, {0.0, 0.0}, limits);
  const double norm = std::sqrt(l2_norm_sq(map));
  std::vector<double> g(static_cast<std::size_t>(field.size()));
  std::transform(field.data(), field.data() + field.size(), g.begin(), [&](double x) { return x / norm; });

  const double width = 12.0 / bins;
  d.bin_lo.push_back(-std::numeric_limits<double>::infinity());
  d.bin_hi.push_back(-6.0);
  for (int b = 0; b < bins; ++b) {
    d.bin_lo.push_back(-6.0 + b * width);
    d.bin_hi.push_back(b + 1 == bins ? 6.0 : -6.0 + (b + 1) * width);
  }
  d.bin_lo.push_back(6.0);
  d.bin_hi.push_back(std::numeric_limits<double>::infinity());
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins) + 2, 0);
  CompensatedSum<double> s1, s2, s3, s4;
  for (double x : g) {
    s1.add(x);
    s2.add(x * x);
    s3.add(x * x * x);
    s4.add(x * x * x * x);
    std::size_t slot;
    if (x < -6.0) {
      slot = 0;
    } else if (x >= 6.0) {
      slot = counts.size() - 1;
    } else {
      slot = 1 + std::min(static_cast<std::size_t>((x + 6.0) / width), static_cast<std::size_t>(bins) - 1);
    }
    ++counts[slot];
  }
  const double n = static_cast<double>(g.size());
  d.m1 = s1.value() / n;
  d.m2 = s2.value() / n;
  d.m3 = s3.value() / n;
  d.m4 = s4.value() / n;
  d.mass.resize(counts.size());
  std::transform(counts.begin(), counts.end(), d.mass.begin(), [&](std::size_t c) { return c / n; });

  // Sup distance of the empirical CDF, checked on both sides of every jump.
  std::sort(g.begin(), g.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < g.size();) {
    std::size_t j = i;
    while (j < g.size() && g[j] == g[i]) ++j;
    const double phi = standard_normal_cdf(g[i]);
    ks = std::max({ks, std::abs(static_cast<double>(i) / n - phi), std::abs(static_cast<double>(j) / n - phi)});
    i = j;
  }
  d.kolmogorov_distance = ks;
  return d;
}

void write_histogram_csv(std::ostream& out, const ValueDistribution& dist) {
  out << "bin_lo,bin_hi,mass\n";
  for (std::size_t i = 0; i < dist.mass.size(); ++i) {
    out << format_double(dist.bin_lo[i]) << ',' << format_double(dist.bin_hi[i]) << ','
        << format_double(dist.mass[i]) << '\n';
  }
}

MomentStability moment_stability(const TorusGeometry& geom, double lambda, const SieveParams& params,
                                 const MapLimits& limits) {
  MomentStability s;
  const auto annulus = coefficients_annulus(geom, lambda, half_width(geom, lambda, params.delta()), limits);
  if (annulus.empty()) {
    s.e_annulus = kNaN;
  } else {
    s.l2_annulus = l2_norm_sq(annulus);
    s.l4_annulus = l4_quadrature(annulus, limits);
    s.e_annulus = s.l4_annulus / (s.l2_annulus * s.l2_annulus);
  }
  const auto disk = coefficients_disk(geom, lambda, limits);
  s.l2_disk = l2_norm_sq(disk);
  s.l4_disk = l4_quadrature(disk, limits);
  s.e_disk = s.l4_disk / (s.l2_disk * s.l2_disk);
  s.difference = s.e_annulus - s.e_disk;
  return s;
}

}  // namespace seba
