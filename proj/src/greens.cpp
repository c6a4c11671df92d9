#include "seba/greens.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>

#include "seba/numerics.hpp"

namespace seba {

namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

struct PlanDeleter {
  void operator()(fftw_plan p) const { fftw_destroy_plan(p); }
};

Eigen::Index next_smooth(Eigen::Index n) {
  for (;; ++n) {
    Eigen::Index r = n;
    for (Eigen::Index p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return n;
  }
}

void check_singular(double q, double lambda) {
  if (std::abs(q - lambda) <= kSingularTolerance * std::max(1.0, std::abs(lambda))) {
    throw SingularEigenvalue("lambda = " + format_double(lambda) + " coincides with a lattice norm");
  }
}

CoefficientMap build_map(const TorusGeometry& geom, double lambda, Truncation kind, double parameter,
                         std::vector<LatticeVector> vectors) {
  CoefficientMap map;
  map.geometry = geom;
  map.lambda = lambda;
  map.truncation = kind;
  map.truncation_parameter = parameter;
  map.coefficients.resize(static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const double q = norm_sq(geom, vectors[i]);
    check_singular(q, lambda);
    map.coefficients[static_cast<Eigen::Index>(i)] = 1.0 / (q - lambda);
  }
  map.vectors = std::move(vectors);
  return map;
}

void check_entry_cap(const TorusGeometry& geom, double lo, double hi, const MapLimits& limits) {
  if (estimated_window_count(geom, lo, hi) > limits.max_entries) {
    throw CapExceeded("coefficient map would exceed " + format_double(limits.max_entries) + " entries");
  }
}

EnumerationLimits enumeration_limits(const MapLimits& limits) {
  EnumerationLimits e;
  e.max_points = std::max(e.max_points, limits.max_entries);
  return e;
}

/// Runs a c2r transform of the map onto `shape` and hands the raw samples to `use`.
template <typename Use>
void with_samples(const CoefficientMap& map, const GridShape& shape, std::pair<double, double> offset,
                  const MapLimits& limits, Use&& use) {
  if (shape.rows < 1 || shape.cols < 1) throw InvalidArgument("grid shape must be positive");
  if (shape.points() > limits.max_grid_points) {
    throw CapExceeded("grid of " + format_double(shape.points()) + " points exceeds the cap");
  }
  if (!is_centrally_symmetric(map)) throw InvalidArgument("coefficient map is not centrally symmetric");
  const int n1 = static_cast<int>(shape.rows);
  const int n2 = static_cast<int>(shape.cols);
  const std::size_t half_cols = static_cast<std::size_t>(n2 / 2 + 1);
  const std::size_t half_size = static_cast<std::size_t>(n1) * half_cols;
  FftwBuffer<fftw_complex> in(fftw_alloc_complex(half_size));
  FftwBuffer<double> out(fftw_alloc_real(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2)));
  if (!in || !out) throw CapExceeded("grid allocation failed");
  // Plan before filling: FFTW_ESTIMATE leaves the arrays untouched.
  std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter> plan(
      fftw_plan_dft_c2r_2d(n1, n2, in.get(), out.get(), FFTW_ESTIMATE));
  std::fill_n(&in[0][0], 2 * half_size, 0.0);
  const bool shifted = offset.first != 0.0 || offset.second != 0.0;
  for (Eigen::Index i = 0; i < map.size(); ++i) {
    const auto& v = map.vectors[static_cast<std::size_t>(i)];
    const auto k1 = static_cast<std::size_t>(((v.m % n1) + n1) % n1);
    const auto k2 = static_cast<std::size_t>(((v.n % n2) + n2) % n2);
    if (k2 >= half_cols) continue;  // stored through its conjugate partner -v
    std::complex<double> c = map.coefficients[i];
    if (shifted) {
      const double phase = static_cast<double>(v.m) * offset.first + static_cast<double>(v.n) * offset.second;
      c *= std::polar(1.0, -phase);
    }
    auto& slot = in[k1 * half_cols + k2];
    slot[0] += c.real();
    slot[1] += c.imag();
  }
  fftw_execute(plan.get());
  use(Eigen::Map<const GridField>(out.get(), shape.rows, shape.cols));
}

}  // namespace

std::string to_string(Truncation t) {
  switch (t) {
    case Truncation::annulus: return "annulus";
    case Truncation::disk: return "disk";
    case Truncation::shell: return "shell";
    case Truncation::custom: return "custom";
  }
  return "unknown";
}

std::pair<std::int64_t, std::int64_t> CoefficientMap::max_index() const {
  std::int64_t mm = 0, nn = 0;
  for (const auto& v : vectors) {
    mm = std::max(mm, std::abs(v.m));
    nn = std::max(nn, std::abs(v.n));
  }
  return {mm, nn};
}

CoefficientMap coefficients_annulus(const TorusGeometry& geom, double lambda, double half_width,
                                    const MapLimits& limits) {
  if (!(half_width > 0.0)) throw InvalidArgument("annulus half width must be positive");
  const double lo = std::max(lambda - half_width, 0.0);
  const double hi = lambda + half_width;
  check_entry_cap(geom, lo, hi, limits);
  return build_map(geom, lambda, Truncation::annulus, half_width,
                   enumerate_window(geom, lo, hi, enumeration_limits(limits)));
}

CoefficientMap coefficients_disk(const TorusGeometry& geom, double lambda, double radius,
                                 const MapLimits& limits) {
  if (!(radius > 0.0)) throw InvalidArgument("disk radius must be positive");
  check_entry_cap(geom, 0.0, radius * radius, limits);
  return build_map(geom, lambda, Truncation::disk, radius,
                   enumerate_window(geom, 0.0, radius * radius, enumeration_limits(limits)));
}

CoefficientMap coefficients_disk(const TorusGeometry& geom, double lambda, const MapLimits& limits) {
  if (!(lambda > 0.0)) throw InvalidArgument("default disk radius needs lambda > 0");
  return coefficients_disk(geom, lambda, 10.0 * std::sqrt(lambda), limits);
}

CoefficientMap coefficients_shell(const TorusGeometry& geom, double lambda, double inner_radius,
                                  double outer_radius, const MapLimits& limits) {
  if (!(inner_radius >= 0.0 && outer_radius > inner_radius)) {
    throw InvalidArgument("shell needs 0 <= inner < outer");
  }
  const double lo = inner_radius * inner_radius;
  const double hi = outer_radius * outer_radius;
  check_entry_cap(geom, lo, hi, limits);
  auto pts = enumerate_window(geom, lo, hi, enumeration_limits(limits));
  std::erase_if(pts, [&](const LatticeVector& v) { return !(norm_sq(geom, v) > lo); });
  auto map = build_map(geom, lambda, Truncation::shell, outer_radius, std::move(pts));
  return map;
}

CoefficientMap make_custom_map(const TorusGeometry& geom, double lambda, std::vector<LatticeVector> vectors,
                               std::span<const double> coefficients) {
  if (vectors.size() != coefficients.size()) throw InvalidArgument("custom map: size mismatch");
  CoefficientMap map;
  map.geometry = geom;
  map.lambda = lambda;
  map.truncation = Truncation::custom;
  std::vector<std::size_t> order(vectors.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const double qi = norm_sq(geom, vectors[i]);
    const double qj = norm_sq(geom, vectors[j]);
    if (qi != qj) return qi < qj;
    if (vectors[i].m != vectors[j].m) return vectors[i].m < vectors[j].m;
    return vectors[i].n < vectors[j].n;
  });
  map.coefficients.resize(static_cast<Eigen::Index>(order.size()));
  map.vectors.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    map.vectors.push_back(vectors[order[k]]);
    map.coefficients[static_cast<Eigen::Index>(k)] = coefficients[order[k]];
  }
  for (std::size_t k = 1; k < map.vectors.size(); ++k) {
    if (map.vectors[k] == map.vectors[k - 1]) throw InvalidArgument("custom map: duplicate vector");
  }
  if (!is_centrally_symmetric(map)) throw InvalidArgument("custom map is not centrally symmetric");
  return map;
}

bool is_centrally_symmetric(const CoefficientMap& map) {
  // Canonical order is not symmetric within a class, so index by vector.
  std::vector<std::pair<std::pair<std::int64_t, std::int64_t>, double>> entries;
  entries.reserve(map.vectors.size());
  for (std::size_t i = 0; i < map.vectors.size(); ++i) {
    entries.push_back({{map.vectors[i].m, map.vectors[i].n}, map.coefficients[static_cast<Eigen::Index>(i)]});
  }
  std::sort(entries.begin(), entries.end());
  for (const auto& [key, c] : entries) {
    const std::pair<std::int64_t, std::int64_t> neg{-key.first, -key.second};
    const auto it = std::lower_bound(entries.begin(), entries.end(), std::make_pair(neg, -std::numeric_limits<double>::infinity()));
    if (it == entries.end() || it->first != neg || it->second != c) return false;
  }
  return true;
}

double l2_norm_sq(const CoefficientMap& map) { return compensated_sum(map.coefficients.array().square()); }

GridShape aliasing_free_shape(const CoefficientMap& map, int power) {
  if (power < 1) throw InvalidArgument("aliasing_free_shape: power must be >= 1");
  const auto [mm, nn] = map.max_index();
  GridShape s;
  s.rows = next_smooth(static_cast<Eigen::Index>(power) * mm + 1);
  s.cols = next_smooth(static_cast<Eigen::Index>(power) * nn + 1);
  return s;
}

GridShape override_shape(const GridShape& automatic, const GridShape& requested) {
  return {std::max(automatic.rows, requested.rows), std::max(automatic.cols, requested.cols)};
}

GridField evaluate_grid(const CoefficientMap& map, const GridShape& shape, std::pair<double, double> offset,
                        const MapLimits& limits) {
  GridField field;
  with_samples(map, shape, offset, limits, [&](const auto& samples) { field = samples; });
  return field;
}

GridField evaluate_grid(const CoefficientMap& map, Eigen::Index grid_n) {
  return evaluate_grid(map, GridShape{grid_n, grid_n});
}

GridMoments grid_moments(const CoefficientMap& map, const GridShape* override_request,
                         std::pair<double, double> offset, const MapLimits& limits) {
  GridMoments out;
  out.shape = aliasing_free_shape(map, 4);
  if (override_request) out.shape = override_shape(out.shape, *override_request);
  with_samples(map, out.shape, offset, limits, [&](const auto& g) {
    CompensatedSum<double> s1, s2, s4;
    const double* p = g.data();
    const Eigen::Index total = g.size();
    for (Eigen::Index i = 0; i < total; ++i) {
      const double x = p[i];
      const double x2 = x * x;
      s1.add(x);
      s2.add(x2);
      s4.add(x2 * x2);
    }
    const double n = out.shape.points();
    out.mean = s1.value() / n;
    out.mean_sq = s2.value() / n;
    out.mean_fourth = s4.value() / n;
  });
  return out;
}

void write_field_csv(std::ostream& out, const GridField& field) {
  for (Eigen::Index r = 0; r < field.rows(); ++r) {
    for (Eigen::Index c = 0; c < field.cols(); ++c) {
      if (c) out << ',';
      out << format_double(field(r, c));
    }
    out << '\n';
  }
}

TailSum l2_tail_from_classes(std::span<const NormClass> classes, double lambda, double half_width,
                             double window_hi) {
  if (!(window_hi > lambda)) throw InvalidArgument("l2 tail window must extend beyond lambda");
  CompensatedSum<double> acc;
  for (const auto& c : classes) {
    const double d = c.value - lambda;
    if (std::abs(d) >= half_width) acc.add(c.multiplicity / (d * d));
  }
  return {acc.value(), std::numbers::pi / (window_hi - lambda)};
}

std::vector<TailSum> l2_tail_profile(const TorusGeometry& geom, double lambda,
                                     std::span<const double> half_widths) {
  if (!(lambda >= 1.0)) throw InvalidArgument("l2_tail: lambda must be >= 1");
  const double window_hi = 100.0 * lambda;
  std::vector<CompensatedSum<double>> acc(half_widths.size());
  for_each_in_window(geom, 0.0, window_hi, [&](const LatticeVector&, double q) {
    const double d = q - lambda;
    check_singular(q, lambda);
    const double term = 1.0 / (d * d);
    for (std::size_t k = 0; k < half_widths.size(); ++k) {
      if (std::abs(d) >= half_widths[k]) acc[k].add(term);
    }
  });
  std::vector<TailSum> out(half_widths.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = {acc[k].value(), std::numbers::pi / (window_hi - lambda)};
  }
  return out;
}

TailSum l2_tail(const TorusGeometry& geom, double lambda, double half_width) {
  const double widths[] = {half_width};
  return l2_tail_profile(geom, lambda, widths).front();
}

Tail43 tail_exponent_43_from_classes(std::span<const NormClass> classes, double lambda, double half_width,
                                     double window_hi) {
  if (!(window_hi > lambda)) throw InvalidArgument("tail window must extend beyond lambda");
  CompensatedSum<double> up, low;
  for (const auto& c : classes) {
    const double d = c.value - lambda;
    if (d >= half_width && c.value <= window_hi) up.add(c.multiplicity * std::pow(d, -4.0 / 3.0));
    if (-d >= half_width) low.add(c.multiplicity * std::pow(-d, -4.0 / 3.0));
  }
  Tail43 t;
  t.upper.window = up.value();
  t.upper.remainder = 3.0 * std::numbers::pi * std::pow(window_hi - lambda, -1.0 / 3.0);
  t.lower = low.value();
  return t;
}

Tail43 tail_exponent_43(const TorusGeometry& geom, double lambda, double half_width) {
  if (!(lambda >= 1.0)) throw InvalidArgument("tail_exponent_43: lambda must be >= 1");
  const auto classes = norm_classes(geom, 2.0 * lambda);
  return tail_exponent_43_from_classes(classes, lambda, half_width, 2.0 * lambda);
}

CauchyRate cauchy_l4_rate(const TorusGeometry& geom, double lambda, int dyadic_steps, const MapLimits& limits) {
  if (!(lambda > 0.0)) throw InvalidArgument("cauchy_l4_rate: lambda must be positive");
  if (dyadic_steps < 2) throw InvalidArgument("cauchy_l4_rate: need at least two dyadic steps");
  CauchyRate out;
  std::vector<double> ts, norms;
  for (int k = 0; k < dyadic_steps; ++k) {
    const double t = std::ldexp(10.0 * std::sqrt(lambda), k);
    const auto shell = coefficients_shell(geom, lambda, t, 2.0 * t, limits);
    const auto mom = grid_moments(shell, nullptr, {0.0, 0.0}, limits);
    const double l4 = std::pow(mom.mean_fourth, 0.25);
    const double l2 = l2_norm_sq(shell);
    out.terms.emplace_back(t, l4);
    out.parseval_error.push_back(std::abs(mom.mean_sq - l2) / l2);
    ts.push_back(t);
    norms.push_back(l4);
  }
  out.fitted_slope = fit_loglog_slope<double>(ts, norms);
  return out;
}

}  // namespace seba
