#include "seba/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "seba/numerics.hpp"
#include "seba/sieve.hpp"
#include "seba/spectrum.hpp"

namespace seba {

namespace {

/// Every lattice vector of the class.
std::vector<LatticeVector> class_members(const TorusGeometry& geom, const NormClass& c) {
  if (geom.irrational()) {
    std::vector<LatticeVector> out;
    for (std::int64_t sm : {1, -1}) {
      for (std::int64_t sn : {1, -1}) {
        const LatticeVector v{sm * c.key_m, sn * c.key_n};
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
      }
    }
    return out;
  }
  const double tol = kClusterTolerance * std::max(1.0, c.value);
  return enumerate_window(geom, std::max(0.0, c.value - tol), c.value + tol);
}

bool in_quadrant(const LatticeVector& v) { return v.m >= 1 && v.n >= 1; }

/// min |psi(y)| over quadrant representatives; +inf when there are none.
double min_abs_psi(const TorusGeometry& geom, const NormClass& c, const ScattererPosition& y) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : class_members(geom, c)) {
    if (in_quadrant(v)) best = std::min(best, std::abs(psi(v, y.y1(), y.y2())));
  }
  return best;
}

}  // namespace

ScattererPosition::ScattererPosition(double y1, double y2, bool generic) : y1_(y1), y2_(y2), generic_(generic) {
  if (!(y1 >= 0.0 && y1 <= 1.0 && y2 >= 0.0 && y2 <= 1.0)) {
    throw InvalidArgument("scatterer position must lie in [0, 1]^2");
  }
}

ScattererPosition ScattererPosition::default_position() {
  return ScattererPosition(std::numbers::sqrt2 - 1.0, std::numbers::sqrt3 - 1.0, true);
}

double psi(const LatticeVector& v, double x1, double x2) {
  if (v.m < 1 || v.n < 1) throw InvalidArgument("psi: mode indices must be >= 1");
  if (!(x1 >= 0.0 && x1 <= 1.0 && x2 >= 0.0 && x2 <= 1.0)) throw InvalidArgument("psi: x outside the rectangle");
  // sin(pi k x) vanishes exactly at integer k x; keep boundary zeros exact.
  auto s = [](std::int64_t k, double x) {
    const double t = static_cast<double>(k) * x;
    return t == std::floor(t) ? 0.0 : std::sin(std::numbers::pi * t);
  };
  return s(v.m, x1) * s(v.n, x2);
}

DirichletCoefficientMap coefficients_dirichlet(const TorusGeometry& geom, double lambda, double half_width,
                                               const ScattererPosition& y, const MapLimits& limits) {
  const auto annulus = coefficients_annulus(geom, lambda, half_width, limits);
  DirichletCoefficientMap map;
  map.geometry = geom;
  map.lambda = lambda;
  map.half_width = half_width;
  map.position = y;
  std::vector<double> c, w;
  for (Eigen::Index i = 0; i < annulus.size(); ++i) {
    const auto& v = annulus.vectors[static_cast<std::size_t>(i)];
    if (!in_quadrant(v)) continue;
    map.modes.push_back(v);
    c.push_back(annulus.coefficients[i]);
    w.push_back(annulus.coefficients[i] * psi(v, y.y1(), y.y2()));
  }
  map.coefficients = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
  map.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  return map;
}

double evaluate_quadrant(const DirichletCoefficientMap& map, double x1, double x2) {
  CompensatedSum<double> acc;
  for (Eigen::Index i = 0; i < map.size(); ++i) {
    acc.add(map.weights[i] * psi(map.modes[static_cast<std::size_t>(i)], x1, x2));
  }
  return acc.value();
}

CoefficientMap full_lattice_map(const DirichletCoefficientMap& map) {
  std::vector<LatticeVector> vectors;
  std::vector<double> b;
  vectors.reserve(4 * map.modes.size());
  b.reserve(4 * map.modes.size());
  for (Eigen::Index i = 0; i < map.size(); ++i) {
    const auto& v = map.modes[static_cast<std::size_t>(i)];
    for (std::int64_t s1 : {1, -1}) {
      for (std::int64_t s2 : {1, -1}) {
        vectors.push_back({s1 * v.m, s2 * v.n});
        b.push_back(-0.25 * static_cast<double>(s1 * s2) * map.weights[i]);
      }
    }
  }
  auto full = make_custom_map(map.geometry, map.lambda, std::move(vectors), b);
  full.truncation = Truncation::annulus;
  full.truncation_parameter = map.half_width;
  return full;
}

double evaluate_full_lattice(const CoefficientMap& map, double x1, double x2) {
  CompensatedSum<double> acc;
  for (Eigen::Index i = 0; i < map.size(); ++i) {
    const auto& v = map.vectors[static_cast<std::size_t>(i)];
    const double phase = std::numbers::pi * (static_cast<double>(v.m) * x1 + static_cast<double>(v.n) * x2);
    acc.add(map.coefficients[i] * std::cos(phase));
  }
  return acc.value();
}

GridField evaluate_dirichlet_grid(const DirichletCoefficientMap& map, const GridShape& shape,
                                  const MapLimits& limits) {
  const auto full = full_lattice_map(map);
  const GridField periodic = evaluate_grid(full, GridShape{2 * shape.rows, 2 * shape.cols}, {0.0, 0.0}, limits);
  return periodic.topLeftCorner(shape.rows + 1, shape.cols + 1);
}

double r_weighted(const TorusGeometry& geom, const NormClass& n_class, const ScattererPosition& y) {
  CompensatedSum<double> acc;
  for (const auto& v : class_members(geom, n_class)) {
    if (v.m == 0 || v.n == 0) continue;
    const double p = psi({std::abs(v.m), std::abs(v.n)}, y.y1(), y.y2());
    acc.add(p * p);
  }
  return acc.value();
}

std::vector<NormClass> dirichlet_spectrum(const TorusGeometry& geom, double x_max, const EnumerationLimits& limits) {
  auto classes = norm_classes(geom, x_max, limits);
  if (geom.irrational()) {
    std::erase_if(classes, [](const NormClass& c) { return c.key_m == 0 || c.key_n == 0; });
    return classes;
  }
  std::vector<double> quadrant;
  for_each_in_window(geom, 0.0, x_max, [&](const LatticeVector& v, double q) {
    if (in_quadrant(v)) quadrant.push_back(q);
  });
  std::sort(quadrant.begin(), quadrant.end());
  std::erase_if(classes, [&](const NormClass& c) {
    const double tol = kClusterTolerance * std::max(1.0, c.value);
    const auto it = std::lower_bound(quadrant.begin(), quadrant.end(), c.value - tol);
    return it == quadrant.end() || *it > c.value + tol;
  });
  return classes;
}

BadPositions bad_positions(const TorusGeometry& geom, std::span<const double> lambdas, double x_max,
                           const ScattererPosition& y, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidArgument("bad_positions: threshold must be non-negative");
  const auto classes = dirichlet_spectrum(geom, x_max + 8.0);
  const auto values = class_values(classes);
  std::vector<double> min_psi(classes.size());
  for (std::size_t k = 0; k < classes.size(); ++k) min_psi[k] = min_abs_psi(geom, classes[k], y);
  BadPositions out;
  for (double l : lambdas) {
    if (l < 1.0 || l > x_max) continue;
    ++out.population;
    const auto j = gap_index(values, l);
    if (!j) throw InvalidArgument("bad_positions: lambda outside the Dirichlet spectrum gaps");
    const double m = values[*j + 1];
    const double m_minus = values[*j];
    const auto first = std::lower_bound(values.begin(), values.end(), m_minus - 3.0) - values.begin();
    const auto last = std::upper_bound(values.begin(), values.end(), m + 3.0) - values.begin();
    bool flagged = false;
    for (auto k = first; k < last && !flagged; ++k) flagged = min_psi[static_cast<std::size_t>(k)] < threshold;
    if (flagged) out.flagged.push_back(l);
  }
  return out;
}

MomentReport dirichlet_moment_report(const TorusGeometry& geom, double lambda, const SieveParams& params,
                                     const ScattererPosition& y, const MomentOptions& options) {
  const auto map = coefficients_dirichlet(geom, lambda, half_width(geom, lambda, params.delta()), y, options.limits);
  MomentReport r;
  if (map.size() == 0 || (map.weights.array() == 0.0).all()) {
    CoefficientMap none;
    none.geometry = geom;
    none.lambda = lambda;
    r = moment_report(none, options);
  } else {
    r = moment_report(full_lattice_map(map), options);
  }
  r.annulus_size = static_cast<std::size_t>(map.size());
  return r;
}

}  // namespace seba
