#include "seba/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "seba/numerics.hpp"

namespace seba {

namespace {

constexpr double kMarginalTolerance = 1e-9;

std::vector<LatticeVector> nonzero_window(const TorusGeometry& geom, double lo, double hi) {
  auto pts = enumerate_window(geom, std::max(lo, 0.0), hi);
  std::erase_if(pts, [](const LatticeVector& v) { return v.is_zero(); });
  return pts;
}

/// Nonzero vectors with norm_sq strictly below `bound_sq`.
std::vector<LatticeVector> short_vectors_sq(const TorusGeometry& geom, double bound_sq) {
  auto pts = nonzero_window(geom, 0.0, bound_sq);
  std::erase_if(pts, [&](const LatticeVector& v) { return !(norm_sq(geom, v) < bound_sq); });
  return pts;
}

bool meets_S_zeta(const TorusGeometry& geom, std::span<const LatticeVector> annulus,
                  const LatticeVector& zeta, double delta) {
  return std::any_of(annulus.begin(), annulus.end(),
                     [&](const LatticeVector& eta) { return in_S_zeta(geom, eta, zeta, delta); });
}

}  // namespace

SieveParams::SieveParams(double delta, double theta) : delta_(delta), theta_(theta) {
  if (!(theta > 0.0 && theta < 0.5)) throw InvalidArgument("theta must lie in (0, 1/2)");
  if (!(delta > 0.0 && delta < (2.0 / 3.0) * (0.5 - theta))) {
    throw InvalidArgument("delta must lie in (0, (2/3)(1/2 - theta))");
  }
}

double half_width(const TorusGeometry& geom, double lambda, double delta) {
  return geom.min_aspect() * std::pow(lambda, 0.5 * delta) / 20.0;
}

MembershipTest in_S_zeta_checked(const TorusGeometry& geom, const LatticeVector& eta,
                                 const LatticeVector& zeta, double delta) {
  const double lhs = std::abs(inner(geom, eta, zeta));
  const double rhs = std::pow(norm_sq(geom, eta), delta);
  MembershipTest t;
  t.member = lhs <= rhs;
  t.marginal = std::abs(lhs - rhs) <= kMarginalTolerance * rhs;
  return t;
}

bool in_S_zeta(const TorusGeometry& geom, const LatticeVector& eta, const LatticeVector& zeta,
               double delta) {
  return in_S_zeta_checked(geom, eta, zeta, delta).member;
}

std::vector<LatticeVector> short_vectors(const TorusGeometry& geom, double radius) {
  return short_vectors_sq(geom, radius * radius);
}

Classification classify(const TorusGeometry& geom, double lambda, const SieveParams& params) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("classify: lambda must be positive");
  const double delta = params.delta();
  const double width = std::pow(lambda, delta);
  Classification result;
  result.lambda = lambda;
  const auto annulus = nonzero_window(geom, lambda - width, lambda + width);
  // |zeta| < lambda^{delta/2}  <=>  norm_sq(zeta) < lambda^delta
  const auto zetas = short_vectors_sq(geom, width);
  result.annulus_size = annulus.size();
  result.zeta_count = zetas.size();
  for (const auto& zeta : zetas) {
    for (const auto& eta : annulus) {
      const auto t = in_S_zeta_checked(geom, eta, zeta, delta);
      if (t.marginal) ++result.marginal_hits;
      if (t.member) {
        result.good = false;
        result.witness = Witness{zeta, eta};
        return result;
      }
    }
  }
  return result;
}

bool witness_valid(const TorusGeometry& geom, double lambda, double delta, const Witness& w) {
  const double width = std::pow(lambda, delta);
  const double zn = norm_sq(geom, w.zeta);
  const double en = norm_sq(geom, w.eta);
  return !w.zeta.is_zero() && zn < width && !w.eta.is_zero() && en >= lambda - width &&
         en <= lambda + width && in_S_zeta(geom, w.eta, w.zeta, delta);
}

BadDensity bad_density_from_labels(std::span<const double> lambdas, const std::vector<bool>& bad,
                                   double x_max, const SieveParams& params) {
  if (lambdas.size() != bad.size()) throw InvalidArgument("bad_density: label count mismatch");
  BadDensity out;
  out.ceiling = params.bad_exponent_ceiling();
  out.checkpoints = {x_max / 8.0, x_max / 4.0, x_max / 2.0, x_max};
  out.checkpoint_bad.assign(4, 0);
  out.checkpoint_total.assign(4, 0);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double l = lambdas[i];
    if (l < 1.0 || l > x_max) continue;
    for (std::size_t k = 0; k < 4; ++k) {
      if (l <= out.checkpoints[k]) {
        ++out.checkpoint_total[k];
        if (bad[i]) ++out.checkpoint_bad[k];
      }
    }
  }
  out.total = out.checkpoint_total[3];
  out.bad_count = out.checkpoint_bad[3];
  if (out.total < 100) throw InsufficientSample("bad_density: fewer than 100 lambdas in [1, X]");
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < 4; ++k) {
    if (out.checkpoint_bad[k] > 0) {
      xs.push_back(out.checkpoints[k]);
      ys.push_back(static_cast<double>(out.checkpoint_bad[k]));
    }
  }
  if (out.bad_count == 0) {
    out.fitted_exponent = -std::numeric_limits<double>::infinity();
  } else if (xs.size() < 2) {
    out.fitted_exponent = std::numeric_limits<double>::infinity();
  } else {
    out.fitted_exponent = fit_loglog_slope<double>(xs, ys);
  }
  return out;
}

BadDensity bad_density(const TorusGeometry& geom, std::span<const double> lambdas, double x_max,
                       const SieveParams& params) {
  std::vector<bool> labels(lambdas.size(), false);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] >= 1.0 && lambdas[i] <= x_max) labels[i] = !classify(geom, lambdas[i], params).good;
  }
  return bad_density_from_labels(lambdas, labels, x_max, params);
}

ZetaCount bad_count_per_zeta(const TorusGeometry& geom, std::span<const double> lambdas,
                             const LatticeVector& zeta, double x_max, const SieveParams& params) {
  if (zeta.is_zero()) throw InvalidArgument("bad_count_per_zeta: zeta must be nonzero");
  const double delta = params.delta();
  ZetaCount out;
  for (double l : lambdas) {
    if (l < 1.0 || l > x_max) continue;
    const double width = std::pow(l, delta);
    const auto annulus = nonzero_window(geom, l - width, l + width);
    if (meets_S_zeta(geom, annulus, zeta, delta)) ++out.count;
  }
  out.bound = std::pow(x_max, 0.5 + params.theta() + delta) / euclidean_norm(geom, zeta);
  out.margin = out.bound - static_cast<double>(out.count);
  return out;
}

bool verify_spacing(const TorusGeometry& geom, std::span<const LatticeVector> points, double min_distance) {
  const double min_sq = min_distance * min_distance;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (norm_sq(geom, points[i] - points[j]) < min_sq) return false;
    }
  }
  return true;
}

bool verify_spacing(const TorusGeometry& geom, double lambda, const SieveParams& params) {
  const double hw = half_width(geom, lambda, params.delta());
  const auto pts = enumerate_window(geom, std::max(lambda - hw, 0.0), lambda + hw);
  return verify_spacing(geom, pts, std::pow(lambda, 0.5 * params.delta()));
}

bool trivial_solutions_check(std::span<const LatticeVector> points) {
  using Key = std::pair<std::int64_t, std::int64_t>;
  // difference eta' - xi'  ->  ordered pairs (xi', eta')
  std::map<Key, std::vector<std::pair<LatticeVector, LatticeVector>>> by_difference;
  for (const auto& xi_p : points) {
    for (const auto& eta_p : points) {
      if (xi_p == eta_p) continue;
      const auto d = eta_p - xi_p;
      by_difference[{d.m, d.n}].emplace_back(xi_p, eta_p);
    }
  }
  for (const auto& xi : points) {
    for (const auto& eta : points) {
      if (xi == eta) continue;
      const auto beta = xi - eta;
      const auto it = by_difference.find({beta.m, beta.n});
      if (it == by_difference.end()) continue;
      for (const auto& [xi_p, eta_p] : it->second) {
        const bool swapped = xi_p == eta && eta_p == xi;
        const bool negated = xi_p == -xi && eta_p == -eta;
        if (!swapped && !negated) return false;
      }
    }
  }
  return true;
}

bool trivial_solutions_check(const TorusGeometry& geom, double lambda, const SieveParams& params) {
  const double hw = half_width(geom, lambda, params.delta());
  const auto pts = enumerate_window(geom, std::max(lambda - hw, 0.0), lambda + hw);
  return trivial_solutions_check(pts);
}

}  // namespace seba
