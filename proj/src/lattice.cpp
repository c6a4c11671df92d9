#include "seba/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include "seba/numerics.hpp"

namespace seba {

TorusGeometry::TorusGeometry(double a, double a_fourth, bool irrational)
    : a_(a),
      a_sq_(a * a),
      a_fourth_(a_fourth),
      min_aspect_(std::min(a, 1.0 / a)),
      irrational_(irrational) {}

TorusGeometry TorusGeometry::from_a(double a, bool irrational) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("lattice parameter a must be positive");
  return TorusGeometry(a, (a * a) * (a * a), irrational);
}

TorusGeometry TorusGeometry::from_a_fourth(double a_fourth, bool irrational) {
  if (!(a_fourth > 0.0) || !std::isfinite(a_fourth)) {
    throw InvalidArgument("a^4 must be positive");
  }
  const long double a = std::pow(static_cast<long double>(a_fourth), 0.25L);
  return TorusGeometry(static_cast<double>(a), a_fourth, irrational);
}

TorusGeometry TorusGeometry::golden() {
  const long double phi = (1.0L + std::sqrt(5.0L)) / 2.0L;
  return TorusGeometry(static_cast<double>(std::pow(phi, 0.25L)), static_cast<double>(phi), true);
}

TorusGeometry TorusGeometry::sqrt2() {
  return TorusGeometry(static_cast<double>(std::pow(2.0L, 0.125L)), std::numbers::sqrt2, true);
}

std::string TorusGeometry::describe() const {
  std::ostringstream os;
  os << "a=" << format_double(a_) << " a^4=" << format_double(a_fourth_)
     << (irrational_ ? " (irrational)" : " (non-generic)");
  return os.str();
}

double estimated_window_count(const TorusGeometry& geom, double lo, double hi) {
  const double area = std::numbers::pi * (std::max(hi, 0.0) - std::max(lo, 0.0));
  const double perimeter = 4.0 * (std::sqrt(std::max(hi, 0.0)) * (geom.a() + 1.0 / geom.a()) + 2.0);
  return area + perimeter;
}

void sort_canonical(const TorusGeometry& geom, std::vector<LatticeVector>& vectors) {
  std::vector<std::pair<double, LatticeVector>> keyed;
  keyed.reserve(vectors.size());
  for (const auto& v : vectors) keyed.emplace_back(norm_sq(geom, v), v);
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
    return std::tie(x.first, x.second.m, x.second.n) < std::tie(y.first, y.second.m, y.second.n);
  });
  for (std::size_t i = 0; i < keyed.size(); ++i) vectors[i] = keyed[i].second;
}

std::vector<LatticeVector> enumerate_window(const TorusGeometry& geom, double lo, double hi,
                                            const EnumerationLimits& limits) {
  if (!(hi >= lo)) throw InvalidArgument("enumerate_window: hi < lo");
  if (!std::isfinite(hi)) throw InvalidArgument("enumerate_window: hi must be finite");
  if (estimated_window_count(geom, lo, hi) > limits.max_points) {
    throw CapExceeded("enumerate_window: window too large for the memory cap");
  }
  std::vector<LatticeVector> out;
  for_each_in_window(geom, lo, hi, [&](const LatticeVector& v, double) { out.push_back(v); });
  sort_canonical(geom, out);
  return out;
}

namespace {

std::vector<NormClass> group_classes(const TorusGeometry& geom,
                                     const std::vector<LatticeVector>& sorted) {
  std::vector<NormClass> classes;
  for (const auto& v : sorted) {
    const double q = norm_sq(geom, v);
    const std::int64_t km = std::abs(v.m);
    const std::int64_t kn = std::abs(v.n);
    if (!classes.empty()) {
      NormClass& last = classes.back();
      const double tol_cluster = kClusterTolerance * std::max(1.0, q);
      if (geom.irrational()) {
        if (last.key_m == km && last.key_n == kn) {
          ++last.multiplicity;
          continue;
        }
        if (q - last.value <= kCollisionTolerance * std::max(1.0, q)) {
          std::ostringstream os;
          os << "norm collision between keys (" << last.key_m << "," << last.key_n << ") and (" << km
             << "," << kn << ") at value " << format_double(q);
          throw NormCollision(os.str());
        }
      } else if (q - last.value <= tol_cluster) {
        ++last.multiplicity;
        continue;
      }
    }
    classes.push_back(NormClass{km, kn, q, 1});
  }
  return classes;
}

}  // namespace

std::vector<NormClass> norm_classes(const TorusGeometry& geom, double x_max,
                                    const EnumerationLimits& limits) {
  if (!(x_max >= 0.0)) throw InvalidArgument("norm_classes: X must be non-negative");
  return group_classes(geom, enumerate_window(geom, 0.0, x_max, limits));
}

std::vector<NormClass> norm_classes_window(const TorusGeometry& geom, double lo, double hi,
                                           const EnumerationLimits& limits) {
  return group_classes(geom, enumerate_window(geom, std::max(lo, 0.0), hi, limits));
}

std::int64_t count_in_unit_window(const TorusGeometry& geom, std::int64_t k) {
  if (k < 0) throw InvalidArgument("count_in_unit_window: k must be non-negative");
  const double lo = static_cast<double>(k);
  const double hi = static_cast<double>(k + 1);
  std::int64_t count = 0;
  for_each_in_window(geom, lo, hi, [&](const LatticeVector&, double q) {
    if (q < hi) ++count;
  });
  return count;
}

std::int64_t count_in_disk(const TorusGeometry& geom, double x) {
  std::int64_t count = 0;
  for_each_in_window(geom, 0.0, x, [&](const LatticeVector&, double) { ++count; });
  return count;
}

}  // namespace seba
