#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "seba/error.hpp"

namespace seba {

/// Compensated (Neumaier) accumulator. Order of `add` calls fixes the result.
template <typename Scalar>
class CompensatedSum {
 public:
  void add(Scalar x) {
    const Scalar t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Scalar value() const { return sum_ + comp_; }

 private:
  Scalar sum_ = Scalar(0);
  Scalar comp_ = Scalar(0);
};

/// Serial compensated sum of a dense Eigen expression, in storage order.
template <typename Derived>
typename Derived::Scalar compensated_sum(const Eigen::DenseBase<Derived>& expr) {
  using Scalar = typename Derived::Scalar;
  const auto& eval = expr.derived().eval();
  CompensatedSum<Scalar> acc;
  for (Eigen::Index j = 0; j < eval.cols(); ++j) {
    for (Eigen::Index i = 0; i < eval.rows(); ++i) acc.add(eval(i, j));
  }
  return acc.value();
}

template <typename Scalar>
Scalar compensated_sum(std::span<const Scalar> values) {
  CompensatedSum<Scalar> acc;
  for (Scalar v : values) acc.add(v);
  return acc.value();
}

/// Ordinary least-squares slope of y against x.
template <typename Scalar>
Scalar fit_slope(std::span<const Scalar> x, std::span<const Scalar> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("fit_slope: need at least two paired samples");
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> xv(x.data(), n);
  Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> yv(y.data(), n);
  const auto xc = (xv.array() - xv.mean()).matrix().eval();
  const auto yc = (yv.array() - yv.mean()).matrix().eval();
  const Scalar sxx = xc.squaredNorm();
  if (sxx == Scalar(0)) throw InvalidArgument("fit_slope: degenerate abscissae");
  return xc.dot(yc) / sxx;
}

/// Slope of log(y) against log(x).
template <typename Scalar>
Scalar fit_loglog_slope(std::span<const Scalar> x, std::span<const Scalar> y) {
  std::vector<Scalar> lx(x.size()), ly(y.size());
  std::transform(x.begin(), x.end(), lx.begin(), [](Scalar v) { return std::log(v); });
  std::transform(y.begin(), y.end(), ly.begin(), [](Scalar v) { return std::log(v); });
  return fit_slope<Scalar>(lx, ly);
}

/// Lower q-quantile: the smallest sample value v such that at least a
/// fraction q of the samples are <= v.
template <typename Scalar>
Scalar quantile(std::vector<Scalar> values, double q) {
  if (values.empty()) throw InvalidArgument("quantile of empty sample");
  const auto n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   values.end());
  return values[rank - 1];
}

inline double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// 17 significant digits, `%g` style. Round-trips every double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

}  // namespace seba
