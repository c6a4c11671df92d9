#include "seba/spectrum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>

#include "seba/numerics.hpp"

namespace seba {

std::string to_string(Generator g) {
  switch (g) {
    case Generator::midpoint: return "midpoint";
    case Generator::secular: return "secular";
    case Generator::external: return "external";
  }
  return "unknown";
}

std::vector<NormClass> distinct_eigenvalues(const TorusGeometry& geom, double x_max,
                                            const EnumerationLimits& limits) {
  if (!(x_max > 0.0)) throw InvalidArgument("distinct_eigenvalues: X must be positive");
  return norm_classes(geom, x_max, limits);
}

std::vector<double> class_values(std::span<const NormClass> classes) {
  std::vector<double> out(classes.size());
  std::transform(classes.begin(), classes.end(), out.begin(), [](const NormClass& c) { return c.value; });
  return out;
}

InterlacingSequence midpoint_interlacing(std::span<const double> spectrum) {
  if (spectrum.size() < 2) throw InvalidArgument("midpoint_interlacing: need at least two values");
  InterlacingSequence seq;
  seq.generator = Generator::midpoint;
  seq.lambdas.reserve(spectrum.size() - 1);
  for (std::size_t j = 0; j + 1 < spectrum.size(); ++j) {
    if (!(spectrum[j] < spectrum[j + 1])) {
      throw InvalidArgument("midpoint_interlacing: spectrum not strictly increasing");
    }
    seq.lambdas.push_back(0.5 * (spectrum[j] + spectrum[j + 1]));
  }
  seq.upper_bound = spectrum.back();
  return seq;
}

SecularFunction::SecularFunction(const TorusGeometry& geom, double x_max, double coupling,
                                 const SecularOptions& options)
    : cutoff_(options.cutoff_factor * x_max), coupling_(coupling) {
  if (!(x_max > 0.0)) throw InvalidArgument("secular function: X must be positive");
  if (!std::isfinite(coupling)) throw InvalidArgument("secular function: coupling must be finite");
  if (estimated_window_count(geom, 0.0, cutoff_) > 4.0 * options.max_classes) {
    throw CapExceeded("secular function: cutoff spectrum exceeds the class cap");
  }
  classes_ = norm_classes(geom, cutoff_);
  CompensatedSum<double> acc;
  for (const auto& c : classes_) acc.add(c.multiplicity * c.value / (c.value * c.value + 1.0));
  renormalization_ = acc.value();
}

double SecularFunction::operator()(double lambda) const {
  CompensatedSum<double> acc;
  for (const auto& c : classes_) acc.add(c.multiplicity / (c.value - lambda));
  // Weyl density pi per unit of norm beyond the cutoff
  const double tail =
      std::numbers::pi * (0.5 * std::log(cutoff_ * cutoff_ + 1.0) - std::log(cutoff_ - lambda));
  return acc.value() - renormalization_ + tail - coupling_;
}

InterlacingSequence secular_interlacing(const TorusGeometry& geom, double x_max, double coupling,
                                        const SecularOptions& options) {
  const SecularFunction f(geom, x_max, coupling, options);
  const auto classes = f.classes();
  InterlacingSequence seq;
  seq.generator = Generator::secular;
  seq.geometry = geom;
  seq.upper_bound = x_max;
  for (std::size_t j = 0; j + 1 < classes.size() && classes[j + 1].value <= x_max; ++j) {
    double lo = classes[j].value;
    double hi = classes[j + 1].value;
    const double probe = 1e-12 * (hi - lo);
    const double f_lo = f(std::max(lo + probe, std::nextafter(lo, hi)));
    const double f_hi = f(std::min(hi - probe, std::nextafter(hi, lo)));
    if (!(f_lo < 0.0 && f_hi > 0.0)) {
      std::ostringstream os;
      os << "secular function does not change sign on gap (" << format_double(lo) << ", "
         << format_double(hi) << ")";
      throw NonBracketing(os.str());
    }
    while (hi - lo > options.relative_tolerance * std::max(1.0, std::abs(hi))) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (f(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    double root = 0.5 * (lo + hi);
    root = std::clamp(root, std::nextafter(classes[j].value, classes[j + 1].value),
                      std::nextafter(classes[j + 1].value, classes[j].value));
    seq.lambdas.push_back(root);
  }
  return seq;
}

std::optional<std::size_t> gap_index(std::span<const double> spectrum, double lambda) {
  const auto it = std::upper_bound(spectrum.begin(), spectrum.end(), lambda);
  if (it == spectrum.begin() || it == spectrum.end()) return std::nullopt;
  const auto j = static_cast<std::size_t>(it - spectrum.begin()) - 1;
  if (spectrum[j] == lambda) return std::nullopt;
  return j;
}

InterlacingCheck verify_interlacing(std::span<const double> lambdas, std::span<const double> spectrum) {
  InterlacingCheck check;
  std::optional<std::size_t> previous;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const auto j = gap_index(spectrum, lambdas[i]);
    auto fail = [&](std::string why) {
      check.ok = false;
      check.first_offending = i;
      check.reason = std::move(why);
      return check;
    };
    if (!j) {
      const bool hit = std::binary_search(spectrum.begin(), spectrum.end(), lambdas[i]);
      return fail(hit ? "lambda coincides with a spectral value" : "lambda outside the spectrum range");
    }
    if (previous) {
      if (*j == *previous) return fail("two lambdas in one gap");
      if (*j != *previous + 1) return fail("gap skipped or sequence not ascending");
    }
    previous = j;
  }
  return check;
}

std::vector<double> read_lambda_csv(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r,");
    std::string_view field(line.data() + first, last - first + 1);
    if (out.empty() && field == "lambda") continue;
    double value = 0.0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": not a number: " + std::string(field));
    }
    out.push_back(value);
  }
  return out;
}

InterlacingSequence load_external_interlacing(const TorusGeometry& geom, std::istream& in,
                                              const EnumerationLimits& limits) {
  InterlacingSequence seq;
  seq.generator = Generator::external;
  seq.geometry = geom;
  seq.lambdas = read_lambda_csv(in);
  if (seq.lambdas.empty()) throw ValidationFailure("external sequence is empty");
  const double top = seq.lambdas.back();
  const auto spectrum = class_values(distinct_eigenvalues(geom, std::max(top, 0.0) + 16.0, limits));
  const auto check = verify_interlacing(seq.lambdas, spectrum);
  if (!check) {
    throw ValidationFailure("external sequence fails interlacing at index " +
                            std::to_string(*check.first_offending) + ": " + check.reason);
  }
  seq.upper_bound = top;
  return seq;
}

}  // namespace seba
