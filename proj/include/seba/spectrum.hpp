#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seba/lattice.hpp"

namespace seba {

enum class Generator { midpoint, secular, external };

std::string to_string(Generator g);

/// Strictly increasing reals with one member in each consecutive gap of the
/// distinct unperturbed spectrum.
struct InterlacingSequence {
  std::vector<double> lambdas;
  Generator generator = Generator::midpoint;
  std::optional<TorusGeometry> geometry;
  double upper_bound = 0.0;
};

/// N intersected with [0, X].
std::vector<NormClass> distinct_eigenvalues(const TorusGeometry& geom, double x_max,
                                            const EnumerationLimits& limits = {});

std::vector<double> class_values(std::span<const NormClass> classes);

/// lambda_j = (n_j + n_{j+1}) / 2.
InterlacingSequence midpoint_interlacing(std::span<const double> spectrum);

struct SecularOptions {
  double cutoff_factor = 100.0;   ///< sum runs over n <= cutoff_factor * X
  double relative_tolerance = 1e-12;
  double max_classes = 2.0e6;     ///< work cap on the truncated sum
};

/// Renormalized resolvent sum
///   F(lambda) = sum_n r(n) (1/(n - lambda) - n/(n^2 + 1)) + tail - coupling
/// over the truncated spectrum, with the Weyl-density tail beyond the cutoff.
class SecularFunction {
 public:
  SecularFunction(const TorusGeometry& geom, double x_max, double coupling,
                  const SecularOptions& options = {});

  double operator()(double lambda) const;
  std::span<const NormClass> classes() const { return classes_; }
  double cutoff() const { return cutoff_; }

 private:
  std::vector<NormClass> classes_;
  double cutoff_;
  double coupling_;
  double renormalization_;  // sum r(n) n / (n^2 + 1), lambda independent
};

/// One root of the secular equation in every gap (n_j, n_{j+1}) with n_{j+1} <= X.
InterlacingSequence secular_interlacing(const TorusGeometry& geom, double x_max, double coupling,
                                        const SecularOptions& options = {});

struct InterlacingCheck {
  bool ok = true;
  std::optional<std::size_t> first_offending;
  std::string reason;
  explicit operator bool() const { return ok; }
};

/// True iff the sequence occupies a contiguous run of gaps, one member per
/// gap, and no member coincides with a spectral value.
InterlacingCheck verify_interlacing(std::span<const double> lambdas, std::span<const double> spectrum);

/// Index j of the gap (n_j, n_{j+1}) containing lambda, if strictly inside one.
std::optional<std::size_t> gap_index(std::span<const double> spectrum, double lambda);

/// One lambda per line, ascending; blank lines, '#' comments and a leading
/// "lambda" header are skipped.
std::vector<double> read_lambda_csv(std::istream& in);

/// Load an external sequence and validate it against the spectrum of `geom`.
/// Throws ValidationFailure when the file does not interlace.
InterlacingSequence load_external_interlacing(const TorusGeometry& geom, std::istream& in,
                                              const EnumerationLimits& limits = {});

}  // namespace seba
