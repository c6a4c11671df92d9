#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seba/dirichlet.hpp"
#include "seba/greens.hpp"
#include "seba/lattice.hpp"
#include "seba/moments.hpp"
#include "seba/sieve.hpp"

namespace seba {

enum class Boundary { torus, dirichlet };

/// Flat run configuration. Every field is settable by key; see `config_keys`.
struct RunConfig {
  std::string geometry = "golden";  ///< "golden", "sqrt2" or a decimal a^4
  bool irrational = true;           ///< only consulted for decimal a^4
  double delta = 0.1;
  double theta = 1.0 / 3.0;
  double epsilon = 0.1;
  double x_max = 5.0e4;
  std::string generator = "midpoint";  ///< "midpoint", "secular" or a CSV path
  double coupling = 0.0;
  Boundary boundary = Boundary::torus;
  double y1 = 0.41421356237309515;  ///< sqrt 2 - 1
  double y2 = 0.7320508075688772;   ///< sqrt 3 - 1
  std::int64_t grid_rows = 0;       ///< 0 keeps the automatic grid
  std::int64_t grid_cols = 0;
  double max_points = 6.0e7;
  double max_entries = 2.0e7;
  double max_grid_points = 6.0e7;
  std::int64_t brute_force_cap = 5000;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  // command arguments
  std::optional<double> lo;
  std::optional<double> hi;
  std::optional<double> lambda;
  std::int64_t bins = 60;
  std::vector<double> thresholds{0.01, 0.02, 0.04};

  TorusGeometry torus() const;
  SieveParams sieve() const { return SieveParams(delta, theta); }
  ScattererPosition position() const;
  MapLimits map_limits() const { return {max_entries, max_grid_points}; }
  EnumerationLimits enumeration_limits() const { return {max_points}; }
  std::optional<GridShape> grid_override() const;
  MomentOptions moment_options() const;
};

/// Keys accepted by `apply_setting`, in documentation order.
const std::vector<std::string>& config_keys();

/// Set one key; throws InvalidArgument for unknown keys or unparsable values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Parse `key = value` lines; '#' starts a comment.
std::map<std::string, std::string> parse_config(std::istream& in);

/// Cross-field checks (sieve bounds, epsilon, caps, position).
void validate(const RunConfig& config);

/// Echo of the configuration as key/value pairs, in key order.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config);

}  // namespace seba
