#include "seba/config.hpp"

#include <charconv>
#include <istream>
#include <sstream>

#include "seba/numerics.hpp"

namespace seba {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw InvalidArgument("config: bad value for " + key + ": '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw InvalidArgument("config: bad boolean for " + key + ": '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<double>(key, trim(item)));
  if (out.empty()) throw InvalidArgument("config: empty list for " + key);
  return out;
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

TorusGeometry RunConfig::torus() const {
  if (geometry == "golden") return TorusGeometry::golden();
  if (geometry == "sqrt2") return TorusGeometry::sqrt2();
  return TorusGeometry::from_a_fourth(parse_number<double>("geometry", geometry), irrational);
}

ScattererPosition RunConfig::position() const {
  const bool is_default = y1 == ScattererPosition::default_position().y1() &&
                          y2 == ScattererPosition::default_position().y2();
  return ScattererPosition(y1, y2, is_default);
}

std::optional<GridShape> RunConfig::grid_override() const {
  if (grid_rows <= 0 && grid_cols <= 0) return std::nullopt;
  return GridShape{std::max<Eigen::Index>(1, grid_rows), std::max<Eigen::Index>(1, grid_cols)};
}

MomentOptions RunConfig::moment_options() const {
  MomentOptions o;
  o.brute_force_cap = static_cast<std::size_t>(brute_force_cap);
  o.limits = map_limits();
  return o;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "geometry", "irrational", "delta",      "theta",          "epsilon",         "x_max",
      "generator", "coupling",  "boundary",   "y1",             "y2",              "grid_rows",
      "grid_cols", "max_points", "max_entries", "max_grid_points", "brute_force_cap", "output_dir",
      "seed",      "lo",         "hi",         "lambda",         "bins",            "thresholds"};
  return keys;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "geometry") {
    if (value != "golden" && value != "sqrt2") {
      const double a4 = parse_number<double>(key, value);
      if (!(a4 > 0.0)) throw InvalidArgument("config: geometry a^4 must be positive");
    }
    c.geometry = value;
  } else if (key == "irrational") {
    c.irrational = parse_bool(key, value);
  } else if (key == "delta") {
    c.delta = parse_number<double>(key, value);
  } else if (key == "theta") {
    c.theta = parse_number<double>(key, value);
  } else if (key == "epsilon") {
    c.epsilon = parse_number<double>(key, value);
  } else if (key == "x_max") {
    c.x_max = parse_number<double>(key, value);
  } else if (key == "generator") {
    if (value.empty()) throw InvalidArgument("config: empty generator");
    c.generator = value;
  } else if (key == "coupling") {
    c.coupling = parse_number<double>(key, value);
  } else if (key == "boundary") {
    if (value == "torus") {
      c.boundary = Boundary::torus;
    } else if (value == "dirichlet") {
      c.boundary = Boundary::dirichlet;
    } else {
      throw InvalidArgument("config: boundary must be torus or dirichlet");
    }
  } else if (key == "y1") {
    c.y1 = parse_number<double>(key, value);
  } else if (key == "y2") {
    c.y2 = parse_number<double>(key, value);
  } else if (key == "grid_rows") {
    c.grid_rows = parse_number<std::int64_t>(key, value);
  } else if (key == "grid_cols") {
    c.grid_cols = parse_number<std::int64_t>(key, value);
  } else if (key == "max_points") {
    c.max_points = parse_number<double>(key, value);
  } else if (key == "max_entries") {
    c.max_entries = parse_number<double>(key, value);
  } else if (key == "max_grid_points") {
    c.max_grid_points = parse_number<double>(key, value);
  } else if (key == "brute_force_cap") {
    c.brute_force_cap = parse_number<std::int64_t>(key, value);
  } else if (key == "output_dir") {
    if (value.empty()) throw InvalidArgument("config: empty output_dir");
    c.output_dir = value;
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "lo") {
    c.lo = parse_number<double>(key, value);
  } else if (key == "hi") {
    c.hi = parse_number<double>(key, value);
  } else if (key == "lambda") {
    c.lambda = parse_number<double>(key, value);
  } else if (key == "bins") {
    c.bins = parse_number<std::int64_t>(key, value);
  } else if (key == "thresholds") {
    c.thresholds = parse_list(key, value);
  } else {
    throw InvalidArgument("config: unknown key '" + key + "'");
  }
}

std::map<std::string, std::string> parse_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void validate(const RunConfig& c) {
  (void)c.sieve();
  (void)c.torus();
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) throw InvalidArgument("config: epsilon must lie in (0, 1)");
  if (!(c.x_max > 0.0)) throw InvalidArgument("config: x_max must be positive");
  if (!(c.max_points > 0.0 && c.max_entries > 0.0 && c.max_grid_points > 0.0)) {
    throw InvalidArgument("config: caps must be positive");
  }
  if (c.brute_force_cap < 0) throw InvalidArgument("config: brute_force_cap must be non-negative");
  if (c.grid_rows < 0 || c.grid_cols < 0) throw InvalidArgument("config: grid override must be non-negative");
  if (c.bins < 10) throw InvalidArgument("config: bins must be at least 10");
  (void)c.position();
  for (double t : c.thresholds) {
    if (!(t >= 0.0)) throw InvalidArgument("config: thresholds must be non-negative");
  }
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c) {
  std::string thresholds;
  for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
    if (i) thresholds += ',';
    thresholds += format_double(c.thresholds[i]);
  }
  return {{"geometry", c.geometry},
          {"irrational", c.irrational ? "true" : "false"},
          {"delta", format_double(c.delta)},
          {"theta", format_double(c.theta)},
          {"epsilon", format_double(c.epsilon)},
          {"x_max", format_double(c.x_max)},
          {"generator", c.generator},
          {"coupling", format_double(c.coupling)},
          {"boundary", c.boundary == Boundary::torus ? "torus" : "dirichlet"},
          {"y1", format_double(c.y1)},
          {"y2", format_double(c.y2)},
          {"grid_rows", std::to_string(c.grid_rows)},
          {"grid_cols", std::to_string(c.grid_cols)},
          {"max_points", format_double(c.max_points)},
          {"max_entries", format_double(c.max_entries)},
          {"max_grid_points", format_double(c.max_grid_points)},
          {"brute_force_cap", std::to_string(c.brute_force_cap)},
          {"output_dir", c.output_dir},
          {"seed", std::to_string(c.seed)},
          {"lo", opt(c.lo)},
          {"hi", opt(c.hi)},
          {"lambda", opt(c.lambda)},
          {"bins", std::to_string(c.bins)},
          {"thresholds", thresholds}};
}

}  // namespace seba
