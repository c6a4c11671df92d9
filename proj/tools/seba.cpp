// Batch front-end for the scatterer toolkit.
//
// Every command reads an optional key=value config file (--config) and then
// applies per-key flag overrides (--delta 0.1, --x_max 5e4, ...). Outputs go
// to output_dir. Exit codes: 0 ok, 2 config error, 3 validation failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "seba/config.hpp"
#include "seba/dirichlet.hpp"
#include "seba/moments.hpp"
#include "seba/numerics.hpp"
#include "seba/sieve.hpp"
#include "seba/spectrum.hpp"
#include "seba/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;
constexpr int kExitRuntime = 1;

struct CommandArgs {
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

void add_config_options(CLI::App* cmd, CommandArgs& args) {
  cmd->add_option("--config", args.config_path, "key=value configuration file");
  for (const auto& key : seba::config_keys()) {
    cmd->add_option_function<std::string>(
        "--" + key, [&args, key](const std::string& v) { args.overrides[key] = v; }, "override " + key);
  }
}

seba::RunConfig load_config(const CommandArgs& args) {
  seba::RunConfig config;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw seba::InvalidArgument("cannot open config file " + args.config_path);
    for (const auto& [k, v] : seba::parse_config(in)) seba::apply_setting(config, k, v);
  }
  for (const auto& [k, v] : args.overrides) seba::apply_setting(config, k, v);
  seba::validate(config);
  return config;
}

std::ofstream open_output(const seba::RunConfig& config, const std::string& name) {
  fs::create_directories(config.output_dir);
  const auto path = fs::path(config.output_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw seba::InvalidArgument("cannot write " + path.string());
  return out;
}

void write_json(const seba::RunConfig& config, const std::string& name, const ordered_json& j) {
  auto out = open_output(config, name);
  out << j.dump(2) << '\n';
}

/// NaN and infinities become null.
ordered_json num(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

ordered_json config_json(const seba::RunConfig& config) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : seba::describe(config)) j[k] = v;
  return j;
}

int cmd_enumerate(const seba::RunConfig& config) {
  if (!config.lo || !config.hi) throw seba::InvalidArgument("enumerate needs lo and hi");
  const auto geom = config.torus();
  const auto pts = seba::enumerate_window(geom, *config.lo, *config.hi, config.enumeration_limits());
  auto out = open_output(config, "enumerate.csv");
  out << "m,n,norm_sq\n";
  for (const auto& v : pts) out << v.m << ',' << v.n << ',' << seba::format_double(seba::norm_sq(geom, v)) << '\n';
  return 0;
}

int cmd_spectrum(const seba::RunConfig& config) {
  const auto gen = seba::generate_sequence(config);
  auto out = open_output(config, "spectrum.csv");
  out << "j,n_j,r,lambda_j,generator\n";
  const auto name = seba::to_string(gen.sequence.generator);
  for (std::size_t i = 0; i < gen.sequence.lambdas.size(); ++i) {
    const double l = gen.sequence.lambdas[i];
    const auto j = *seba::gap_index(gen.spectrum, l);
    out << j << ',' << seba::format_double(gen.classes[j].value) << ',' << gen.classes[j].multiplicity << ','
        << seba::format_double(l) << ',' << name << '\n';
  }
  return 0;
}

int cmd_classify(const seba::RunConfig& config) {
  const auto gen = seba::generate_sequence(config);
  const auto geom = config.torus();
  const auto params = config.sieve();
  auto out = open_output(config, "classify.csv");
  out << "lambda,good,annulus_size,zeta_count,zeta_m,zeta_n,eta_m,eta_n\n";
  std::vector<double> lambdas;
  std::vector<bool> bad;
  for (double l : gen.sequence.lambdas) {
    if (l < 1.0 || l > config.x_max) continue;
    const auto c = seba::classify(geom, l, params);
    lambdas.push_back(l);
    bad.push_back(!c.good);
    out << seba::format_double(l) << ',' << (c.good ? 1 : 0) << ',' << c.annulus_size << ',' << c.zeta_count;
    if (c.witness) {
      out << ',' << c.witness->zeta.m << ',' << c.witness->zeta.n << ',' << c.witness->eta.m << ','
          << c.witness->eta.n;
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
  ordered_json j;
  j["config"] = config_json(config);
  j["population"] = lambdas.size();
  j["bad_count"] = std::count(bad.begin(), bad.end(), true);
  if (lambdas.size() >= 100) {
    const auto d = seba::bad_density_from_labels(lambdas, bad, config.x_max, params);
    j["checkpoints"] = d.checkpoints;
    j["checkpoint_bad"] = d.checkpoint_bad;
    j["fitted_exponent"] = num(d.fitted_exponent);
    j["ceiling"] = d.ceiling;
  }
  write_json(config, "classify_summary.json", j);
  return 0;
}

int cmd_sweep(const seba::RunConfig& config) {
  const auto res = seba::run_sweep(config);
  const bool dirichlet = config.boundary == seba::Boundary::dirichlet;
  const std::string stem = dirichlet ? "dirichlet_sweep" : "sweep";
  {
    auto out = open_output(config, stem + ".csv");
    seba::write_sweep_csv(out, res, config);
  }
  ordered_json j;
  j["config"] = config_json(config);
  j["boundary"] = dirichlet ? "dirichlet" : "torus";
  j["generator"] = seba::to_string(res.sequence.generator);
  j["interlacing"] = true;
  j["population"] = res.population;
  j["good_count"] = res.good_count;
  j["good_fraction"] = res.good_fraction;
  j["filtered_count"] = res.filtered_count;
  j["filtered_fraction"] = res.filtered_fraction;
  j["empty_annuli"] = res.empty_count;
  j["filtered_good_nonempty"] = res.filtered_good_nonempty;
  j["thresholds"] = {{"E", num(res.filter.threshold_E)},
                     {"F", num(res.filter.threshold_F)},
                     {"G", num(res.filter.threshold_G)}};
  j["c_eps"] = num(res.c_eps);
  j["max_normalized_fourth"] = num(res.max_normalized_fourth);
  j["min_normalized_fourth"] = num(res.min_normalized_fourth);
  j["upper_bound_3_minus_3c"] = num(3.0 - 3.0 * res.c_eps);
  j["margin_below_3"] = num(3.0 - res.max_normalized_fourth);
  j["shape_holds"] = res.filtered_good_nonempty == 0 ||
                     (res.max_normalized_fourth <= 3.0 - 3.0 * res.c_eps + 1e-12 && res.min_normalized_fourth >= 1.0);
  j["normalized_fourth_histogram"] = {{"edges", res.histogram_edges}, {"counts", res.histogram_counts}};
  if (res.bad_density) {
    const auto& d = *res.bad_density;
    j["bad_density"] = {{"checkpoints", d.checkpoints},
                        {"checkpoint_bad", d.checkpoint_bad},
                        {"fitted_exponent", num(d.fitted_exponent)},
                        {"ceiling", d.ceiling}};
  } else {
    j["bad_density"] = nullptr;
  }
  j["lemma_checks"] = {{"eligible", res.lemma_checks.eligible},
                       {"spacing_pass", res.lemma_checks.spacing_pass},
                       {"trivial_pass", res.lemma_checks.trivial_pass}};
  ordered_json failures = ordered_json::array();
  for (const auto& f : res.failures) failures.push_back({{"lambda", f.lambda}, {"message", f.message}});
  j["failures"] = failures;
  write_json(config, stem + "_summary.json", j);
  return 0;
}

int cmd_distribution(const seba::RunConfig& config) {
  if (!config.lambda) throw seba::InvalidArgument("distribution needs lambda");
  const auto geom = config.torus();
  const double l = *config.lambda;
  const double hw = seba::half_width(geom, l, config.delta);
  const auto map = config.boundary == seba::Boundary::dirichlet
                       ? seba::full_lattice_map(seba::coefficients_dirichlet(geom, l, hw, config.position(),
                                                                               config.map_limits()))
                       : seba::coefficients_annulus(geom, l, hw, config.map_limits());
  if (map.empty() || (map.coefficients.array() == 0.0).all()) {
    throw seba::InvalidArgument("distribution: empty annulus at lambda " + seba::format_double(l));
  }
  const auto grid = config.grid_override();
  const auto dist = seba::value_distribution(map, static_cast<int>(config.bins), grid ? &*grid : nullptr,
                                             config.map_limits());
  {
    auto out = open_output(config, "distribution_histogram.csv");
    seba::write_histogram_csv(out, dist);
  }
  ordered_json j;
  j["config"] = config_json(config);
  j["boundary"] = config.boundary == seba::Boundary::dirichlet ? "dirichlet" : "torus";
  j["lambda"] = l;
  j["entries"] = map.size();
  j["grid"] = {{"rows", dist.shape.rows}, {"cols", dist.shape.cols}};
  j["m1"] = dist.m1;
  j["m2"] = dist.m2;
  j["m3"] = dist.m3;
  j["m4"] = dist.m4;
  j["kolmogorov_distance"] = dist.kolmogorov_distance;
  j["gaussian_reference"] = {0.0, 1.0, 0.0, 3.0};
  write_json(config, "distribution_stats.json", j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point-scatterer eigenfunction moment toolkit"};
  app.require_subcommand(1);
  struct Entry {
    CLI::App* cmd;
    CommandArgs args;
    int (*run)(const seba::RunConfig&);
    bool force_dirichlet;
  };
  std::vector<std::unique_ptr<Entry>> entries;
  auto add = [&](const std::string& name, const std::string& help, int (*run)(const seba::RunConfig&),
                 bool force_dirichlet = false) {
    auto e = std::make_unique<Entry>();
    e->cmd = app.add_subcommand(name, help);
    e->run = run;
    e->force_dirichlet = force_dirichlet;
    add_config_options(e->cmd, e->args);
    entries.push_back(std::move(e));
  };
  add("enumerate", "lattice vectors with lo <= |v|^2 <= hi", cmd_enumerate);
  add("spectrum", "distinct eigenvalues and the interlacing sequence", cmd_spectrum);
  add("classify", "good/bad label and witness for every lambda <= x_max", cmd_classify);
  add("sweep", "moment sweep with filter and summary", cmd_sweep);
  add("distribution", "value distribution of one normalized Green's function", cmd_distribution);
  add("dirichlet-sweep", "moment sweep for the Dirichlet rectangle", cmd_sweep, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  for (auto& e : entries) {
    if (!e->cmd->parsed()) continue;
    seba::RunConfig config;
    try {
      if (e->force_dirichlet) e->args.overrides["boundary"] = "dirichlet";
      config = load_config(e->args);
    } catch (const seba::Error& err) {
      std::cerr << "config error: " << err.what() << '\n';
      return kExitConfig;
    }
    try {
      return e->run(config);
    } catch (const seba::ValidationFailure& err) {
      std::cerr << "validation failure: " << err.what() << '\n';
      return kExitValidation;
    } catch (const seba::InvalidArgument& err) {
      std::cerr << "error: " << err.what() << '\n';
      return kExitConfig;
    } catch (const seba::Error& err) {
      std::cerr << "error: " << err.what() << '\n';
      return kExitRuntime;
    } catch (const std::exception& err) {
      std::cerr << "error: " << err.what() << '\n';
      return kExitRuntime;
    }
  }
  return 0;
}
