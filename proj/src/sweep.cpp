#include "seba/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <ostream>

#include "seba/dirichlet.hpp"
#include "seba/numerics.hpp"

namespace seba {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kHistogramBins = 20;

std::vector<NormClass> spectrum_classes(const RunConfig& config, const TorusGeometry& geom, double x_max) {
  if (config.boundary == Boundary::dirichlet) return dirichlet_spectrum(geom, x_max, config.enumeration_limits());
  return distinct_eigenvalues(geom, x_max, config.enumeration_limits());
}

void require_interlacing(std::span<const double> lambdas, std::span<const double> spectrum) {
  const auto check = verify_interlacing(lambdas, spectrum);
  if (!check) {
    throw ValidationFailure("sequence fails interlacing at index " + std::to_string(*check.first_offending) +
                            ": " + check.reason);
  }
}

}  // namespace

GeneratedSequence generate_sequence(const RunConfig& config) {
  validate(config);
  const auto geom = config.torus();
  GeneratedSequence out;
  if (config.generator == "midpoint") {
    out.classes = spectrum_classes(config, geom, config.x_max);
    out.spectrum = class_values(out.classes);
    if (out.spectrum.size() < 2) {
      out.sequence.generator = Generator::midpoint;
    } else {
      out.sequence = midpoint_interlacing(out.spectrum);
    }
    out.sequence.geometry = geom;
  } else if (config.generator == "secular") {
    if (config.boundary == Boundary::dirichlet) {
      throw InvalidArgument("config: the secular generator is defined for the torus only");
    }
    out.sequence = secular_interlacing(geom, config.x_max, config.coupling);
    out.classes = spectrum_classes(config, geom, config.x_max);
    out.spectrum = class_values(out.classes);
  } else {
    std::ifstream in(config.generator);
    if (!in) throw InvalidArgument("config: cannot open sequence file " + config.generator);
    out.sequence.generator = Generator::external;
    out.sequence.geometry = geom;
    out.sequence.lambdas = read_lambda_csv(in);
    if (out.sequence.lambdas.empty()) throw ValidationFailure("external sequence is empty");
    out.sequence.upper_bound = out.sequence.lambdas.back();
    out.classes = spectrum_classes(config, geom, std::max(out.sequence.lambdas.back(), 0.0) + 16.0);
    out.spectrum = class_values(out.classes);
  }
  require_interlacing(out.sequence.lambdas, out.spectrum);
  return out;
}

SweepResult run_sweep(const RunConfig& config) {
  const auto generated = generate_sequence(config);
  const auto geom = config.torus();
  const auto params = config.sieve();
  const double x_max = config.x_max;
  const bool dirichlet = config.boundary == Boundary::dirichlet;
  const auto position = config.position();
  const auto grid = config.grid_override();
  auto options = config.moment_options();
  if (grid) options.grid_override = &*grid;

  SweepResult res;
  res.boundary = config.boundary;
  res.sequence = generated.sequence;
  const auto& lambdas = res.sequence.lambdas;

  // Spectrum and weights for the filter, reaching past X by the tail window.
  const double reach = x_max + kNearTailWindow + 4.0;
  std::vector<double> values, weights;
  if (dirichlet) {
    const auto classes = dirichlet_spectrum(geom, reach, config.enumeration_limits());
    values = class_values(classes);
    weights.reserve(classes.size());
    for (const auto& c : classes) weights.push_back(r_weighted(geom, c, position));
  } else {
    const auto classes = distinct_eigenvalues(geom, reach, config.enumeration_limits());
    values = class_values(classes);
    weights.reserve(classes.size());
    for (const auto& c : classes) weights.push_back(static_cast<double>(c.multiplicity));
  }
  const double density = dirichlet ? std::numbers::pi / 4.0 : std::numbers::pi;
  res.filter = subsequence_filter(values, weights, lambdas, x_max, config.epsilon, density);

  std::vector<double> population_lambdas;
  std::vector<bool> bad_labels;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double l = lambdas[i];
    if (l < 1.0 || l > x_max) continue;
    ++res.population;
    try {
      SweepRow row;
      row.lambda = l;
      const auto cls = classify(geom, l, params);
      row.good = cls.good;
      row.in_filter = res.filter.in_filter[i];
      population_lambdas.push_back(l);
      bad_labels.push_back(!cls.good);
      if (dirichlet) {
        row.report = dirichlet_moment_report(geom, l, params, position, options);
        const double hw = half_width(geom, l, params.delta());
        const auto first = std::lower_bound(values.begin(), values.end(), l - hw);
        const auto last = std::upper_bound(values.begin(), values.end(), l + hw);
        row.r_weighted_min = kNaN;
        for (auto it = first; it != last; ++it) {
          const double w = weights[static_cast<std::size_t>(it - values.begin())];
          row.r_weighted_min = std::isnan(row.r_weighted_min) ? w : std::min(row.r_weighted_min, w);
        }
      } else {
        row.report = normalized_fourth_moment(geom, l, params, options);
        row.r_weighted_min = kNaN;
      }
      if (cls.good && std::pow(l, 0.5 * params.delta()) > 2.0) {
        ++res.lemma_checks.eligible;
        if (verify_spacing(geom, l, params)) ++res.lemma_checks.spacing_pass;
        if (trivial_solutions_check(geom, l, params)) ++res.lemma_checks.trivial_pass;
      }
      res.rows.push_back(std::move(row));
    } catch (const Error& e) {
      res.failures.push_back({l, e.what()});
      std::cerr << "lambda " << format_double(l) << ": " << e.what() << '\n';
    }
  }

  if (population_lambdas.size() >= 100) {
    res.bad_density = bad_density_from_labels(population_lambdas, bad_labels, x_max, params);
  }

  res.histogram_edges.resize(kHistogramBins + 1);
  for (int b = 0; b <= kHistogramBins; ++b) res.histogram_edges[b] = 1.0 + 2.0 * b / kHistogramBins;
  res.histogram_counts.assign(kHistogramBins, 0);
  res.c_eps = kNaN;
  res.max_normalized_fourth = kNaN;
  res.min_normalized_fourth = kNaN;
  for (const auto& row : res.rows) {
    if (row.good) ++res.good_count;
    if (row.in_filter) ++res.filtered_count;
    if (row.report.empty) {
      ++res.empty_count;
      continue;
    }
    const double e = row.report.normalized_fourth;
    if (e >= 1.0 && e <= 3.0) {
      const auto b = std::min<std::size_t>(static_cast<std::size_t>((e - 1.0) / 2.0 * kHistogramBins),
                                           kHistogramBins - 1);
      ++res.histogram_counts[b];
    }
    if (!(row.good && row.in_filter)) continue;
    ++res.filtered_good_nonempty;
    const auto pick = [](double& slot, double v, bool lower) {
      if (std::isnan(slot) || (lower ? v < slot : v > slot)) slot = v;
    };
    pick(res.c_eps, row.report.peak_ratio, true);
    pick(res.max_normalized_fourth, e, false);
    pick(res.min_normalized_fourth, e, true);
  }
  if (res.population) {
    res.good_fraction = static_cast<double>(res.good_count) / static_cast<double>(res.population);
    res.filtered_fraction = static_cast<double>(res.filtered_count) / static_cast<double>(res.population);
  }
  return res;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result, const RunConfig& config) {
  const bool dirichlet = result.boundary == Boundary::dirichlet;
  out << "lambda,good,annulus_size,l2_sq,l4_brute,l4_corrected,l4_paper,l4_quadrature,peak_ratio,"
         "normalized_fourth,in_filter";
  if (dirichlet) out << ",y1,y2,r_weighted_min";
  out << '\n';
  for (const auto& row : result.rows) {
    const auto& r = row.report;
    out << format_double(row.lambda) << ',' << (row.good ? 1 : 0) << ',' << r.annulus_size << ','
        << format_double(r.l2_sq) << ',' << format_double(r.l4_brute) << ',' << format_double(r.l4_corrected)
        << ',' << format_double(r.l4_paper) << ',' << format_double(r.l4_quadrature) << ','
        << format_double(r.peak_ratio) << ',' << format_double(r.normalized_fourth) << ','
        << (row.in_filter ? 1 : 0);
    if (dirichlet) {
      out << ',' << format_double(config.y1) << ',' << format_double(config.y2) << ','
          << format_double(row.r_weighted_min);
    }
    out << '\n';
  }
}

}  // namespace seba
