#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "seba/config.hpp"
#include "seba/moments.hpp"
#include "seba/sieve.hpp"
#include "seba/spectrum.hpp"

namespace seba {

struct SweepRow {
  double lambda = 0.0;
  bool good = false;
  bool in_filter = false;
  MomentReport report;
  double r_weighted_min = 0.0;  ///< Dirichlet only: min r(n, y) over annulus classes, NaN if none
};

struct SweepFailure {
  double lambda = 0.0;
  std::string message;
};

/// Spacing and trivial-solution checks on good lambda with lambda^{delta/2} > 2.
struct LemmaChecks {
  std::size_t eligible = 0;
  std::size_t spacing_pass = 0;
  std::size_t trivial_pass = 0;
};

struct SweepResult {
  Boundary boundary = Boundary::torus;
  InterlacingSequence sequence;
  std::vector<SweepRow> rows;  ///< lambda in [1, X] that completed
  std::vector<SweepFailure> failures;
  FilterResult filter;
  std::optional<BadDensity> bad_density;  ///< absent when fewer than 100 lambdas
  LemmaChecks lemma_checks;

  std::size_t population = 0;
  std::size_t good_count = 0;
  std::size_t filtered_count = 0;
  std::size_t empty_count = 0;
  std::size_t filtered_good_nonempty = 0;
  double good_fraction = 0.0;
  double filtered_fraction = 0.0;
  double c_eps = 0.0;                  ///< min peak_ratio over filtered good nonempty rows
  double max_normalized_fourth = 0.0;  ///< over the same rows
  double min_normalized_fourth = 0.0;
  std::vector<double> histogram_edges;  ///< normalized_fourth histogram on [1, 3]
  std::vector<std::size_t> histogram_counts;
};

struct GeneratedSequence {
  InterlacingSequence sequence;
  std::vector<NormClass> classes;  ///< distinct values the sequence interlaces with
  std::vector<double> spectrum;    ///< their values
};

/// Build Lambda from the configured generator and verify interlacing
/// (ValidationFailure otherwise).
GeneratedSequence generate_sequence(const RunConfig& config);

/// Classify, report moments and filter every lambda of the configured sequence in [1, X].
SweepResult run_sweep(const RunConfig& config);

void write_sweep_csv(std::ostream& out, const SweepResult& result, const RunConfig& config);

}  // namespace seba
