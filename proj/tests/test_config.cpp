#include <doctest.h>

#include <cmath>
#include <sstream>

#include "seba/config.hpp"
#include "seba/sweep.hpp"

using namespace seba;

TEST_SUITE("config") {
  TEST_CASE("defaults") {
    const RunConfig c;
    CHECK_NOTHROW(validate(c));
    CHECK(c.torus().a_fourth() == TorusGeometry::golden().a_fourth());
    CHECK(c.sieve().delta() == 0.1);
    CHECK(c.position().y1() == ScattererPosition::default_position().y1());
    CHECK(c.position().y2() == ScattererPosition::default_position().y2());
    CHECK_FALSE(c.grid_override().has_value());
    CHECK(describe(c).size() == config_keys().size());
  }

  TEST_CASE("key = value parsing") {
    std::istringstream in("# run\ndelta = 0.05\n\ngeometry=sqrt2   # comment\nthresholds = 0.1,0.2\n");
    const auto kv = parse_config(in);
    REQUIRE(kv.size() == 3);
    RunConfig c;
    for (const auto& [k, v] : kv) apply_setting(c, k, v);
    CHECK(c.delta == 0.05);
    CHECK(c.geometry == "sqrt2");
    CHECK(c.thresholds == std::vector<double>{0.1, 0.2});
    std::istringstream broken("delta 0.05\n");
    CHECK_THROWS_AS(parse_config(broken), InvalidArgument);
  }

  TEST_CASE("settings reject bad keys and values") {
    RunConfig c;
    CHECK_THROWS_AS(apply_setting(c, "nonsense", "1"), InvalidArgument);
    CHECK_THROWS_AS(apply_setting(c, "delta", "abc"), InvalidArgument);
    CHECK_THROWS_AS(apply_setting(c, "boundary", "neumann"), InvalidArgument);
    CHECK_THROWS_AS(apply_setting(c, "irrational", "maybe"), InvalidArgument);
    apply_setting(c, "geometry", "2");
    apply_setting(c, "irrational", "false");
    CHECK(c.torus().a_fourth() == 2.0);
    CHECK_FALSE(c.torus().irrational());
    apply_setting(c, "boundary", "dirichlet");
    CHECK(c.boundary == Boundary::dirichlet);
  }

  TEST_CASE("cross-field validation") {
    RunConfig c;
    c.delta = 0.3;
    CHECK_THROWS_AS(validate(c), InvalidArgument);
    c = RunConfig{};
    c.epsilon = 1.0;
    CHECK_THROWS_AS(validate(c), InvalidArgument);
    c = RunConfig{};
    c.bins = 3;
    CHECK_THROWS_AS(validate(c), InvalidArgument);
    c = RunConfig{};
    c.y1 = 1.5;
    CHECK_THROWS_AS(validate(c), InvalidArgument);
    c = RunConfig{};
    c.grid_rows = 64;
    REQUIRE(c.grid_override().has_value());
    CHECK(c.grid_override()->rows == 64);
  }
}

TEST_SUITE("sweep") {
  TEST_CASE("small torus sweep") {
    RunConfig c;
    c.x_max = 2000.0;
    const auto res = run_sweep(c);
    CHECK(res.failures.empty());
    CHECK(res.population == res.rows.size());
    CHECK(res.population > 100);
    CHECK(res.bad_density.has_value());
    for (const auto& row : res.rows) {
      CHECK(row.lambda >= 1.0);
      CHECK(row.lambda <= 2000.0);
      if (!row.report.empty && row.good && row.in_filter) {
        CHECK(row.report.normalized_fourth >= 1.5);
        CHECK(row.report.normalized_fourth < 3.0);
      }
    }
    CHECK(res.lemma_checks.spacing_pass == res.lemma_checks.eligible);
    CHECK(res.lemma_checks.trivial_pass == res.lemma_checks.eligible);
    std::ostringstream a, b;
    write_sweep_csv(a, res, c);
    write_sweep_csv(b, run_sweep(c), c);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("lambda,good,annulus_size,l2_sq,l4_brute,l4_corrected,l4_paper,l4_quadrature,"
                        "peak_ratio,normalized_fourth,in_filter\n", 0) == 0);
  }

  TEST_CASE("small Dirichlet sweep") {
    RunConfig c;
    c.x_max = 1500.0;
    c.boundary = Boundary::dirichlet;
    const auto res = run_sweep(c);
    CHECK(res.failures.empty());
    CHECK(res.population > 0);
    std::ostringstream out;
    write_sweep_csv(out, res, c);
    const auto header = out.str().substr(0, out.str().find('\n'));
    CHECK(header.ends_with(",y1,y2,r_weighted_min"));
  }

  TEST_CASE("sweep below the first gap is empty") {
    RunConfig c;
    c.x_max = 0.5;
    const auto res = run_sweep(c);
    CHECK(res.rows.empty());
    CHECK(res.population == 0);
    CHECK_FALSE(res.bad_density.has_value());
  }

  TEST_CASE("generators") {
    RunConfig c;
    c.x_max = 300.0;
    c.generator = "secular";
    const auto s = generate_sequence(c);
    CHECK(s.sequence.generator == Generator::secular);
    CHECK(verify_interlacing(s.sequence.lambdas, s.spectrum).ok);
    c.boundary = Boundary::dirichlet;
    CHECK_THROWS_AS(generate_sequence(c), InvalidArgument);
    c = RunConfig{};
    c.generator = "/nonexistent/sequence.csv";
    CHECK_THROWS_AS(generate_sequence(c), InvalidArgument);
  }
}
