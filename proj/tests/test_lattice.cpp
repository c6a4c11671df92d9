#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "seba/lattice.hpp"

using namespace seba;

namespace {

std::vector<oracle::Point> as_points(const std::vector<LatticeVector>& vs) {
  std::vector<oracle::Point> out;
  for (const auto& v : vs) out.push_back({v.m, v.n});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("geometry constants") {
    const auto g = TorusGeometry::golden();
    CHECK(g.a_fourth() == 1.6180339887498949);
    CHECK(g.irrational());
    CHECK(g.a_sq() == doctest::Approx(std::sqrt(1.6180339887498949)).epsilon(1e-15));
    CHECK(g.min_aspect() == doctest::Approx(1.0 / g.a()));
    CHECK(TorusGeometry::sqrt2().a_fourth() == 1.4142135623730951);
    const auto unit = TorusGeometry::from_a(1.0);
    CHECK_FALSE(unit.irrational());
    CHECK(unit.min_aspect() == 1.0);
    CHECK_THROWS_AS(TorusGeometry::from_a(0.0), InvalidArgument);
    CHECK_THROWS_AS(TorusGeometry::from_a_fourth(-2.0), InvalidArgument);
  }

  TEST_CASE("norm and inner product examples") {
    const auto unit = TorusGeometry::from_a(1.0);
    const auto four = TorusGeometry::from_a_fourth(4.0);
    const auto two = TorusGeometry::from_a_fourth(2.0);
    CHECK(norm_sq(unit, {3, 4}) == 25.0);
    CHECK(norm_sq(four, {1, 1}) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(norm_sq(TorusGeometry::golden(), {0, 0}) == 0.0);
    CHECK(inner(unit, {1, 0}, {0, 5}) == 0.0);
    CHECK(inner(unit, {2, 1}, {1, 3}) == 5.0);
    CHECK(inner(two, {1, 1}, {1, -1}) == doctest::Approx(std::sqrt(2.0) - 1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(inner(two, {1, 1}, {1, -1}) == doctest::Approx(0.7071068).epsilon(1e-7));
  }

  TEST_CASE("norm equals self inner product bit for bit") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> d(-1000, 1000);
    for (const auto& g : {TorusGeometry::golden(), TorusGeometry::sqrt2(), TorusGeometry::from_a(1.7)}) {
      for (int i = 0; i < 1000; ++i) {
        const LatticeVector v{d(rng), d(rng)};
        const LatticeVector w{d(rng), d(rng)};
        CHECK(norm_sq(g, v) == inner(g, v, v));
        CHECK(norm_sq(g, v) == norm_sq(g, -v));
        CHECK(inner(g, v, w) == inner(g, w, v));
        if (!v.is_zero()) CHECK(norm_sq(g, v) > 0.0);
      }
    }
  }

  TEST_CASE("window enumeration examples") {
    const auto unit = TorusGeometry::from_a(1.0);
    const auto pts = enumerate_window(unit, 24.5, 25.5);
    CHECK(pts.size() == 12);
    CHECK(as_points(pts) == oracle::scan_window(1.0, 24.5, 25.5, 6));
    CHECK(enumerate_window(unit, 2.5, 3.5).empty());
    const auto two = TorusGeometry::from_a_fourth(2.0);
    const auto quad = enumerate_window(two, 1.7, 2.3);
    REQUIRE(quad.size() == 4);
    for (const auto& v : quad) {
      CHECK(std::abs(v.m) == 1);
      CHECK(std::abs(v.n) == 1);
      CHECK(norm_sq(two, v) == doctest::Approx(2.1213203).epsilon(1e-7));
    }
  }

  TEST_CASE("window enumeration rejects bad windows and caps") {
    const auto g = TorusGeometry::golden();
    CHECK_THROWS_AS(enumerate_window(g, 5.0, 4.0), InvalidArgument);
    CHECK_THROWS_AS(enumerate_window(g, 0.0, std::numeric_limits<double>::infinity()), InvalidArgument);
    CHECK_THROWS_AS(enumerate_window(g, 0.0, 1e6, EnumerationLimits{1000.0}), CapExceeded);
  }

  TEST_CASE("window enumeration matches a square scan") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lo_d(0.0, 400.0), w_d(0.0, 30.0);
    for (const auto& g : {TorusGeometry::golden(), TorusGeometry::sqrt2(), TorusGeometry::from_a(0.6)}) {
      for (int i = 0; i < 40; ++i) {
        const double lo = lo_d(rng);
        const double hi = lo + w_d(rng);
        const auto r = static_cast<std::int64_t>(std::ceil(std::sqrt(hi) * std::max(g.a(), 1.0 / g.a()))) + 1;
        CHECK(as_points(enumerate_window(g, lo, hi)) == oracle::scan_window(g.a_sq(), lo, hi, r));
      }
    }
  }

  TEST_CASE("canonical order and reflection closure") {
    const auto g = TorusGeometry::golden();
    const auto pts = enumerate_window(g, 300.0, 340.0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double q0 = norm_sq(g, pts[i - 1]);
      const double q1 = norm_sq(g, pts[i]);
      const bool ordered = q0 < q1 || (q0 == q1 && (pts[i - 1].m < pts[i].m ||
                                                    (pts[i - 1].m == pts[i].m && pts[i - 1].n < pts[i].n)));
      CHECK(ordered);
    }
    const auto set = as_points(pts);
    for (const auto& p : set) {
      for (const oracle::Point& q : {oracle::Point{-p.m, -p.n}, oracle::Point{p.m, -p.n}, oracle::Point{-p.m, p.n}}) {
        CHECK(std::binary_search(set.begin(), set.end(), q));
      }
    }
  }

  TEST_CASE("norm classes of the integer lattice") {
    const auto unit = TorusGeometry::from_a(1.0);
    const auto cls = norm_classes(unit, 5.0);
    REQUIRE(cls.size() == 5);
    const double values[] = {0, 1, 2, 4, 5};
    const int mult[] = {1, 4, 4, 4, 8};
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(cls[i].value == values[i]);
      CHECK(cls[i].multiplicity == mult[i]);
    }
    // multiplicities against the representation count, up to 200
    const auto big = norm_classes(unit, 200.0);
    std::size_t idx = 0;
    for (std::int64_t k = 0; k <= 200; ++k) {
      const int r = oracle::sum_of_two_squares(k);
      if (r == 0) continue;
      REQUIRE(idx < big.size());
      CHECK(big[idx].value == static_cast<double>(k));
      CHECK(big[idx].multiplicity == r);
      ++idx;
    }
    CHECK(idx == big.size());
  }

  TEST_CASE("norm classes for a^4 = 2 and at X = 0") {
    const auto two = TorusGeometry::from_a_fourth(2.0);
    const auto cls = norm_classes(two, 1.5);
    REQUIRE(cls.size() == 3);
    CHECK(cls[0].value == 0.0);
    CHECK(cls[0].multiplicity == 1);
    CHECK(cls[1].value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(cls[1].multiplicity == 2);
    CHECK(cls[2].value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(cls[2].multiplicity == 2);
    for (const auto& g : {two, TorusGeometry::golden()}) {
      const auto zero = norm_classes(g, 0.0);
      REQUIRE(zero.size() == 1);
      CHECK(zero[0].value == 0.0);
      CHECK(zero[0].multiplicity == 1);
    }
  }

  TEST_CASE("irrational classes have sign-flip multiplicities and total count") {
    const auto g = TorusGeometry::golden();
    const auto cls = norm_classes(g, 5000.0);
    std::size_t total = 0;
    for (std::size_t i = 0; i < cls.size(); ++i) {
      const auto& c = cls[i];
      const int expected = (c.key_m == 0 && c.key_n == 0) ? 1 : (c.key_m == 0 || c.key_n == 0) ? 2 : 4;
      CHECK(c.multiplicity == expected);
      if (i) CHECK(cls[i - 1].value < c.value);
      total += static_cast<std::size_t>(c.multiplicity);
    }
    CHECK(total == enumerate_window(g, 0.0, 5000.0).size());
  }

  TEST_CASE("colliding keys under an irrational flag are reported") {
    // a = 1 flagged irrational: (5,0) and (3,4) share the norm 25
    const auto bogus = TorusGeometry::from_a(1.0, true);
    CHECK_THROWS_AS(norm_classes(bogus, 30.0), NormCollision);
  }

  TEST_CASE("unit window counts") {
    const auto unit = TorusGeometry::from_a(1.0);
    CHECK(count_in_unit_window(unit, 25) == 12);
    CHECK(count_in_unit_window(unit, 3) == 0);
    // (0, +-1) has norm 1/a^2 < 1 on the golden torus
    CHECK(count_in_unit_window(TorusGeometry::golden(), 0) == 3);
    const auto golden = TorusGeometry::golden();
    CHECK(oracle::scan_window(golden.a_sq(), 0.0, std::nextafter(1.0, 0.0), 2).size() == 3);
    CHECK_THROWS_AS(count_in_unit_window(unit, -1), InvalidArgument);
    const auto g = TorusGeometry::golden();
    for (std::int64_t k = 0; k <= 300; ++k) {
      const double hi = std::nextafter(static_cast<double>(k + 1), 0.0);
      CHECK(count_in_unit_window(g, k) == static_cast<std::int64_t>(enumerate_window(g, k, hi).size()));
    }
  }

  TEST_CASE("Weyl count at X = 1e4") {
    const double x = 1e4;
    const double ratio = static_cast<double>(count_in_disk(TorusGeometry::golden(), x)) / (std::numbers::pi * x);
    CHECK(ratio >= 0.99);
    CHECK(ratio <= 1.01);
  }
}
