#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "seba/greens.hpp"

using namespace seba;

namespace {

std::vector<oracle::Point> points_of(const CoefficientMap& map) {
  std::vector<oracle::Point> out;
  for (const auto& v : map.vectors) out.push_back({v.m, v.n});
  return out;
}

std::vector<double> coeffs_of(const CoefficientMap& map) {
  return {map.coefficients.data(), map.coefficients.data() + map.size()};
}

bool seven_smooth(Eigen::Index n) {
  for (int p : {2, 3, 5, 7}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

// Random symmetric map with up to `pairs` +/- pairs inside a box.
CoefficientMap random_map(std::mt19937_64& rng, int pairs, int box) {
  std::uniform_int_distribution<int> coord(-box, box);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::vector<LatticeVector> vs;
  std::vector<double> cs;
  for (int i = 0; i < pairs; ++i) {
    const LatticeVector v{coord(rng), coord(rng)};
    if (v.is_zero() || std::find(vs.begin(), vs.end(), v) != vs.end()) continue;
    const double c = val(rng);
    vs.push_back(v);
    cs.push_back(c);
    vs.push_back(-v);
    cs.push_back(c);
  }
  return make_custom_map(TorusGeometry::golden(), 0.0, vs, cs);
}

}  // namespace

TEST_SUITE("greens") {
  TEST_CASE("annulus at a = 1, lambda = 24.5") {
    const auto map = coefficients_annulus(TorusGeometry::from_a(1.0), 24.5, 1.0);
    CHECK(map.truncation == Truncation::annulus);
    REQUIRE(map.size() == 12);
    for (Eigen::Index i = 0; i < map.size(); ++i) CHECK(map.coefficients[i] == 2.0);
    CHECK(l2_norm_sq(map) == 48.0);
    auto pts = points_of(map);
    std::sort(pts.begin(), pts.end());
    CHECK(pts == oracle::scan_window(1.0, 23.5, 25.5, 6));
    CHECK(is_centrally_symmetric(map));
  }

  TEST_CASE("two-point and empty annuli") {
    const auto g = TorusGeometry::golden();
    const double d = 0.005;
    const double lambda = g.a_sq() - d;  // norm of (1, 0) is a^2
    const auto map = coefficients_annulus(g, lambda, 0.01);
    REQUIRE(map.size() == 2);
    CHECK(map.vectors[0] == -map.vectors[1]);
    CHECK(std::abs(map.vectors[0].m) == 1);
    CHECK(map.coefficients[0] == doctest::Approx(1.0 / d).epsilon(1e-9));
    CHECK(l2_norm_sq(map) == doctest::Approx(2.0 / (d * d)).epsilon(1e-9));
    const auto empty = coefficients_annulus(TorusGeometry::from_a(1.0), 3.0, 0.5);
    CHECK(empty.empty());
    CHECK(l2_norm_sq(empty) == 0.0);
    CHECK_THROWS_AS(coefficients_annulus(g, 10.0, 0.0), InvalidArgument);
  }

  TEST_CASE("lambda on a norm is singular") {
    const auto unit = TorusGeometry::from_a(1.0);
    CHECK_THROWS_AS(coefficients_annulus(unit, 25.0, 1.0), SingularEigenvalue);
    CHECK_THROWS_AS(coefficients_disk(unit, 1.0), SingularEigenvalue);
  }

  TEST_CASE("disk of radius 10 holds 317 points") {
    const auto unit = TorusGeometry::from_a(1.0);
    const auto map = coefficients_disk(unit, 1.5, 10.0);
    CHECK(map.size() == 317);
    CHECK(map.truncation == Truncation::disk);
    // default radius is 10 sqrt(lambda)
    CHECK(coefficients_disk(unit, 1.01).size() == coefficients_disk(unit, 1.01, 10.0 * std::sqrt(1.01)).size());
  }

  TEST_CASE("shell is the disk difference") {
    const auto g = TorusGeometry::golden();
    const auto inner = coefficients_disk(g, 7.3, 20.0);
    const auto outer = coefficients_disk(g, 7.3, 40.0);
    const auto shell = coefficients_shell(g, 7.3, 20.0, 40.0);
    CHECK(shell.size() + inner.size() == outer.size());
    CHECK(l2_norm_sq(shell) + l2_norm_sq(inner) == doctest::Approx(l2_norm_sq(outer)).epsilon(1e-13));
    CHECK(coefficients_shell(TorusGeometry::from_a(1.0), 0.5, std::sqrt(3.0), std::sqrt(3.5)).empty());
  }

  TEST_CASE("custom maps validate symmetry and duplicates") {
    const auto g = TorusGeometry::golden();
    const std::vector<double> c2{1.0, 1.0};
    CHECK_NOTHROW(make_custom_map(g, 0.0, {{1, 2}, {-1, -2}}, c2));
    CHECK_THROWS_AS(make_custom_map(g, 0.0, {{1, 2}, {1, 2}}, c2), InvalidArgument);
    CHECK_THROWS_AS(make_custom_map(g, 0.0, {{1, 2}, {-1, 2}}, c2), InvalidArgument);
    const std::vector<double> uneven{1.0, 2.0};
    CHECK_THROWS_AS(make_custom_map(g, 0.0, {{1, 2}, {-1, -2}}, uneven), InvalidArgument);
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(make_custom_map(g, 0.0, {{1, 2}, {-1, -2}}, one), InvalidArgument);
  }

  TEST_CASE("aliasing-free shapes") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      const auto map = random_map(rng, 30, 40);
      const auto [mm, nn] = map.max_index();
      for (int p : {2, 4}) {
        const auto s = aliasing_free_shape(map, p);
        CHECK(s.rows > p * mm);
        CHECK(s.cols > p * nn);
        CHECK(seven_smooth(s.rows));
        CHECK(seven_smooth(s.cols));
      }
    }
    const GridShape automatic{12, 20};
    const auto bigger = override_shape(automatic, GridShape{16, 10});
    CHECK(bigger.rows == 16);
    CHECK(bigger.cols == 20);
  }

  TEST_CASE("grid values match direct summation") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      const auto map = random_map(rng, 25, 9);
      const GridShape shape{24, 30};
      const auto field = evaluate_grid(map, shape);
      const auto pts = points_of(map);
      const auto cs = coeffs_of(map);
      double scale = 0.0;
      for (double c : cs) scale += std::abs(c);
      for (Eigen::Index j1 = 0; j1 < shape.rows; j1 += 5) {
        for (Eigen::Index j2 = 0; j2 < shape.cols; j2 += 7) {
          const double t1 = 2.0 * std::numbers::pi * static_cast<double>(j1) / static_cast<double>(shape.rows);
          const double t2 = 2.0 * std::numbers::pi * static_cast<double>(j2) / static_cast<double>(shape.cols);
          CHECK(std::abs(field(j1, j2) - oracle::direct_eval(pts, cs, t1, t2)) <= 1e-12 * scale);
        }
      }
      // origin sample is the coefficient sum
      double sum = 0.0;
      for (double c : cs) sum += c;
      CHECK(field(0, 0) == doctest::Approx(sum).epsilon(1e-12));
    }
  }

  TEST_CASE("folding onto a coarse grid matches direct summation") {
    std::mt19937_64 rng(9);
    const auto map = random_map(rng, 20, 15);
    const auto field = evaluate_grid(map, 8);
    const auto pts = points_of(map);
    const auto cs = coeffs_of(map);
    for (Eigen::Index j1 = 0; j1 < 8; ++j1) {
      for (Eigen::Index j2 = 0; j2 < 8; ++j2) {
        const double t1 = 2.0 * std::numbers::pi * static_cast<double>(j1) / 8.0;
        const double t2 = 2.0 * std::numbers::pi * static_cast<double>(j2) / 8.0;
        CHECK(field(j1, j2) == doctest::Approx(oracle::direct_eval(pts, cs, t1, t2)).epsilon(1e-11).scale(10.0));
      }
    }
  }

  TEST_CASE("Parseval, mean and fourth moment on the aliasing-free grid") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
      const auto map = random_map(rng, 15, 12);
      const auto mom = grid_moments(map);
      CHECK(mom.mean == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
      CHECK(mom.mean_sq == doctest::Approx(l2_norm_sq(map)).epsilon(1e-12));
      CHECK(mom.mean_fourth == doctest::Approx(oracle::quadruple_sum(points_of(map), coeffs_of(map))).epsilon(1e-11));
    }
  }

  TEST_CASE("constant map") {
    const auto map = make_custom_map(TorusGeometry::golden(), 0.0, {{0, 0}}, std::vector<double>{1.0});
    const auto mom = grid_moments(map);
    CHECK(mom.mean == doctest::Approx(1.0));
    CHECK(mom.mean_fourth == doctest::Approx(1.0));
  }

  TEST_CASE("moments are translation invariant") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> shift(0.0, 2.0 * std::numbers::pi);
    for (int trial = 0; trial < 10; ++trial) {
      const auto map = random_map(rng, 15, 10);
      const auto base = grid_moments(map);
      const auto moved = grid_moments(map, nullptr, {shift(rng), shift(rng)});
      CHECK(moved.mean_sq == doctest::Approx(base.mean_sq).epsilon(1e-12));
      CHECK(moved.mean_fourth == doctest::Approx(base.mean_fourth).epsilon(1e-11));
    }
  }

  TEST_CASE("fourth moment scales as s^4") {
    std::mt19937_64 rng(29);
    const auto map = random_map(rng, 12, 8);
    auto scaled = map;
    scaled.coefficients *= 3.0;
    CHECK(grid_moments(scaled).mean_fourth == doctest::Approx(81.0 * grid_moments(map).mean_fourth).epsilon(1e-12));
  }

  TEST_CASE("grid caps and field csv") {
    std::mt19937_64 rng(31);
    const auto map = random_map(rng, 4, 3);
    MapLimits tiny;
    tiny.max_grid_points = 10.0;
    CHECK_THROWS_AS(evaluate_grid(map, GridShape{8, 8}, {0.0, 0.0}, tiny), CapExceeded);
    std::ostringstream out;
    write_field_csv(out, evaluate_grid(map, GridShape{2, 3}));
    const auto text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    CHECK(std::count(text.begin(), text.end(), ',') == 4);
  }

  TEST_CASE("l2 tail ignores empty shells") {
    // nothing of norm in (2, 4) on the integer lattice
    const auto unit = TorusGeometry::from_a(1.0);
    const double widths[] = {0.5, 0.9};
    const auto tails = l2_tail_profile(unit, 3.0, widths);
    CHECK(tails[0].total() == tails[1].total());
    CHECK(l2_tail(unit, 3.0, 0.5).total() == tails[0].total());
  }

  TEST_CASE("l2 tail from classes") {
    const std::vector<NormClass> cls{{0, 0, 8.0, 4}, {0, 0, 10.5, 2}, {0, 0, 13.0, 8}};
    const auto t = l2_tail_from_classes(cls, 10.0, 1.0, 20.0);
    CHECK(t.window == doctest::Approx(4.0 / 4.0 + 8.0 / 9.0));
    CHECK(t.remainder == doctest::Approx(std::numbers::pi / 10.0));
  }

  TEST_CASE("single shell at lambda + L") {
    const std::vector<NormClass> cls{{0, 0, 12.0, 4}};
    const auto t = tail_exponent_43_from_classes(cls, 10.0, 2.0, 20.0);
    CHECK(t.upper.window == doctest::Approx(4.0 * std::pow(2.0, -4.0 / 3.0)));
    CHECK(t.lower == 0.0);
    CHECK(t.upper.remainder == doctest::Approx(3.0 * std::numbers::pi * std::pow(10.0, -1.0 / 3.0)));
  }

  TEST_CASE("l2 tail decays with the half width") {
    const auto g = TorusGeometry::golden();
    const double widths[] = {2.0, 4.0, 8.0, 16.0};
    const auto tails = l2_tail_profile(g, 1000.37, widths);
    for (std::size_t k = 1; k < tails.size(); ++k) CHECK(tails[k].total() < tails[k - 1].total());
    const auto t43 = tail_exponent_43(g, 1000.37, 4.0);
    CHECK(t43.total() > 0.0);
    CHECK(tail_exponent_43(g, 1000.37, 8.0).total() < t43.total());
  }

  TEST_CASE("dyadic shells obey Parseval and shrink") {
    const auto rate = cauchy_l4_rate(TorusGeometry::golden(), 3.3, 3);
    REQUIRE(rate.terms.size() == 3);
    for (double e : rate.parseval_error) CHECK(e <= 1e-10);
    CHECK(rate.terms[2].second < rate.terms[0].second);
    CHECK(rate.fitted_slope < 0.0);
    CHECK_THROWS_AS(cauchy_l4_rate(TorusGeometry::golden(), 3.3, 1), InvalidArgument);
  }
}
