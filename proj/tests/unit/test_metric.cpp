#include <doctest.h>

#include <cmath>
#include <functional>
#include <stdexcept>

#include "bglab/metric.hpp"

using namespace bglab;

namespace {

// Shortest chain by exhaustive search over simple paths.
double brute_chain(const DistanceMatrix& d, std::size_t a, std::size_t b) {
  const std::size_t m = d.size();
  double best = d(a, b);
  std::vector<char> used(m, 0);
  std::function<void(std::size_t, double)> walk = [&](std::size_t at, double len) {
    if (len >= best) return;
    if (at == b) {
      best = len;
      return;
    }
    used[at] = 1;
    for (std::size_t x = 0; x < m; ++x)
      if (!used[x] && d(at, x) != kInfinity) walk(x, len + d(at, x));
    used[at] = 0;
  };
  walk(a, 0.0);
  return best;
}

SnakePath small_snake() {
  SnakePath s;
  s.lifetime = {0, 1, 2, 1, 2, 1, 0};
  s.tip = {0, 1, 0.5, 1, 2, 0.7, 0};
  return s;
}

}  // namespace

TEST_CASE("scaling constant") {
  CHECK(scaling_constant(4) == doctest::Approx(std::pow(9.0 / 8.0, 0.25)));
  CHECK(scaling_constant(6) == doctest::Approx(std::pow(9.0 / 24.0, 0.25)));
  CHECK_THROWS_AS(scaling_constant(3), std::invalid_argument);
  CHECK_THROWS_AS(scaling_constant(2), std::invalid_argument);
}

TEST_CASE("closure of three points") {
  DistanceMatrix d0(3);
  d0(0, 1) = d0(1, 0) = 5.0;
  d0(0, 2) = d0(2, 0) = 1.0;
  d0(1, 2) = d0(2, 1) = 1.0;
  const auto d = metric_closure(d0);
  CHECK(d(0, 1) == 2.0);
  CHECK(d(0, 2) == 1.0);

  DistanceMatrix bad = d0;
  bad(0, 1) = 4.0;
  CHECK_THROWS_AS(metric_closure(bad), std::invalid_argument);
  bad = d0;
  bad(1, 1) = 1.0;
  CHECK_THROWS_AS(metric_closure(bad), std::invalid_argument);
}

TEST_CASE("closure agrees with exhaustive chain search") {
  Rng rng = make_rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int rep = 0; rep < 30; ++rep) {
    DistanceMatrix d0(6);
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t b = a + 1; b < 6; ++b) d0(a, b) = d0(b, a) = (u(rng) < 2.0) ? kInfinity : u(rng);
    const auto d = metric_closure(d0);
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t b = 0; b < 6; ++b)
        CHECK(d(a, b) == doctest::Approx(a == b ? 0.0 : brute_chain(d0, a, b)));
  }
}

TEST_CASE("pre-distances on a small snake") {
  const auto s = small_snake();
  // min over [1, 4] is 0.5, over [4, 1] (cyclic) is 0.
  CHECK(dcirc(s, 1, 4) == doctest::Approx(1 + 2 - 2 * 0.5));
  CHECK(dcirc(s, 4, 1) == dcirc(s, 1, 4));
  CHECK(dcirc(s, 3, 3) == 0.0);
  CHECK(delta_circ(s, 1, 3) == doctest::Approx(1 + 1 - 2 * 0.5));
  CHECK(delta_circ(s, 2, 5) == doctest::Approx(0.5 + 0.7 - 2 * 0.5));
  CHECK_THROWS_AS(delta_circ(s, 0, 3), std::invalid_argument);

  SnakePath cut = s;
  cut.tip = {0, 1, 0, 1, 2, 0.7, 0};
  CHECK(delta_circ(cut, 1, 4) == kInfinity);
  CHECK(argmin_label(s) == 0);
}

TEST_CASE("quantized labels") {
  CHECK(quantize_label(0.5) == 0.5);
  CHECK(quantize_label(1.0 / 3.0) * 4294967296.0 == std::nearbyint(4294967296.0 / 3.0));
}

TEST_CASE("Brownian map clouds") {
  Rng rng = make_rng(5);
  for (int rep = 0; rep < 5; ++rep) {
    const auto s = sample_snake(sample_excursion(5000, rng), rng);
    const auto c = sample_map_cloud(s, 150, rng);
    CHECK(c.points.size() == 150);
    CHECK(c.points[c.basepoint] == argmin_label(s));
    CHECK(validate_cloud(c, 1e-12).empty());
    const double z_star = c.labels[c.basepoint];
    for (std::size_t a = 0; a < c.points.size(); ++a) CHECK(c.d(c.basepoint, a) == c.labels[a] - z_star);
    const double collapsed = collapsed_pair_fraction(c, 0.05);
    CHECK(collapsed >= 0.0);
    CHECK(collapsed <= 1.0);
  }
  const auto s = sample_snake(sample_excursion(100, rng), rng);
  CHECK_THROWS_AS(sample_map_cloud(s, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(build_cloud(s, {1, 2}, CloudKind::brownian_map), std::invalid_argument);
}

TEST_CASE("ball volumes") {
  Rng rng = make_rng(7);
  const auto s = sample_snake(sample_excursion(2000, rng), rng);
  const auto c = sample_map_cloud(s, 100, rng);
  const std::vector<double> radii = {0.0, 1e9};
  const auto v = ball_volume_profile(c, c.basepoint, radii);
  std::size_t zero = 0;
  for (std::size_t a = 0; a < c.points.size(); ++a) zero += c.d(c.basepoint, a) == 0.0;
  CHECK(v[0] == doctest::Approx(static_cast<double>(zero) / 100.0));
  CHECK(v[1] == 1.0);

  std::vector<double> r, vol;
  for (int i = 1; i <= 20; ++i) {
    r.push_back(0.1 * i);
    vol.push_back(0.3 * std::pow(0.1 * i, 4));
  }
  CHECK(volume_growth_fit(r, vol, 0.2, 1.5).slope == doctest::Approx(4.0));
}

TEST_CASE("disk clouds") {
  Rng rng = make_rng(9);
  const auto s = sample_snake(sample_excursion(20000, rng), rng);
  auto parts = extract_excursions_above(s, 0.0);
  const auto& e = *std::max_element(parts.begin(), parts.end(),
                                    [](const auto& a, const auto& b) { return a.grid_size() < b.grid_size(); });
  const auto c = sample_disk_cloud(e, 200, rng, 20);
  CHECK(c.kind == CloudKind::brownian_disk);
  CHECK(c.boundary.size() == 20);
  CHECK(validate_cloud(c, 1e-12).empty());
  for (std::size_t a = 0; a < c.points.size(); ++a) CHECK(c.labels[a] > 0.0);
  // Distances dominate label differences, so the boundary error is the excess over Z_x.
  const double err = boundary_distance_error(c);
  CHECK(err >= 0.0);
  CHECK(err < 0.5);
  CHECK_THROWS_AS(sample_disk_cloud(s, 10, rng), std::invalid_argument);
}

TEST_CASE("two-point draws") {
  CHECK(discrete_two_point_draw(200, 4) == discrete_two_point_draw(200, 4));
  CHECK(continuum_two_point_draw(500, 4) >= 0.0);
  const std::vector<double> a = {1, 2, 3}, b = {1, 2, 3};
  CHECK(two_point_compare(a, b) == 0.0);
  CHECK_THROWS_AS(two_point_compare({}, b), std::invalid_argument);
}
