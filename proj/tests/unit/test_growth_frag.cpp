#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "bglab/growth_frag.hpp"
#include "bglab/stats.hpp"

using namespace bglab;

namespace {

// x^q - 1 + q (1 - x) with u = 1 - x; a binomial series for small u
// avoids the cancellation.
double head(double q, double u) {
  if (u > 0.1) return std::pow(1.0 - u, q) - 1.0 + q * u;
  double sum = 0.0, term = 1.0;
  for (int j = 1; j < 60; ++j) {
    term *= (q - (j - 1)) / j * -u;  // binom(q, j) (-u)^j
    if (j >= 2) sum += term;
  }
  return sum;
}

// psi from the untransformed integrand over x in [1/2, 1]; xc is the
// distance to the nearer endpoint, which keeps 1 - x accurate near x = 1.
double psi_oracle(double q) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  const auto f = [q](double x, double xc) {
    const double u = x > 0.75 ? xc : 1.0 - x;
    // The integrand is O(u^(-1/2)); dropping u < 1e-30 costs 1e-15.
    if (u < 1e-30) return 0.0;
    return head(q, u) * std::pow(x * u, -2.5);
  };
  const double integral = integrator.integrate(f, 0.5, 1.0, 1e-14);
  return std::sqrt(3.0 / (2.0 * std::numbers::pi)) * (-8.0 / 3.0 * q + integral);
}

}  // namespace

TEST_CASE("psi against an independent quadrature") {
  CHECK(gf::psi(0.0) == 0.0);
  CHECK(gf::psi_prefactor() == doctest::Approx(std::sqrt(3.0 / (2.0 * std::numbers::pi))));
  for (double q : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.5}) {
    const double want = psi_oracle(q);
    CHECK(gf::psi(q) == doctest::Approx(want).epsilon(1e-9));
    CHECK(gf::psi_fixed_order(q) == doctest::Approx(want).epsilon(1e-9));
  }
  CHECK_THROWS_AS(gf::psi(-0.5), std::invalid_argument);
}

TEST_CASE("psi is convex with the right slope at zero") {
  std::vector<double> v;
  for (int i = 0; i <= 24; ++i) v.push_back(gf::psi(0.25 * i));
  for (std::size_t i = 1; i + 1 < v.size(); ++i) CHECK(v[i - 1] + v[i + 1] - 2.0 * v[i] > 0.0);

  const double h = 1e-4;
  const double fd = (-3.0 * gf::psi(0.0) + 4.0 * gf::psi(h) - gf::psi(2.0 * h)) / (2.0 * h);
  CHECK(gf::psi_derivative_at_zero() == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("truncation") {
  const auto a = gf::truncation(0.01), b = gf::truncation(0.001);
  CHECK(a.variance > b.variance);
  CHECK(b.rate_main > a.rate_main);
  CHECK(a.rate_main > 0.0);
  CHECK_THROWS_AS(gf::truncation(0.5), std::invalid_argument);
  CHECK_THROWS_AS(gf::truncation(0.0), std::invalid_argument);
}

TEST_CASE("Levy exponential moments") {
  constexpr int kPaths = 20000;
  constexpr double kT = 0.5;
  Rng rng = make_rng(51);
  std::vector<double> end(kPaths);
  for (auto& x : end) x = gf::sample_levy(kT, 0.02, 0.05, rng).xi.back();
  for (double q : {0.5, 1.0, 2.0}) {
    std::vector<double> e(kPaths);
    std::transform(end.begin(), end.end(), e.begin(), [q](double x) { return std::exp(q * x); });
    const auto mv = stats::mean_var(e);
    CHECK(std::abs(mv.mean - std::exp(kT * gf::psi(q))) < 4.0 * mv.std_error());
  }
}

TEST_CASE("Levy path layout") {
  const auto p = gf::sample_levy(1.0, 0.05, 0.1, Seed{2});
  CHECK(p.xi.size() == 11);
  CHECK(p.xi.front() == 0.0);
  for (const auto& j : p.jumps) {
    CHECK(j.size < 0.0);
    CHECK(j.size > -std::log(2.0));
    CHECK(j.time <= 1.0 + 1e-12);
  }
  CHECK_THROWS_AS(gf::sample_levy(0.0, 0.05, 0.1, Seed{2}), std::invalid_argument);
  CHECK_THROWS_AS(gf::sample_levy(1.0, 0.6, 0.1, Seed{2}), std::invalid_argument);
}

TEST_CASE("Lamperti transform of a linear path") {
  gf::LevyPath p;
  p.dt = 0.1;
  for (int i = 0; i <= 10; ++i) p.xi.push_back(-0.1 * i);
  const auto m = gf::lamperti(p, 4.0);
  double h = 0.0;
  for (int i = 0; i <= 10; ++i) {
    if (i > 0) h += 0.05 * (std::exp(-0.05 * (i - 1)) + std::exp(-0.05 * i));
    CHECK(m.height[i] == doctest::Approx(2.0 * h));
    CHECK(m.mass[i] == doctest::Approx(4.0 * std::exp(-0.1 * i)));
  }
  CHECK(m.absorption_height == m.height.back());
  CHECK(m.at(0.0) == 4.0);
  CHECK(m.at(0.5 * (m.height[3] + m.height[4])) == m.mass[3]);
  CHECK(m.at(m.absorption_height + 1.0) == 0.0);
  CHECK_THROWS_AS(gf::lamperti(p, 0.0), std::invalid_argument);
}

TEST_CASE("cascade genealogy") {
  for (Seed seed : {Seed{1}, Seed{2}, Seed{3}}) {
    const auto c = gf::simulate_cascade(1.0, 0.01, seed);
    REQUIRE(!c.particles.empty());
    const auto& eve = c.particles[0];
    CHECK(eve.parent == -1);
    CHECK(eve.initial_mass == 1.0);
    CHECK(eve.birth_height == 0.0);
    double h_star = 0.0;
    for (std::size_t i = 0; i < c.particles.size(); ++i) {
      const auto& p = c.particles[i];
      h_star = std::max(h_star, p.absorption_height);
      CHECK(p.absorption_height >= p.birth_height);
      if (i > 0) {
        CHECK(p.initial_mass >= 0.01);
        REQUIRE(p.parent >= 0);
        const auto& parent = c.particles[static_cast<std::size_t>(p.parent)];
        CHECK(std::count(parent.children.begin(), parent.children.end(), i) == 1);
        CHECK(p.birth_height >= parent.birth_height);
        CHECK(p.birth_height <= parent.absorption_height);
      }
      for (auto child : p.children) CHECK(c.particles.at(child).parent == static_cast<std::int64_t>(i));
    }
    CHECK(c.h_star == h_star);

    const auto summary = gf::extinction_height(1.0, 0.01, seed);
    CHECK(summary.h_star == c.h_star);
    CHECK(summary.particles == c.particles.size());
  }
  CHECK_THROWS_AS(gf::simulate_cascade(0.0, 0.1, Seed{1}), std::invalid_argument);
  CHECK_THROWS_AS(gf::simulate_cascade(1.0, 0.0, Seed{1}), std::invalid_argument);
  gf::CascadeOptions bad;
  bad.stop_ratio = 2.0;
  CHECK_THROWS_AS(gf::simulate_cascade(1.0, 0.1, Seed{1}, bad), std::invalid_argument);
}

TEST_CASE("mass is conserved at birth events") {
  const auto c = gf::simulate_cascade(1.0, 0.005, Seed{7});
  for (const auto& p : c.particles) {
    for (auto child : p.children) {
      const auto& kid = c.particles[child];
      // The parent path holds (h, before) then (h, after) at the birth height.
      bool found = false;
      for (std::size_t j = 0; j + 1 < p.path.size(); ++j) {
        const auto [h0, before] = p.path[j];
        const auto [h1, after] = p.path[j + 1];
        if (h0 == kid.birth_height && h1 == h0 &&
            std::abs(before - after - kid.initial_mass) <= 1e-12 * before) {
          found = true;
          break;
        }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("ranked masses") {
  const auto c = gf::simulate_cascade(1.0, 0.01, Seed{11});
  CHECK(c.ranked_masses(0.0) == std::vector<double>{1.0});
  const auto r = c.ranked_masses(0.5 * c.h_star);
  CHECK(std::is_sorted(r.begin(), r.end(), std::greater<>()));
  for (double x : r) CHECK(x > 0.0);
  CHECK(c.ranked_masses(c.h_star + 1.0).empty());

  gf::CascadeOptions bare;
  bare.record_paths = false;
  const auto d = gf::simulate_cascade(1.0, 0.01, Seed{11}, bare);
  CHECK(d.h_star == c.h_star);
  CHECK_THROWS(d.ranked_masses(0.0));
}

TEST_CASE("tail fit recovers a Pareto exponent") {
  Rng rng = make_rng(61);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> h(100000);
  for (auto& x : h) x = std::pow(1.0 - u(rng), -1.0 / 6.0);  // P(H > r) = r^-6
  const auto [lo, hi] = gf::survival_window(h, 0.05, 0.001);
  CHECK(lo == doctest::Approx(std::pow(0.05, -1.0 / 6.0)).epsilon(0.02));
  CHECK(hi == doctest::Approx(std::pow(0.001, -1.0 / 6.0)).epsilon(0.05));
  const auto fit = gf::extinction_tail(h, lo, hi);
  CHECK(fit.slope == doctest::Approx(-6.0).epsilon(0.05));
  CHECK(fit.band_lo <= fit.slope);
  CHECK(fit.band_hi >= fit.slope);
  CHECK(fit.band_lo < -5.5);
  CHECK(fit.band_hi > -6.5);

  const std::vector<double> few(h.begin(), h.begin() + gf::kMinTailSamples - 1);
  CHECK_THROWS_AS(gf::extinction_tail(few, lo, hi), std::invalid_argument);
  CHECK_THROWS_AS(gf::extinction_tail(h, hi, lo), std::invalid_argument);
}

TEST_CASE("densities") {
  // f / g = sqrt(3 / (2 pi)) z^(-5/2)
  for (double z : {0.5, 1.0, 3.0})
    for (double s : {0.1, 1.0, 7.0})
      CHECK(gf::density_f(z, s) / gf::density_g(z, s) ==
            doctest::Approx(std::sqrt(3.0 / (2.0 * std::numbers::pi)) * std::pow(z, -2.5)));

  boost::math::quadrature::exp_sinh<double> integrator;
  for (double z : {0.5, 1.0, 2.0}) {
    // Below s = z^2 / 2000 the density is under exp(-1000).
    const auto g = [z](double s) { return s < z * z / 2000.0 || !std::isfinite(s) ? 0.0 : gf::density_g(z, s); };
    const double mass = integrator.integrate(g);
    const double mean = integrator.integrate([&](double s) { return s * g(s); });
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mean == doctest::Approx(z * z).epsilon(1e-9));
  }
  // d/ds log g_z = -5 / (2 s) + z^2 / (2 s^2) vanishes at s = z^2 / 5.
  for (double z : {0.5, 1.0, 2.0}) {
    const double mode = z * z / 5.0;
    CHECK(gf::density_g(z, mode) > gf::density_g(z, mode * 1.001));
    CHECK(gf::density_g(z, mode) > gf::density_g(z, mode * 0.999));
  }
  CHECK_THROWS_AS(gf::density_g(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gf::density_f(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("sigma draws follow z^2 over a chi-square(3)") {
  constexpr std::size_t kDraws = 20000;
  const double z = 1.5;
  Rng rng = make_rng(71);
  std::vector<double> s(kDraws);
  for (auto& x : s) x = gf::sample_sigma(z, rng);
  const boost::math::chi_squared chi(3);
  const auto cdf = [&](double v) { return v <= 0.0 ? 0.0 : boost::math::cdf(boost::math::complement(chi, z * z / v)); };
  CHECK(stats::ks_one_sample(s, cdf) < 1.63 / std::sqrt(kDraws));
  CHECK(gf::sample_sigma(z, Seed{3}) == gf::sample_sigma(z, Seed{3}));
  CHECK_THROWS_AS(gf::sample_sigma(0.0, Seed{3}), std::invalid_argument);
}
