#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

#include "bglab/parallel.hpp"
#include "bglab/quadrature.hpp"
#include "bglab/rng.hpp"
#include "bglab/stats.hpp"

using namespace bglab;

TEST_CASE("splitmix64 reference values") {
  // First outputs of the reference SplitMix64 generator seeded with 0.
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFull);
  CHECK(splitmix64(0x9E3779B97F4A7C15ull) == 0x6E789E6AA1B965F4ull);
  CHECK(derive_seed(0, 0) == 0x6E789E6AA1B965F4ull);
  CHECK(derive_seed(5, 1) != derive_seed(5, 2));
  CHECK(make_rng(3)() == make_rng(3)());
}

TEST_CASE("mean and variance") {
  const std::vector<double> x = {1, 2, 3, 4};
  const auto mv = stats::mean_var(x);
  CHECK(mv.mean == 2.5);
  CHECK(mv.variance == doctest::Approx(5.0 / 3.0));
  CHECK(mv.std_error() == doctest::Approx(std::sqrt(5.0 / 12.0)));
}

TEST_CASE("chi-square") {
  const std::vector<std::size_t> flat = {10, 10, 10, 10};
  const auto a = stats::chi_square_uniform(flat);
  CHECK(a.statistic == 0.0);
  CHECK(a.dof == 3);
  CHECK(a.p_value == doctest::Approx(1.0));
  const std::vector<std::size_t> skew = {30, 10};
  // (30-20)^2/20 + (10-20)^2/20 = 10 with 1 dof: p = erfc(sqrt(5)).
  const auto b = stats::chi_square_uniform(skew);
  CHECK(b.statistic == doctest::Approx(10.0));
  CHECK(b.p_value == doctest::Approx(std::erfc(std::sqrt(5.0))));
}

TEST_CASE("Kolmogorov-Smirnov") {
  const std::vector<double> a = {1, 2, 3, 4}, b = {3, 4, 5, 6};
  CHECK(stats::ks_two_sample(a, b) == 0.5);
  CHECK(stats::ks_two_sample(a, a) == 0.0);
  CHECK_THROWS(stats::ks_two_sample(a, {}));

  const std::vector<double> u = {0.1, 0.4, 0.7};
  // Empirical CDF steps 1/3, 2/3, 1 against x: largest gap is at 0.7 from below (2/3 - 0.7).
  CHECK(stats::ks_one_sample(u, [](double x) { return x; }) == doctest::Approx(0.3));
  CHECK(stats::kolmogorov_tail(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(stats::ks_two_sample_p(0.0, 100, 100) == doctest::Approx(1.0));
}

TEST_CASE("linear fit") {
  const std::vector<double> x = {0, 1, 2, 3}, y = {1, 3, 5, 7};
  const auto f = stats::linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope_std_error == doctest::Approx(0.0));
  CHECK(f.points == 4);
  CHECK_THROWS(stats::linear_fit(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}));
}

TEST_CASE("quadrature on known integrals") {
  const auto r = quad::gauss_kronrod([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(quad::gauss_kronrod([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10, 1e-10).value ==
        doctest::Approx(2.0).epsilon(1e-8));
  CHECK(quad::gauss_legendre([](double x) { return std::exp(x); }, 0.0, 1.0) ==
        doctest::Approx(std::numbers::e - 1.0).epsilon(1e-14));
  CHECK(quad::gauss_legendre([](double x) { return x * x * x; }, -1.0, 2.0, 2, 1) == doctest::Approx(3.75));
}

TEST_CASE("parallel_for") {
  for (unsigned threads : {1u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL("body called"); });
  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](std::size_t i) {
                                 if (i == 37) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("thread count from the environment") {
  const char* old = std::getenv("BGLAB_THREADS");
  const std::string saved = old ? old : "";
  setenv("BGLAB_THREADS", "3", 1);
  CHECK(default_thread_count() == 3);
  setenv("BGLAB_THREADS", "junk", 1);
  CHECK(default_thread_count() >= 1);
  if (old)
    setenv("BGLAB_THREADS", saved.c_str(), 1);
  else
    unsetenv("BGLAB_THREADS");
}
