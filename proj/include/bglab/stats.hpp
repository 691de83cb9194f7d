#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bglab::stats {

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::size_t count = 0;
  double std_error() const;
};

MeanVar mean_var(std::span<const double> xs);

/// Pearson chi-square goodness of fit against equal expected counts.
struct ChiSquare {
  double statistic;
  std::size_t dof;
  double p_value;
};
ChiSquare chi_square_uniform(std::span<const std::size_t> counts);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|. Throws on empty input.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample KS statistic against a continuous CDF.
double ks_one_sample(std::span<const double> sample,
                     const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov tail P(K > x) = 2 sum (-1)^{j-1} exp(-2 j^2 x^2).
double kolmogorov_tail(double x);

/// p-value of a two-sample KS statistic with sample sizes n and m.
double ks_two_sample_p(double statistic, std::size_t n, std::size_t m);

struct LinearFit {
  double slope;
  double intercept;
  double slope_std_error;
  std::size_t points;
};

/// Ordinary least squares y = intercept + slope * x. Needs at least three
/// points with distinct x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace bglab::stats
