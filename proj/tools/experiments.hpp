#pragma once

// Replica drivers shared by the command-line tool and the acceptance suite.
// Every driver takes a base seed and derives one seed per replica with
// derive_seed, writes replica results into slot i and reduces in index
// order, so the results do not depend on the thread count.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bglab/growth_frag.hpp"
#include "bglab/plane_tree.hpp"
#include "bglab/rng.hpp"
#include "bglab/stats.hpp"

namespace bglab::experiments {

/// All labeled trees with 1..max_n edges (labels relative to the root).
std::vector<LabeledPlaneTree> all_labeled_trees(std::size_t max_n);

struct BijectionCheck {
  std::size_t cases = 0;
  std::size_t bijection_failures = 0;  // schaeffer_inverse(schaeffer_forward(t, eps)) != (t, eps)
  std::size_t distance_failures = 0;   // BFS from v* differs from l - min l + 1
  std::string first_failure;

  bool ok() const { return bijection_failures == 0 && distance_failures == 0; }
};

BijectionCheck check_bijection(const LabeledPlaneTree& t, int eps);

/// Every labeled tree with at most max_n edges, both signs.
BijectionCheck bijection_exhaustive(std::size_t max_n, unsigned threads);

/// `cases` uniform labeled trees, sizes uniform in [1, max_n], random sign.
BijectionCheck bijection_random(std::size_t cases, std::size_t max_n, Seed seed, unsigned threads);

struct CornerBoundCheck {
  std::size_t maps = 0;
  std::size_t pairs = 0;
  std::size_t failures = 0;
  std::string first_failure;
};

CornerBoundCheck corner_bound_exhaustive(std::size_t max_n, unsigned threads);
CornerBoundCheck corner_bound_random(std::size_t maps, std::size_t n, Seed seed, unsigned threads);

struct TwoPoint {
  std::vector<double> discrete;   // c_4 n^(-1/4) d_gr(v*, V)
  std::vector<double> continuum;  // Z_U - Z*
  double ks = 0.0;
};

TwoPoint two_point(std::size_t n, std::size_t k, std::size_t samples, Seed seed, unsigned threads);

struct Dimension {
  std::vector<double> radii;
  std::vector<double> mean_volume;  // mean ball-volume profile at x*
  stats::LinearFit fit{};
  double r_lo = 0.0;
  double r_hi = 0.0;
  std::size_t instances = 0;
  std::size_t basepoint_failures = 0;  // instances with D(a*, a) != Z_a - Z* somewhere
};

/// Radius window of the log-log volume fit.
inline constexpr std::pair<double, double> kDimensionWindow{0.3, 0.8};

/// Log-spaced radii used by `dimension`.
std::vector<double> dimension_radii();

Dimension dimension(std::size_t k, std::size_t m, std::size_t instances, double r_lo, double r_hi,
                    Seed seed, unsigned threads);

struct DiskSlice {
  double duration = 0.0;  // duration of the extracted excursion
  std::size_t grid = 0;
  std::size_t points = 0;
  double error = 0.0;  // max_x |min_b D(x, b) - Z_x|
  double boundary_size = 0.0;
};

inline constexpr std::size_t kNearBoundary = 20;

/// For each instance: Brownian snake on k steps, the longest excursion above
/// `level`, and a disk cloud of m points with `near_boundary` forced points.
std::vector<DiskSlice> disk_slices(std::size_t k, std::size_t m, std::size_t instances, double level,
                                   std::size_t near_boundary, Seed seed, unsigned threads);

struct Covariance {
  std::vector<std::size_t> indices;
  std::vector<double> lifetime;
  std::vector<double> variance;
  std::vector<double> std_error;
  double worst_z = 0.0;  // max |variance - lifetime| / std_error
};

/// One excursion of k steps, `replicas` snakes on it, `checks` evenly spaced
/// interior indices.
Covariance snake_covariance(std::size_t k, std::size_t replicas, std::size_t checks, Seed seed,
                            unsigned threads);

/// Survival levels bounding the window of the H* tail fit.
inline constexpr std::pair<double, double> kTailSurvival{0.05, 0.001};

std::vector<gf::CascadeSummary> cascades(double z, double m_min, std::size_t samples, Seed seed,
                                         unsigned threads, const gf::CascadeOptions& options = {});

struct DensityMoments {
  double integral;
  double mean;
};

/// Integral and mean of g_z by quadrature in log s.
DensityMoments density_moments(double z);

/// P(sigma <= s) under g_z by quadrature.
double density_cdf(double z, double s);

/// KS distance between `draws` samples of sample_sigma(z) and density_cdf.
double sigma_ks(double z, std::size_t draws, Seed seed, unsigned threads);

}  // namespace bglab::experiments
