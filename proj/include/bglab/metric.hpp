#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bglab/rng.hpp"
#include "bglab/snake.hpp"
#include "bglab/stats.hpp"

namespace bglab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// c_p = (9 / (p (p - 2)))^(1/4) for even p >= 4.
double scaling_constant(int p);

/// Rounds to the nearest multiple of 2^-32. Sums and differences of a few
/// such numbers of moderate size are exact in double precision, which keeps
/// D(a*, a) = Z_a - Z* an exact identity after closure.
double quantize_label(double z);

/// Z_i + Z_j - 2 max(min over [i, j], min over [j, i]) with cyclic intervals.
double dcirc(const SnakePath& s, std::size_t i, std::size_t j);

/// dcirc when the larger of the two interval minima is positive, +infinity
/// otherwise. Needs nonnegative tips and positive labels at i and j; throws
/// std::invalid_argument otherwise.
double delta_circ(const SnakePath& s, std::size_t i, std::size_t j);

/// Lowest grid index in [0, k) with minimal label.
std::size_t argmin_label(const SnakePath& s);

/// Dense symmetric matrix, row-major.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t m, double fill = 0.0) : m_(m), data_(m * m, fill) {}

  std::size_t size() const { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * m_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * m_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * m_, m_}; }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t m_ = 0;
  std::vector<double> data_;
};

/// Shortest chains through the given points (Floyd-Warshall). Entries may be
/// +infinity. Throws std::invalid_argument for asymmetric input, negative
/// entries or a nonzero diagonal.
DistanceMatrix metric_closure(const DistanceMatrix& d0);

enum class CloudKind { brownian_map, brownian_disk };

/// Finite sample of tree points with the pre-distance (D0) and its closure
/// (D). Labels are quantized.
struct MetricCloud {
  CloudKind kind = CloudKind::brownian_map;
  std::vector<std::size_t> points;  // grid indices, increasing
  std::vector<double> labels;
  std::size_t basepoint = 0;  // position of a* in `points` (Brownian map)
  std::vector<std::size_t> boundary;  // positions of forced near-boundary points (disk)
  DistanceMatrix d0;
  DistanceMatrix d;
};

/// Cloud on the given grid indices (sorted and deduplicated internally).
/// For the Brownian map, a* must be among them.
MetricCloud build_cloud(const SnakePath& s, std::vector<std::size_t> points, CloudKind kind);

/// m points uniform on the grid without replacement, a* always included.
MetricCloud sample_map_cloud(const SnakePath& s, std::size_t m, Rng& rng);

/// m points among the indices with positive label: the `near_boundary`
/// smallest labels are always included, the rest uniform. Needs
/// nonnegative tips.
MetricCloud sample_disk_cloud(const SnakePath& s, std::size_t m, Rng& rng, std::size_t near_boundary = 20);

/// Metric axioms, D <= D0, and |Z_a - Z_b| <= D; messages for violations
/// beyond `tol`.
std::vector<std::string> validate_cloud(const MetricCloud& c, double tol = 0.0);

/// Fraction of cloud points within distance r of cloud point `center`, for
/// each r.
std::vector<double> ball_volume_profile(const MetricCloud& c, std::size_t center,
                                        std::span<const double> radii);

/// Slope of log(volume) against log(radius) over radii in [r_lo, r_hi] with
/// positive volume.
stats::LinearFit volume_growth_fit(std::span<const double> radii, std::span<const double> volumes,
                                   double r_lo, double r_hi);

/// max over cloud points x of |min_b D(x, b) - Z_x|, b ranging over the
/// forced near-boundary points of a disk cloud.
double boundary_distance_error(const MetricCloud& c);

/// Fraction of pairs with D below `threshold` among pairs whose D0 is not.
double collapsed_pair_fraction(const MetricCloud& c, double threshold);

/// Two-sample KS statistic. Throws std::invalid_argument on an empty sample.
double two_point_compare(std::span<const double> discrete, std::span<const double> continuum);

/// c_4 n^(-1/4) d_gr(v*, V) for V uniform on the vertices of a uniform
/// pointed quadrangulation with n faces.
double discrete_two_point_draw(std::size_t n, Seed seed);

/// Z_U - Z* for U uniform on the grid of a Brownian snake driven by a
/// normalized excursion with k steps.
double continuum_two_point_draw(std::size_t k, Seed seed);

}  // namespace bglab
