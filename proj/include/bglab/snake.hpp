#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bglab/rng.hpp"

namespace bglab {

/// Snake trajectory sampled on a uniform time grid s_i = i * duration / k,
/// i = 0..k. lifetime[i] is the height of the tree point p(s_i) and tip[i]
/// its label. Index k is identified with index 0.
struct SnakePath {
  double duration = 1.0;
  std::vector<double> lifetime;
  std::vector<double> tip;
  double basepoint_label = 0.0;

  std::size_t grid_size() const { return lifetime.empty() ? 0 : lifetime.size() - 1; }
  double step() const { return duration / static_cast<double>(grid_size()); }
};

/// Structural problems of `s`, empty when valid: sizes, zero lifetime at both
/// ends, nonnegative lifetimes, tip[0] == basepoint_label, and equal tips at
/// any two indices at tree distance zero.
std::vector<std::string> validate_snake(const SnakePath& s);

enum class ExcursionMethod {
  bessel_bridge,  // Euclidean norm of a 3-dimensional Brownian bridge
  vervaat,        // Brownian bridge rotated at its (first) minimum
};

/// Normalized Brownian excursion (duration 1) at k+1 grid points; both ends
/// are 0 and interior values are positive. Throws std::invalid_argument for
/// k < 2.
std::vector<double> sample_excursion(std::size_t k, Rng& rng,
                                     ExcursionMethod method = ExcursionMethod::bessel_bridge);
std::vector<double> sample_excursion(std::size_t k, Seed seed,
                                     ExcursionMethod method = ExcursionMethod::bessel_bridge);

/// Brownian snake driven by `lifetime`: the active path is kept as a stack of
/// (height, value) points, retracted to min(zeta_i, zeta_{i+1}) and extended
/// by an independent Gaussian with variance the height gained. A retraction
/// landing strictly between two stored points fills in the value from the
/// Brownian bridge between them, so tips are exactly jointly Gaussian with
/// cov(W_i, W_j) = min of lifetime over [i, j].
SnakePath sample_snake(std::span<const double> lifetime, Rng& rng, double duration = 1.0,
                       double basepoint = 0.0);
SnakePath sample_snake(std::span<const double> lifetime, Seed seed, double duration = 1.0,
                       double basepoint = 0.0);

/// zeta_i + zeta_j - 2 min zeta over [min(i,j), max(i,j)].
double tree_distance(const SnakePath& s, std::size_t i, std::size_t j);

/// Minimum of tip over the cyclic index range [i, j]; for i > j the range
/// runs i..k and then 0..j.
double interval_min_label(const SnakePath& s, std::size_t i, std::size_t j);

/// O(1) range-minimum queries after O(k log k) preprocessing.
class RangeMin {
 public:
  RangeMin() = default;
  explicit RangeMin(std::span<const double> values);

  std::size_t size() const { return n_; }
  /// Minimum over [i, j], i <= j.
  double min(std::size_t i, std::size_t j) const;
  /// Minimum over the cyclic range [i, j] of indices 0..size()-1.
  double cyclic_min(std::size_t i, std::size_t j) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<double>> table_;
};

/// One snake per connected component of {tree points with label > r}, in
/// order of first visit. A component not containing the root is returned as
/// [debut, its indices..., debut]: lifetimes measured from the debut height,
/// tips shifted by -r (so 0 at both ends), grid size M+1 and duration
/// M * step for M indices. The component containing the root (only when
/// tip[0] > r) keeps its lifetimes and basepoint tip[0] - r, and has grid
/// size and duration given by its index count over [0, k).
std::vector<SnakePath> extract_excursions_above(const SnakePath& s, double r);

/// eps^-2 * step * #{i in [0, k) : 0 < tip_i < eps}. Throws
/// std::invalid_argument when eps <= 0 or a tip is negative.
double boundary_size_estimate(const SnakePath& s, double eps);

/// (duration / k)^(1/4).
double default_boundary_eps(const SnakePath& s);

}  // namespace bglab
