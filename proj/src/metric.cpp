#include "bglab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "bglab/planar_map.hpp"
#include "bglab/plane_tree.hpp"

namespace bglab {

namespace {

constexpr double kGrid = 4294967296.0;  // 2^32

void check_point(const SnakePath& s, std::size_t i) {
  if (i >= s.tip.size()) throw std::out_of_range("metric: snake index out of range");
}

// Larger of the two cyclic interval minima between i and j.
double max_interval_min(const RangeMin& rm, std::size_t i, std::size_t j) {
  return std::max(rm.cyclic_min(i, j), rm.cyclic_min(j, i));
}

}  // namespace

double scaling_constant(int p) {
  if (p < 4 || p % 2 != 0) throw std::invalid_argument("scaling_constant: p must be even and >= 4");
  return std::pow(9.0 / (p * (p - 2.0)), 0.25);
}

double quantize_label(double z) { return std::nearbyint(z * kGrid) / kGrid; }

double dcirc(const SnakePath& s, std::size_t i, std::size_t j) {
  check_point(s, i);
  check_point(s, j);
  const double m = std::max(interval_min_label(s, i, j), interval_min_label(s, j, i));
  return (s.tip[i] - m) + (s.tip[j] - m);
}

double delta_circ(const SnakePath& s, std::size_t i, std::size_t j) {
  check_point(s, i);
  check_point(s, j);
  if (!(s.tip[i] > 0.0) || !(s.tip[j] > 0.0))
    throw std::invalid_argument("delta_circ: boundary point (label <= 0)");
  const double m = std::max(interval_min_label(s, i, j), interval_min_label(s, j, i));
  if (m < 0.0) throw std::invalid_argument("delta_circ: negative label");
  if (m == 0.0) return kInfinity;
  return (s.tip[i] - m) + (s.tip[j] - m);
}

std::size_t argmin_label(const SnakePath& s) {
  if (s.tip.size() < 2) throw std::invalid_argument("argmin_label: empty snake");
  return static_cast<std::size_t>(std::min_element(s.tip.begin(), s.tip.end() - 1) - s.tip.begin());
}

DistanceMatrix metric_closure(const DistanceMatrix& d0) {
  const std::size_t m = d0.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (d0(i, i) != 0.0) throw std::invalid_argument("metric_closure: nonzero diagonal");
    for (std::size_t j = 0; j < m; ++j) {
      if (!(d0(i, j) >= 0.0)) throw std::invalid_argument("metric_closure: negative or NaN entry");
      if (d0(i, j) != d0(j, i)) throw std::invalid_argument("metric_closure: asymmetric input");
    }
  }
  DistanceMatrix d = d0;
  std::vector<double> through(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto rk = d.row(k);
    std::copy(rk.begin(), rk.end(), through.begin());
    for (std::size_t i = 0; i < m; ++i) {
      const double dik = d(i, k);
      if (dik == kInfinity) continue;
      double* ri = &d(i, 0);
      for (std::size_t j = 0; j < m; ++j) ri[j] = std::min(ri[j], dik + through[j]);
    }
  }
  return d;
}

MetricCloud build_cloud(const SnakePath& s, std::vector<std::size_t> points, CloudKind kind) {
  const std::size_t k = s.grid_size();
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.empty()) throw std::invalid_argument("build_cloud: no points");
  if (points.back() >= k) throw std::out_of_range("build_cloud: point outside [0, k)");

  std::vector<double> q(s.tip.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = quantize_label(s.tip[i]);
  const RangeMin rm(q);

  MetricCloud c;
  c.kind = kind;
  c.points = std::move(points);
  const std::size_t m = c.points.size();
  c.labels.resize(m);
  for (std::size_t a = 0; a < m; ++a) c.labels[a] = q[c.points[a]];
  if (kind == CloudKind::brownian_map) {
    const std::size_t star = argmin_label(s);
    const auto it = std::lower_bound(c.points.begin(), c.points.end(), star);
    if (it == c.points.end() || *it != star) throw std::invalid_argument("build_cloud: a* not sampled");
    c.basepoint = static_cast<std::size_t>(it - c.points.begin());
  } else {
    for (double z : q)
      if (z < 0.0) throw std::invalid_argument("build_cloud: disk needs nonnegative labels");
    for (double z : c.labels)
      if (!(z > 0.0)) throw std::invalid_argument("build_cloud: disk point on the boundary");
  }

  c.d0 = DistanceMatrix(m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const double mn = max_interval_min(rm, c.points[a], c.points[b]);
      double v = (c.labels[a] - mn) + (c.labels[b] - mn);
      if (kind == CloudKind::brownian_disk && mn <= 0.0) v = kInfinity;
      c.d0(a, b) = c.d0(b, a) = v;
    }
  }
  c.d = metric_closure(c.d0);
  return c;
}

MetricCloud sample_map_cloud(const SnakePath& s, std::size_t m, Rng& rng) {
  const std::size_t k = s.grid_size();
  if (m == 0 || m > k) throw std::invalid_argument("sample_map_cloud: need 1 <= m <= k");
  const std::size_t star = argmin_label(s);
  std::unordered_set<std::size_t> seen{star};
  std::vector<std::size_t> pts{star};
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  while (pts.size() < m) {
    const std::size_t i = pick(rng);
    if (seen.insert(i).second) pts.push_back(i);
  }
  return build_cloud(s, std::move(pts), CloudKind::brownian_map);
}

MetricCloud sample_disk_cloud(const SnakePath& s, std::size_t m, Rng& rng, std::size_t near_boundary) {
  const std::size_t k = s.grid_size();
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < k; ++i) {
    if (s.tip[i] < 0.0) throw std::invalid_argument("sample_disk_cloud: negative label");
    if (s.tip[i] > 0.0) positive.push_back(i);
  }
  if (positive.empty()) throw std::invalid_argument("sample_disk_cloud: no interior points");
  m = std::min(m, positive.size());
  near_boundary = std::min(near_boundary, m);

  std::vector<std::size_t> by_label = positive;
  std::stable_sort(by_label.begin(), by_label.end(),
                   [&](std::size_t a, std::size_t b) { return s.tip[a] < s.tip[b]; });
  std::vector<std::size_t> forced(by_label.begin(), by_label.begin() + static_cast<std::ptrdiff_t>(near_boundary));
  std::unordered_set<std::size_t> seen(forced.begin(), forced.end());
  std::vector<std::size_t> pts = forced;
  std::uniform_int_distribution<std::size_t> pick(0, positive.size() - 1);
  while (pts.size() < m) {
    const std::size_t i = positive[pick(rng)];
    if (seen.insert(i).second) pts.push_back(i);
  }
  MetricCloud c = build_cloud(s, std::move(pts), CloudKind::brownian_disk);
  std::sort(forced.begin(), forced.end());
  for (std::size_t i : forced)
    c.boundary.push_back(static_cast<std::size_t>(
        std::lower_bound(c.points.begin(), c.points.end(), i) - c.points.begin()));
  return c;
}

std::vector<std::string> validate_cloud(const MetricCloud& c, double tol) {
  std::vector<std::string> diag;
  const std::size_t m = c.points.size();
  auto note = [&](const std::string& msg) {
    if (std::find(diag.begin(), diag.end(), msg) == diag.end()) diag.push_back(msg);
  };
  for (std::size_t a = 0; a < m; ++a) {
    if (c.d(a, a) != 0.0) note("nonzero diagonal");
    for (std::size_t b = 0; b < m; ++b) {
      const double v = c.d(a, b);
      if (v != c.d(b, a)) note("asymmetric");
      if (v > c.d0(a, b) + tol) note("D exceeds D0");
      if (v < std::abs(c.labels[a] - c.labels[b]) - tol) note("D below label difference");
      for (std::size_t x = 0; x < m; ++x)
        if (v > c.d(a, x) + c.d(x, b) + tol) note("triangle inequality fails");
    }
  }
  return diag;
}

std::vector<double> ball_volume_profile(const MetricCloud& c, std::size_t center,
                                        std::span<const double> radii) {
  if (center >= c.points.size()) throw std::out_of_range("ball_volume_profile: bad center");
  auto row = c.d.row(center);
  std::vector<double> dist(row.begin(), row.end());
  std::sort(dist.begin(), dist.end());
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    const auto inside = std::upper_bound(dist.begin(), dist.end(), r) - dist.begin();
    out.push_back(static_cast<double>(inside) / static_cast<double>(dist.size()));
  }
  return out;
}

stats::LinearFit volume_growth_fit(std::span<const double> radii, std::span<const double> volumes,
                                   double r_lo, double r_hi) {
  if (radii.size() != volumes.size()) throw std::invalid_argument("volume_growth_fit: size mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] >= r_lo && radii[i] <= r_hi && radii[i] > 0.0 && volumes[i] > 0.0) {
      x.push_back(std::log(radii[i]));
      y.push_back(std::log(volumes[i]));
    }
  }
  return stats::linear_fit(x, y);
}

double boundary_distance_error(const MetricCloud& c) {
  if (c.kind != CloudKind::brownian_disk || c.boundary.empty())
    throw std::invalid_argument("boundary_distance_error: needs a disk cloud with boundary points");
  double worst = 0.0;
  for (std::size_t x = 0; x < c.points.size(); ++x) {
    double best = kInfinity;
    for (std::size_t b : c.boundary) best = std::min(best, c.d(x, b));
    worst = std::max(worst, std::abs(best - c.labels[x]));
  }
  return worst;
}

double collapsed_pair_fraction(const MetricCloud& c, double threshold) {
  std::size_t eligible = 0, collapsed = 0;
  const std::size_t m = c.points.size();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      if (c.d0(a, b) < threshold) continue;
      ++eligible;
      if (c.d(a, b) < threshold) ++collapsed;
    }
  }
  return eligible ? static_cast<double>(collapsed) / static_cast<double>(eligible) : 0.0;
}

double two_point_compare(std::span<const double> discrete, std::span<const double> continuum) {
  if (discrete.empty() || continuum.empty()) throw std::invalid_argument("two_point_compare: empty sample");
  return stats::ks_two_sample(discrete, continuum);
}

double discrete_two_point_draw(std::size_t n, Seed seed) {
  Rng rng = make_rng(seed);
  const auto tree = sample_labels(sample_plane_tree(n, rng), rng);
  const auto q = schaeffer_forward(tree, 1);
  const auto dist = bfs_distances(q.map, q.point);
  std::uniform_int_distribution<std::size_t> pick(0, dist.size() - 1);
  return scaling_constant(4) * std::pow(static_cast<double>(n), -0.25) * dist[pick(rng)];
}

double continuum_two_point_draw(std::size_t k, Seed seed) {
  Rng rng = make_rng(seed);
  const auto zeta = sample_excursion(k, rng);
  const auto s = sample_snake(zeta, rng);
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  const double z_star = s.tip[argmin_label(s)];
  return s.tip[pick(rng)] - z_star;
}

}  // namespace bglab
