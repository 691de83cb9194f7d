#include "experiments.hpp"

#include <algorithm>
#include <cmath>

#include "bglab/metric.hpp"
#include "bglab/parallel.hpp"
#include "bglab/planar_map.hpp"
#include "bglab/quadrature.hpp"
#include "bglab/snake.hpp"

namespace bglab::experiments {

namespace {

LabeledPlaneTree random_labeled_tree(std::size_t n, Rng& rng) {
  return sample_labels(sample_plane_tree(n, rng), rng);
}

void merge(BijectionCheck& into, const BijectionCheck& c) {
  into.cases += c.cases;
  into.bijection_failures += c.bijection_failures;
  into.distance_failures += c.distance_failures;
  if (into.first_failure.empty()) into.first_failure = c.first_failure;
}

void merge(CornerBoundCheck& into, const CornerBoundCheck& c) {
  into.maps += c.maps;
  into.pairs += c.pairs;
  into.failures += c.failures;
  if (into.first_failure.empty()) into.first_failure = c.first_failure;
}

CornerBoundCheck check_corners(const LabeledPlaneTree& t) {
  const auto r = check_corner_bound(schaeffer_forward(t, 1), t);
  CornerBoundCheck c;
  c.maps = 1;
  c.pairs = r.pairs_checked;
  if (!r.holds) {
    c.failures = 1;
    c.first_failure = encode_tree(t);
    if (r.violation)
      c.first_failure += " corners " + std::to_string(r.violation->first) + "," +
                         std::to_string(r.violation->second);
  }
  return c;
}

// g_z(e^x) e^x, the density of log sigma.
double log_density(double z, double x) { return gf::density_g(z, std::exp(x)) * std::exp(x); }

constexpr double kLogLo = -60.0;
constexpr double kLogHi = 90.0;

}  // namespace

std::vector<LabeledPlaneTree> all_labeled_trees(std::size_t max_n) {
  std::vector<LabeledPlaneTree> out;
  for (std::size_t n = 1; n <= max_n; ++n)
    for (const auto& tree : enumerate_plane_trees(n))
      for (auto& t : enumerate_labelings(tree)) out.push_back(std::move(t));
  return out;
}

BijectionCheck check_bijection(const LabeledPlaneTree& t, int eps) {
  BijectionCheck c;
  c.cases = 1;
  const auto q = schaeffer_forward(t, eps);
  const auto back = schaeffer_inverse(q);
  if (!(back.tree == t) || back.eps != eps) c.bijection_failures = 1;

  const auto dist = bfs_distances(q.map, q.point);
  const int lmin = t.min_label();
  bool ok = dist[q.point] == 0;
  for (VertexId v = 0; v < t.tree().vertex_count(); ++v)
    ok = ok && static_cast<long>(dist[v]) == t.label(v) - lmin + 1;
  if (!ok) c.distance_failures = 1;

  if (!c.ok()) c.first_failure = encode_tree(t) + (eps > 0 ? " eps=+1" : " eps=-1");
  return c;
}

BijectionCheck bijection_exhaustive(std::size_t max_n, unsigned threads) {
  const auto trees = all_labeled_trees(max_n);
  std::vector<BijectionCheck> results(2 * trees.size());
  parallel_for(results.size(), threads, [&](std::size_t i) {
    results[i] = check_bijection(trees[i / 2], i % 2 == 0 ? 1 : -1);
  });
  BijectionCheck total;
  for (const auto& r : results) merge(total, r);
  return total;
}

BijectionCheck bijection_random(std::size_t cases, std::size_t max_n, Seed seed, unsigned threads) {
  std::vector<BijectionCheck> results(cases);
  parallel_for(cases, threads, [&](std::size_t i) {
    Rng rng = make_rng(derive_seed(seed, i));
    const auto n = std::uniform_int_distribution<std::size_t>(1, max_n)(rng);
    const int eps = std::bernoulli_distribution(0.5)(rng) ? 1 : -1;
    results[i] = check_bijection(random_labeled_tree(n, rng), eps);
  });
  BijectionCheck total;
  for (const auto& r : results) merge(total, r);
  return total;
}

CornerBoundCheck corner_bound_exhaustive(std::size_t max_n, unsigned threads) {
  const auto trees = all_labeled_trees(max_n);
  std::vector<CornerBoundCheck> results(trees.size());
  parallel_for(trees.size(), threads, [&](std::size_t i) { results[i] = check_corners(trees[i]); });
  CornerBoundCheck total;
  for (const auto& r : results) merge(total, r);
  return total;
}

CornerBoundCheck corner_bound_random(std::size_t maps, std::size_t n, Seed seed, unsigned threads) {
  std::vector<CornerBoundCheck> results(maps);
  parallel_for(maps, threads, [&](std::size_t i) {
    Rng rng = make_rng(derive_seed(seed, i));
    results[i] = check_corners(random_labeled_tree(n, rng));
  });
  CornerBoundCheck total;
  for (const auto& r : results) merge(total, r);
  return total;
}

TwoPoint two_point(std::size_t n, std::size_t k, std::size_t samples, Seed seed, unsigned threads) {
  TwoPoint out;
  out.discrete.resize(samples);
  out.continuum.resize(samples);
  const Seed discrete_seed = derive_seed(seed, 0);
  const Seed continuum_seed = derive_seed(seed, 1);
  parallel_for(2 * samples, threads, [&](std::size_t i) {
    const std::size_t r = i / 2;
    if (i % 2 == 0)
      out.discrete[r] = discrete_two_point_draw(n, derive_seed(discrete_seed, r));
    else
      out.continuum[r] = continuum_two_point_draw(k, derive_seed(continuum_seed, r));
  });
  out.ks = two_point_compare(out.discrete, out.continuum);
  return out;
}

std::vector<double> dimension_radii() {
  std::vector<double> r;
  for (int i = 0; i <= 48; ++i) r.push_back(0.02 * std::pow(10.0, i / 24.0));
  return r;
}

Dimension dimension(std::size_t k, std::size_t m, std::size_t instances, double r_lo, double r_hi,
                    Seed seed, unsigned threads) {
  Dimension out;
  out.radii = dimension_radii();
  out.r_lo = r_lo;
  out.r_hi = r_hi;
  out.instances = instances;
  std::vector<std::vector<double>> profiles(instances);
  std::vector<char> anchored(instances, 1);
  parallel_for(instances, threads, [&](std::size_t i) {
    Rng rng = make_rng(derive_seed(seed, i));
    const auto zeta = sample_excursion(k, rng);
    const auto s = sample_snake(zeta, rng);
    const auto c = sample_map_cloud(s, m, rng);
    const double z_star = c.labels[c.basepoint];
    for (std::size_t a = 0; a < c.points.size(); ++a)
      if (c.d(c.basepoint, a) != c.labels[a] - z_star) anchored[i] = 0;
    profiles[i] = ball_volume_profile(c, c.basepoint, out.radii);
  });
  out.mean_volume.assign(out.radii.size(), 0.0);
  for (std::size_t i = 0; i < instances; ++i) {
    for (std::size_t j = 0; j < out.radii.size(); ++j) out.mean_volume[j] += profiles[i][j];
    if (!anchored[i]) ++out.basepoint_failures;
  }
  for (double& v : out.mean_volume) v /= static_cast<double>(instances);
  out.fit = volume_growth_fit(out.radii, out.mean_volume, r_lo, r_hi);
  return out;
}

std::vector<DiskSlice> disk_slices(std::size_t k, std::size_t m, std::size_t instances, double level,
                                   std::size_t near_boundary, Seed seed, unsigned threads) {
  std::vector<DiskSlice> out(instances);
  parallel_for(instances, threads, [&](std::size_t i) {
    Rng rng = make_rng(derive_seed(seed, i));
    const auto zeta = sample_excursion(k, rng);
    const auto s = sample_snake(zeta, rng);
    const auto parts = extract_excursions_above(s, level);
    DiskSlice& d = out[i];
    if (parts.empty()) return;
    const auto longest = std::max_element(parts.begin(), parts.end(), [](const auto& a, const auto& b) {
      return a.grid_size() < b.grid_size();
    });
    const auto c = sample_disk_cloud(*longest, m, rng, near_boundary);
    d.duration = longest->duration;
    d.grid = longest->grid_size();
    d.points = c.points.size();
    d.error = boundary_distance_error(c);
    d.boundary_size = boundary_size_estimate(*longest, default_boundary_eps(*longest));
  });
  return out;
}

Covariance snake_covariance(std::size_t k, std::size_t replicas, std::size_t checks, Seed seed,
                            unsigned threads) {
  Covariance out;
  const auto zeta = sample_excursion(k, derive_seed(seed, 0));
  for (std::size_t c = 1; c <= checks; ++c) {
    const std::size_t i = c * k / (checks + 1);
    out.indices.push_back(i);
    out.lifetime.push_back(zeta[i]);
  }
  const Seed replica_seed = derive_seed(seed, 1);
  std::vector<double> values(replicas * checks);
  parallel_for(replicas, threads, [&](std::size_t r) {
    const auto s = sample_snake(zeta, derive_seed(replica_seed, r));
    for (std::size_t c = 0; c < checks; ++c) values[r * checks + c] = s.tip[out.indices[c]];
  });
  for (std::size_t c = 0; c < checks; ++c) {
    std::vector<double> w(replicas);
    for (std::size_t r = 0; r < replicas; ++r) w[r] = values[r * checks + c];
    const auto mv = stats::mean_var(w);
    double m4 = 0.0;
    for (double x : w) m4 += std::pow(x - mv.mean, 4);
    m4 /= static_cast<double>(replicas);
    const double se = std::sqrt(std::max(m4 - mv.variance * mv.variance, 0.0) / static_cast<double>(replicas));
    out.variance.push_back(mv.variance);
    out.std_error.push_back(se);
    out.worst_z = std::max(out.worst_z, std::abs(mv.variance - out.lifetime[c]) / se);
  }
  return out;
}

std::vector<gf::CascadeSummary> cascades(double z, double m_min, std::size_t samples, Seed seed,
                                         unsigned threads, const gf::CascadeOptions& options) {
  std::vector<gf::CascadeSummary> out(samples);
  parallel_for(samples, threads, [&](std::size_t i) {
    out[i] = gf::extinction_height(z, m_min, derive_seed(seed, i), options);
  });
  return out;
}

DensityMoments density_moments(double z) {
  const auto integral = quad::gauss_kronrod([z](double x) { return log_density(z, x); }, kLogLo, kLogHi,
                                            1e-14, 1e-12);
  const auto mean = quad::gauss_kronrod([z](double x) { return std::exp(x) * log_density(z, x); },
                                        kLogLo, kLogHi, 1e-14, 1e-12);
  return {integral.value, mean.value};
}

double density_cdf(double z, double s) {
  if (!(s > 0.0)) return 0.0;
  const double x = std::log(s);
  if (x <= kLogLo) return 0.0;
  return quad::gauss_kronrod([z](double t) { return log_density(z, t); }, kLogLo, x, 1e-14, 1e-12).value;
}

double sigma_ks(double z, std::size_t draws, Seed seed, unsigned threads) {
  std::vector<double> sample(draws);
  parallel_for(draws, threads, [&](std::size_t i) { sample[i] = gf::sample_sigma(z, derive_seed(seed, i)); });
  return stats::ks_one_sample(sample, [z](double s) { return density_cdf(z, s); });
}

}  // namespace bglab::experiments
