#include "bglab/growth_frag.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "bglab/quadrature.hpp"
#include "bglab/stats.hpp"

namespace bglab::gf {

namespace {

const double kC = std::sqrt(3.0 / (2.0 * std::numbers::pi));
const double kUpper = 1.0 / std::numbers::sqrt2;  // u at x = 1/2
// sup over y in (0, 1/2) of ((1 - y)^{-5/2} - 1) / y, reached at y = 1/2.
const double kThinBound = 2.0 * (std::pow(2.0, 2.5) - 1.0);

// ((1 - t)^q - 1 + q t) / t^2
double binomial_remainder(double q, double t) {
  if (t < 1e-2) {
    double coef = q * (q - 1.0) / 2.0;  // C(q, 2)
    double sum = 0.0, power = 1.0;
    for (int j = 2; j < 80; ++j) {
      const double term = coef * power;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum) || coef == 0.0) break;
      coef *= (q - j) / (j + 1.0);
      power *= -t;
    }
    return sum;
  }
  return (std::expm1(q * std::log1p(-t)) + q * t) / (t * t);
}

// (log(1 - y) + y) / y^2
double log_remainder(double y) {
  if (y < 1e-3) {
    double sum = 0.0, power = 1.0;
    for (int j = 2; j < 40; ++j) {
      sum -= power / j;
      power *= y;
    }
    return sum;
  }
  return (std::log1p(-y) + y) / (y * y);
}

double psi_integrand(double q, double u) {
  const double t = u * u;
  return 2.0 * binomial_remainder(q, t) * std::pow(1.0 - t, -2.5);
}

void check_q(double q) {
  if (!(q >= 0.0)) throw std::invalid_argument("psi: q must be nonnegative");
}

// ((1 - y)^{-5/2} - 1) / y
double thin_ratio(double y) { return std::expm1(-2.5 * std::log1p(-y)) / y; }

Truncation compute_truncation(double eps) {
  const double se = std::sqrt(eps);
  // Substitution y = v^2 turns y^{-5/2} dy into 2 v^{-4} dv.
  const auto small_drift = quad::gauss_kronrod(
      [](double v) {
        const double y = v * v;
        return 2.0 * log_remainder(y) * std::pow(1.0 - y, -2.5);
      },
      0.0, se, 1e-14, 1e-12);
  const auto small_var = quad::gauss_kronrod(
      [](double v) {
        const double y = v * v;
        if (y == 0.0) return 2.0;
        const double l = std::log1p(-y) / y;
        return 2.0 * l * l * std::pow(1.0 - y, -2.5);
      },
      0.0, se, 1e-14, 1e-12);
  // int_eps^{1/2} y^{-3/2} (1 - y)^{-5/2} dy = 2 (eps^{-1/2} - sqrt 2) + correction
  const auto large_comp = quad::gauss_kronrod(
      [](double v) { return 2.0 * thin_ratio(v * v); }, se, kUpper, 1e-14, 1e-12);
  Truncation t;
  t.eps = eps;
  t.drift = kC * (-8.0 / 3.0 + small_drift.value + 2.0 * (1.0 / se - std::numbers::sqrt2) +
                  large_comp.value);
  t.variance = kC * small_var.value;
  t.rate_main = kC * (2.0 / 3.0) * (std::pow(eps, -1.5) - std::pow(2.0, 1.5));
  t.rate_proposal = kC * kThinBound * 2.0 * (1.0 / se - std::numbers::sqrt2);
  return t;
}

// One large jump size y in (eps, 1/2) given an arrival of the superposed
// process, or 0 if the arrival is thinned away.
double draw_jump(const Truncation& t, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double total = t.rate_main + t.rate_proposal;
  if (unif(rng) * total < t.rate_main) {
    const double a = std::pow(t.eps, -1.5), b = std::pow(2.0, 1.5);
    return std::pow(a - unif(rng) * (a - b), -2.0 / 3.0);
  }
  const double a = 1.0 / std::sqrt(t.eps), b = std::numbers::sqrt2;
  const double w = a - unif(rng) * (a - b);
  const double y = 1.0 / (w * w);
  return unif(rng) * kThinBound <= thin_ratio(y) ? y : 0.0;
}

class LevelTable {
 public:
  explicit LevelTable(double eps_cap) : cap_(eps_cap) {}

  static constexpr int kLevels = 64;

  // Finest tabulated truncation not above ratio (or the cap).
  const Truncation& at_most(double ratio) {
    int j = 0;
    if (ratio < cap_) j = std::min(kLevels - 1, static_cast<int>(std::ceil(2.0 * std::log2(cap_ / ratio))));
    auto& slot = levels_[j];
    if (!slot.eps) slot = truncation(cap_ * std::exp2(-0.5 * j));
    return slot;
  }

 private:
  double cap_;
  Truncation levels_[kLevels] = {};
};

struct Pending {
  double birth;
  double mass;
  std::int64_t parent;
};

template <class Spawn>
double run_particle(double birth, double m0, double m_min, const CascadeOptions& opt, LevelTable& table,
                    Rng& rng, Spawn&& spawn, std::vector<std::pair<double, double>>* path) {
  std::normal_distribution<double> normal;
  std::exponential_distribution<double> expo;
  double log_mass = std::log(m0);
  double h = birth;
  const double log_stop = std::log(opt.stop_ratio * m_min);
  if (path) path->emplace_back(h, m0);
  while (log_mass >= log_stop) {
    const double x = std::exp(log_mass);
    const bool fine = x >= m_min;
    const Truncation& tr = table.at_most(fine ? m_min / x : opt.eps_cap);
    const double sd = std::sqrt(tr.variance);
    const double total = tr.rate_main + tr.rate_proposal;
    double remaining = fine ? opt.dxi : opt.dxi_coarse;
    while (true) {
      const double w = expo(rng) / total;
      const double seg = std::min(w, remaining);
      const double next = log_mass + tr.drift * seg + sd * std::sqrt(seg) * normal(rng);
      h += 0.5 * seg * (std::exp(0.5 * log_mass) + std::exp(0.5 * next));
      log_mass = next;
      if (w >= remaining) break;
      remaining -= w;
      const double y = draw_jump(tr, rng);
      if (y == 0.0) continue;
      const double before = std::exp(log_mass);
      const double child = before * y;
      log_mass += std::log1p(-y);
      if (child >= m_min) {
        spawn(h, child);
        if (path) {
          path->emplace_back(h, before);
          path->emplace_back(h, std::exp(log_mass));
        }
      }
    }
    if (path) path->emplace_back(h, std::exp(log_mass));
  }
  return h;
}

// Shared driver: `keep` receives every finished particle when non-null.
CascadeSummary run_cascade(double z, double m_min, Rng& rng, const CascadeOptions& opt, Cascade* keep) {
  if (!(z > 0.0)) throw std::invalid_argument("cascade: z must be positive");
  if (!(m_min > 0.0)) throw std::invalid_argument("cascade: m_min must be positive");
  if (!(opt.dxi > 0.0) || !(opt.dxi_coarse > 0.0) || !(opt.eps_cap > 0.0 && opt.eps_cap < 0.5) ||
      !(opt.stop_ratio > 0.0 && opt.stop_ratio < 1.0))
    throw std::invalid_argument("cascade: invalid options");
  LevelTable table(opt.eps_cap);
  std::deque<Pending> queue{{0.0, z, -1}};
  std::size_t index = 0;
  CascadeSummary summary{0.0, 0};
  while (!queue.empty()) {
    const Pending p = queue.front();
    queue.pop_front();
    const auto self = static_cast<std::int64_t>(index++);
    Particle* rec = nullptr;
    if (keep) {
      rec = &keep->particles.emplace_back();
      rec->birth_height = p.birth;
      rec->initial_mass = p.mass;
      rec->parent = p.parent;
    }
    auto spawn = [&](double h, double mass) {
      if (rec) rec->children.push_back(static_cast<std::uint32_t>(index + queue.size()));
      queue.push_back({h, mass, self});
    };
    const double end = run_particle(p.birth, p.mass, m_min, opt, table, rng, spawn,
                                    rec && opt.record_paths ? &rec->path : nullptr);
    if (rec) rec->absorption_height = end;
    summary.h_star = std::max(summary.h_star, end);
    ++summary.particles;
  }
  return summary;
}

}  // namespace

double psi_prefactor() { return kC; }

double psi(double q) {
  check_q(q);
  if (q == 0.0) return 0.0;
  const auto r = quad::gauss_kronrod([q](double u) { return psi_integrand(q, u); }, 0.0, kUpper, 1e-15, 1e-14);
  return kC * (-8.0 / 3.0 * q + r.value);
}

double psi_fixed_order(double q) {
  check_q(q);
  if (q == 0.0) return 0.0;
  const double i = quad::gauss_legendre([q](double u) { return psi_integrand(q, u); }, 0.0, kUpper, 40, 8);
  return kC * (-8.0 / 3.0 * q + i);
}

double psi_derivative_at_zero() {
  const auto r = quad::gauss_kronrod(
      [](double u) {
        const double t = u * u;
        return 2.0 * log_remainder(t) * std::pow(1.0 - t, -2.5);
      },
      0.0, kUpper, 1e-15, 1e-14);
  return kC * (-8.0 / 3.0 + r.value);
}

Truncation truncation(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("truncation: eps must lie in (0, 1/2)");
  static std::mutex mu;
  static std::map<double, Truncation> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(eps); it != cache.end()) return it->second;
  }
  const Truncation t = compute_truncation(eps);
  std::lock_guard lock(mu);
  cache.emplace(eps, t);
  return t;
}

LevyPath sample_levy(double horizon, double eps_j, double dt, Rng& rng) {
  if (!(horizon > 0.0) || !(dt > 0.0)) throw std::invalid_argument("sample_levy: horizon and dt must be positive");
  if (!(eps_j > 0.0 && eps_j < 0.5)) throw std::invalid_argument("sample_levy: eps_j must lie in (0, 1/2)");
  const Truncation tr = truncation(eps_j);
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  std::normal_distribution<double> normal;
  std::exponential_distribution<double> expo;
  const double sd = std::sqrt(tr.variance);
  const double total = tr.rate_main + tr.rate_proposal;
  LevyPath p;
  p.dt = dt;
  p.xi.assign(steps + 1, 0.0);
  double xi = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t0 = static_cast<double>(i) * dt;
    double elapsed = 0.0;
    while (true) {
      const double w = expo(rng) / total;
      if (elapsed + w >= dt) break;
      elapsed += w;
      const double y = draw_jump(tr, rng);
      if (y == 0.0) continue;
      const double size = std::log1p(-y);
      p.jumps.push_back({t0 + elapsed, size});
      xi += size;
    }
    xi += tr.drift * dt + sd * std::sqrt(dt) * normal(rng);
    p.xi[i + 1] = xi;
  }
  return p;
}

LevyPath sample_levy(double horizon, double eps_j, double dt, Seed seed) {
  Rng rng = make_rng(seed);
  return sample_levy(horizon, eps_j, dt, rng);
}

double MassPath::at(double t) const {
  if (height.empty() || t < height.front() || t >= absorption_height) return 0.0;
  const auto it = std::upper_bound(height.begin(), height.end(), t);
  return mass[static_cast<std::size_t>(it - height.begin()) - 1];
}

MassPath lamperti(const LevyPath& path, double z) {
  if (!(z > 0.0)) throw std::invalid_argument("lamperti: z must be positive");
  MassPath m;
  const std::size_t n = path.xi.size();
  m.height.resize(n);
  m.mass.resize(n);
  const double root = std::sqrt(z);
  double a = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) a += 0.5 * path.dt * (std::exp(0.5 * path.xi[i - 1]) + std::exp(0.5 * path.xi[i]));
    m.height[i] = root * a;
    m.mass[i] = z * std::exp(path.xi[i]);
  }
  m.absorption_height = n ? m.height.back() : 0.0;
  return m;
}

std::vector<double> Cascade::ranked_masses(double r) const {
  std::vector<double> out;
  for (const auto& p : particles) {
    if (p.birth_height > r || r >= p.absorption_height) continue;
    if (p.path.empty()) throw std::logic_error("ranked_masses: cascade has no recorded paths");
    const auto it = std::upper_bound(p.path.begin(), p.path.end(), r,
                                     [](double v, const std::pair<double, double>& e) { return v < e.first; });
    out.push_back(std::prev(it)->second);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

Cascade simulate_cascade(double z, double m_min, Rng& rng, const CascadeOptions& options) {
  Cascade c;
  c.z = z;
  c.m_min = m_min;
  c.h_star = run_cascade(z, m_min, rng, options, &c).h_star;
  return c;
}

Cascade simulate_cascade(double z, double m_min, Seed seed, const CascadeOptions& options) {
  Rng rng = make_rng(seed);
  return simulate_cascade(z, m_min, rng, options);
}

CascadeSummary extinction_height(double z, double m_min, Seed seed, CascadeOptions options) {
  Rng rng = make_rng(seed);
  options.record_paths = false;
  return run_cascade(z, m_min, rng, options, nullptr);
}

std::pair<double, double> survival_window(std::span<const double> samples, double s_hi, double s_lo) {
  if (samples.empty() || !(s_hi > s_lo) || !(s_lo > 0.0) || !(s_hi < 1.0))
    throw std::invalid_argument("survival_window: bad arguments");
  std::vector<double> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end());
  auto quantile = [&](double s) {
    const auto idx = static_cast<std::size_t>(std::floor((1.0 - s) * static_cast<double>(v.size())));
    return v[std::min(idx, v.size() - 1)];
  };
  return {quantile(s_hi), quantile(s_lo)};
}

TailFit extinction_tail(std::span<const double> samples, double r_lo, double r_hi, Seed bootstrap_seed) {
  if (samples.size() < kMinTailSamples) throw std::invalid_argument("extinction_tail: too few samples");
  if (!(r_lo > 0.0) || !(r_hi > r_lo)) throw std::invalid_argument("extinction_tail: bad window");
  constexpr std::size_t kRadii = 16;
  std::vector<double> radii(kRadii), log_r(kRadii);
  for (std::size_t i = 0; i < kRadii; ++i) {
    log_r[i] = std::log(r_lo) + (std::log(r_hi) - std::log(r_lo)) * static_cast<double>(i) / (kRadii - 1);
    radii[i] = std::exp(log_r[i]);
  }
  // bins[0] = #{H <= r_0}, bins[j] = #{r_{j-1} < H <= r_j}, bins[kRadii] = #{H > r_last}
  std::vector<std::size_t> bins(kRadii + 1, 0);
  for (double h : samples)
    ++bins[static_cast<std::size_t>(std::lower_bound(radii.begin(), radii.end(), h) - radii.begin())];

  const double n = static_cast<double>(samples.size());
  auto fit = [&](const std::vector<std::size_t>& b) -> std::optional<double> {
    std::vector<double> x, y;
    std::size_t above = 0;
    for (std::size_t j = kRadii; j-- > 0;) {
      above += b[j + 1];
      if (above == 0) continue;
      x.push_back(log_r[j]);
      y.push_back(std::log(static_cast<double>(above) / n));
    }
    if (x.size() < 3) return std::nullopt;
    const auto lf = stats::linear_fit(x, y);
    return lf.slope;
  };
  const auto base = fit(bins);
  if (!base) throw std::invalid_argument("extinction_tail: window has too few survival points");
  std::size_t distinct = 0;
  for (std::size_t j = 1; j < kRadii; ++j) distinct += bins[j] > 0;
  if (distinct < 2) throw std::invalid_argument("extinction_tail: degenerate sample");

  Rng rng = make_rng(bootstrap_seed);
  std::vector<double> boot;
  constexpr int kBoot = 400;
  for (int b = 0; b < kBoot; ++b) {
    std::vector<std::size_t> draw(bins.size());
    std::size_t left = samples.size();
    double mass_left = 1.0;
    for (std::size_t j = 0; j < bins.size(); ++j) {
      const double pj = static_cast<double>(bins[j]) / n;
      if (j + 1 == bins.size() || mass_left <= 0.0) {
        draw[j] = left;
      } else {
        std::binomial_distribution<std::size_t> binom(left, std::clamp(pj / mass_left, 0.0, 1.0));
        draw[j] = binom(rng);
      }
      left -= draw[j];
      mass_left -= pj;
    }
    if (const auto s = fit(draw)) boot.push_back(*s);
  }
  std::sort(boot.begin(), boot.end());
  TailFit t;
  t.slope = *base;
  t.band_lo = boot[static_cast<std::size_t>(0.025 * static_cast<double>(boot.size()))];
  t.band_hi = boot[std::min(boot.size() - 1, static_cast<std::size_t>(0.975 * static_cast<double>(boot.size())))];
  t.r_lo = r_lo;
  t.r_hi = r_hi;
  t.points = kRadii;
  return t;
}

double density_f(double z, double s) {
  if (!(z > 0.0) || !(s > 0.0)) throw std::invalid_argument("density_f: arguments must be positive");
  return std::sqrt(3.0) / (2.0 * std::numbers::pi) * std::sqrt(z) * std::pow(s, -2.5) * std::exp(-z * z / (2.0 * s));
}

double density_g(double z, double s) {
  if (!(z > 0.0) || !(s > 0.0)) throw std::invalid_argument("density_g: arguments must be positive");
  return z * z * z * std::pow(s, -2.5) * std::exp(-z * z / (2.0 * s)) / std::sqrt(2.0 * std::numbers::pi);
}

double sample_sigma(double z, Rng& rng) {
  if (!(z > 0.0)) throw std::invalid_argument("sample_sigma: z must be positive");
  std::normal_distribution<double> normal;
  double q = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double g = normal(rng);
    q += g * g;
  }
  return z * z / q;
}

double sample_sigma(double z, Seed seed) {
  Rng rng = make_rng(seed);
  return sample_sigma(z, rng);
}

}  // namespace bglab::gf
