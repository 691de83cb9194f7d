#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bglab/rng.hpp"

namespace bglab::gf {

/// sqrt(3 / (2 pi)), the prefactor of psi.
double psi_prefactor();

/// psi(q) = c (-(8/3) q + int_{1/2}^1 (x^q - 1 + q (1 - x)) (x (1 - x))^{-5/2} dx)
/// by adaptive Gauss-Kronrod after the substitution x = 1 - u^2, which
/// removes the endpoint singularity. Throws std::invalid_argument for q < 0.
double psi(double q);

/// Same integral by a fixed-order composite Gauss-Legendre rule.
double psi_fixed_order(double q);

/// psi'(0) = c (-(8/3) + int (log x + 1 - x) (x (1 - x))^{-5/2} dx).
double psi_derivative_at_zero();

/// Decomposition of the Levy measure at a jump truncation eps: jumps of xi
/// equal log(1 - y) with y in (0, 1/2); those with y > eps are simulated
/// exactly, the rest are replaced by a drift and a Brownian part.
struct Truncation {
  double eps;
  double drift;           // total drift of xi per unit time
  double variance;        // Brownian variance per unit time
  double rate_main;       // rate of the c y^{-5/2} jump component on (eps, 1/2)
  double rate_proposal;   // proposal rate of the thinned correction component
};

Truncation truncation(double eps);

struct Jump {
  double time;
  double size;  // log x, in (-log 2, 0)
};

/// xi on the grid t_i = i * dt, i = 0..ceil(T/dt), and its jumps with
/// 1 - x > eps_j.
struct LevyPath {
  double dt = 0.0;
  std::vector<double> xi;
  std::vector<Jump> jumps;
};

/// Throws std::invalid_argument unless T > 0, dt > 0 and 0 < eps_j < 1/2.
LevyPath sample_levy(double horizon, double eps_j, double dt, Rng& rng);
LevyPath sample_levy(double horizon, double eps_j, double dt, Seed seed);

/// Mass path of the self-similar Markov process started from z: heights
/// t(u) = sqrt(z) int_0^u exp(xi_s / 2) ds (trapezoid rule on the grid) and
/// masses z exp(xi_u). The process is absorbed at the height reached at the
/// end of the Levy path.
struct MassPath {
  std::vector<double> height;
  std::vector<double> mass;
  double absorption_height = 0.0;

  /// Mass at height t: the last grid value at or below t, 0 once absorbed.
  double at(double t) const;
};

/// Throws std::invalid_argument for z <= 0.
MassPath lamperti(const LevyPath& path, double z);

struct CascadeOptions {
  double dxi = 0.05;          // xi-time step while the particle can still have children
  double dxi_coarse = 0.1;    // xi-time step once the mass is below m_min
  double eps_cap = 0.25;      // jumps with 1 - x above this are always exact
  double stop_ratio = 1e-4;   // a particle is stopped once its mass < stop_ratio * m_min
  bool record_paths = true;   // keep (height, mass) points of every particle
};

struct Particle {
  double birth_height = 0.0;
  double initial_mass = 0.0;
  double absorption_height = 0.0;
  std::int64_t parent = -1;
  std::vector<std::uint32_t> children;
  /// (height, mass) at step ends, plus the masses just before and after
  /// every jump that spawned a child. Empty unless record_paths.
  std::vector<std::pair<double, double>> path;
};

struct Cascade {
  double z = 0.0;
  double m_min = 0.0;
  std::vector<Particle> particles;  // particles[0] is the Eve particle
  double h_star = 0.0;

  /// Masses of the particles alive at height r, in decreasing order.
  /// Needs recorded paths.
  std::vector<double> ranked_masses(double r) const;
};

/// Growth-fragmentation cascade from an Eve particle of mass z. Every
/// negative jump of a mass path spawns a particle of mass -Delta X at the
/// jump height; particles of initial mass below m_min are dropped.
/// H* is the largest absorption height. Throws for z <= 0 or m_min <= 0.
Cascade simulate_cascade(double z, double m_min, Rng& rng, const CascadeOptions& options = {});
Cascade simulate_cascade(double z, double m_min, Seed seed, const CascadeOptions& options = {});

struct CascadeSummary {
  double h_star;
  std::size_t particles;
};

/// simulate_cascade without storing particles; same random stream, so H*
/// agrees with simulate_cascade for the same seed.
CascadeSummary extinction_height(double z, double m_min, Seed seed, CascadeOptions options = {});

struct TailFit {
  double slope;
  double band_lo;  // 95% bootstrap band
  double band_hi;
  double r_lo;
  double r_hi;
  std::size_t points;
};

inline constexpr std::size_t kMinTailSamples = 10000;

/// Least-squares slope of log P(H* > r) against log r at 16 log-spaced radii
/// in [r_lo, r_hi], with a multinomial bootstrap band. Throws
/// std::invalid_argument for fewer than kMinTailSamples samples or when the
/// window holds too few distinct survival values.
TailFit extinction_tail(std::span<const double> samples, double r_lo, double r_hi,
                        Seed bootstrap_seed = 1);

/// Window [r_lo, r_hi] between the empirical survival levels s_hi > s_lo.
std::pair<double, double> survival_window(std::span<const double> samples, double s_hi, double s_lo);

/// f(z, s) = (sqrt(3) / (2 pi)) sqrt(z) s^{-5/2} exp(-z^2 / (2 s)).
double density_f(double z, double s);
/// g_z(s) = (2 pi)^{-1/2} z^3 s^{-5/2} exp(-z^2 / (2 s)).
double density_g(double z, double s);
/// z^2 / Q with Q chi-square with 3 degrees of freedom (sum of three
/// squared standard normals).
double sample_sigma(double z, Rng& rng);
double sample_sigma(double z, Seed seed);

}  // namespace bglab::gf
