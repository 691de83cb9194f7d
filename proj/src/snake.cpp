#include "bglab/snake.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bglab {

namespace {

struct StackPoint {
  double height;
  double value;
};

// Brownian bridge of duration 1 on k steps.
void brownian_bridge(std::size_t k, Rng& rng, std::vector<double>& out) {
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(k)));
  out.assign(k + 1, 0.0);
  for (std::size_t i = 1; i <= k; ++i) out[i] = out[i - 1] + normal(rng);
  const double end = out[k];
  for (std::size_t i = 0; i <= k; ++i) out[i] -= end * static_cast<double>(i) / static_cast<double>(k);
  out[k] = 0.0;
}

void check_index(const SnakePath& s, std::size_t i) {
  if (i >= s.lifetime.size()) throw std::out_of_range("snake index out of range");
}

}  // namespace

std::vector<std::string> validate_snake(const SnakePath& s) {
  std::vector<std::string> diag;
  if (s.lifetime.size() < 2) {
    diag.emplace_back("fewer than two grid points");
    return diag;
  }
  if (s.tip.size() != s.lifetime.size()) {
    diag.emplace_back("tip and lifetime sizes differ");
    return diag;
  }
  if (!(s.duration > 0.0) || !std::isfinite(s.duration)) diag.emplace_back("duration not positive");
  if (s.lifetime.front() != 0.0 || s.lifetime.back() != 0.0) {
    diag.emplace_back("lifetime not zero at both ends");
    return diag;
  }
  for (std::size_t i = 0; i < s.lifetime.size(); ++i) {
    if (!(s.lifetime[i] >= 0.0) || !std::isfinite(s.lifetime[i]) || !std::isfinite(s.tip[i])) {
      diag.emplace_back("lifetime negative or values not finite");
      return diag;
    }
  }
  if (s.tip.front() != s.basepoint_label) diag.emplace_back("tip at time 0 differs from basepoint");

  // Replay the active path from (lifetime, tip): an index whose lifetime
  // equals the height of a point still on the path is the same tree point.
  std::vector<StackPoint> path{{s.lifetime[0], s.tip[0]}};
  for (std::size_t i = 0; i + 1 < s.lifetime.size(); ++i) {
    const double z = s.lifetime[i + 1];
    while (path.back().height > z) path.pop_back();
    if (path.back().height == z) {
      if (path.back().value != s.tip[i + 1]) {
        diag.push_back("inconsistent tips at tree distance zero (index " + std::to_string(i + 1) + ")");
        break;
      }
    } else {
      path.push_back({z, s.tip[i + 1]});
    }
  }
  return diag;
}

std::vector<double> sample_excursion(std::size_t k, Rng& rng, ExcursionMethod method) {
  if (k < 2) throw std::invalid_argument("sample_excursion: k must be at least 2");
  std::vector<double> zeta(k + 1, 0.0), b;
  if (method == ExcursionMethod::bessel_bridge) {
    for (int d = 0; d < 3; ++d) {
      brownian_bridge(k, rng, b);
      for (std::size_t i = 0; i <= k; ++i) zeta[i] += b[i] * b[i];
    }
    for (double& z : zeta) z = std::sqrt(z);
  } else {
    brownian_bridge(k, rng, b);
    const auto m = static_cast<std::size_t>(std::min_element(b.begin(), b.end() - 1) - b.begin());
    for (std::size_t i = 0; i <= k; ++i) zeta[i] = b[(m + i) % k] - b[m];
  }
  zeta.front() = 0.0;
  zeta.back() = 0.0;
  return zeta;
}

std::vector<double> sample_excursion(std::size_t k, Seed seed, ExcursionMethod method) {
  Rng rng = make_rng(seed);
  return sample_excursion(k, rng, method);
}

SnakePath sample_snake(std::span<const double> lifetime, Rng& rng, double duration, double basepoint) {
  SnakePath s;
  s.duration = duration;
  s.lifetime.assign(lifetime.begin(), lifetime.end());
  s.basepoint_label = basepoint;
  s.tip.assign(lifetime.size(), basepoint);
  if (lifetime.size() < 2) throw std::invalid_argument("sample_snake: need at least two grid points");
  if (lifetime.front() != 0.0 || lifetime.back() != 0.0)
    throw std::invalid_argument("sample_snake: lifetime must vanish at both ends");
  for (double z : lifetime)
    if (!(z >= 0.0) || !std::isfinite(z)) throw std::invalid_argument("sample_snake: invalid lifetime");

  std::normal_distribution<double> normal;
  std::vector<StackPoint> path{{0.0, basepoint}};
  for (std::size_t i = 0; i + 1 < lifetime.size(); ++i) {
    const double z = lifetime[i + 1];
    const double h = std::min(lifetime[i], z);
    StackPoint above{};
    bool popped = false;
    while (path.back().height > h) {
      above = path.back();
      popped = true;
      path.pop_back();
    }
    const StackPoint below = path.back();
    if (below.height < h) {
      // Brownian bridge from `below` to `above`, evaluated at height h.
      double value = below.value;
      if (popped) {
        const double span = above.height - below.height;
        const double a = (h - below.height) / span;
        const double var = (h - below.height) * (above.height - h) / span;
        value = below.value + a * (above.value - below.value) + std::sqrt(var) * normal(rng);
      }
      path.push_back({h, value});
    }
    if (z > h) path.push_back({z, path.back().value + std::sqrt(z - h) * normal(rng)});
    s.tip[i + 1] = path.back().value;
  }
  return s;
}

SnakePath sample_snake(std::span<const double> lifetime, Seed seed, double duration, double basepoint) {
  Rng rng = make_rng(seed);
  return sample_snake(lifetime, rng, duration, basepoint);
}

double tree_distance(const SnakePath& s, std::size_t i, std::size_t j) {
  check_index(s, i);
  check_index(s, j);
  if (i > j) std::swap(i, j);
  const double m = *std::min_element(s.lifetime.begin() + static_cast<std::ptrdiff_t>(i),
                                     s.lifetime.begin() + static_cast<std::ptrdiff_t>(j) + 1);
  return s.lifetime[i] + s.lifetime[j] - 2.0 * m;
}

double interval_min_label(const SnakePath& s, std::size_t i, std::size_t j) {
  check_index(s, i);
  check_index(s, j);
  const auto begin = s.tip.begin();
  if (i <= j) return *std::min_element(begin + static_cast<std::ptrdiff_t>(i), begin + static_cast<std::ptrdiff_t>(j) + 1);
  return std::min(*std::min_element(begin + static_cast<std::ptrdiff_t>(i), s.tip.end()),
                  *std::min_element(begin, begin + static_cast<std::ptrdiff_t>(j) + 1));
}

RangeMin::RangeMin(std::span<const double> values) : n_(values.size()) {
  if (n_ == 0) return;
  table_.emplace_back(values.begin(), values.end());
  for (std::size_t len = 2; len <= n_; len *= 2) {
    const auto& prev = table_.back();
    std::vector<double> next(n_ - len + 1);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::min(prev[i], prev[i + len / 2]);
    table_.push_back(std::move(next));
  }
}

double RangeMin::min(std::size_t i, std::size_t j) const {
  if (i > j || j >= n_) throw std::out_of_range("RangeMin: bad range");
  const auto level = static_cast<std::size_t>(std::bit_width(j - i + 1) - 1);
  return std::min(table_[level][i], table_[level][j + 1 - (std::size_t{1} << level)]);
}

double RangeMin::cyclic_min(std::size_t i, std::size_t j) const {
  if (i <= j) return min(i, j);
  return std::min(min(i, n_ - 1), min(0, j));
}

std::vector<SnakePath> extract_excursions_above(const SnakePath& s, double r) {
  if (const auto diag = validate_snake(s); !diag.empty())
    throw std::invalid_argument("extract_excursions_above: invalid snake: " + diag.front());
  const std::size_t k = s.grid_size();
  constexpr int kNone = -1;
  struct Entry {
    double height;
    double value;
    int component;
  };
  std::vector<double> base_height;  // height of the last point <= r below each component
  auto open = [&](double h) {
    base_height.push_back(h);
    return static_cast<int>(base_height.size()) - 1;
  };

  std::vector<int> comp(k + 1, kNone);
  std::vector<Entry> path{{0.0, s.tip[0], kNone}};
  if (s.tip[0] > r) path[0].component = open(0.0);
  comp[0] = path[0].component;
  for (std::size_t i = 0; i < k; ++i) {
    const double z = s.lifetime[i + 1];
    const double w = s.tip[i + 1];
    const Entry* lowest_popped = nullptr;
    Entry popped{};
    while (path.back().height > z) {
      popped = path.back();
      lowest_popped = &popped;
      path.pop_back();
    }
    if (path.back().height < z) {
      const Entry& parent = path.back();
      int c = kNone;
      if (w > r) {
        if (parent.value > r)
          c = parent.component;
        else if (lowest_popped && lowest_popped->value > r)
          c = lowest_popped->component;
        else
          c = open(parent.height);
      }
      path.push_back({z, w, c});
    }
    comp[i + 1] = path.back().component;
  }

  const int root_component = path.front().component;
  std::vector<std::vector<std::size_t>> members(base_height.size());
  for (std::size_t i = 0; i < k; ++i)
    if (comp[i] != kNone) members[static_cast<std::size_t>(comp[i])].push_back(i);

  std::vector<SnakePath> out;
  out.reserve(members.size());
  const double step = s.step();
  for (std::size_t c = 0; c < members.size(); ++c) {
    const auto& idx = members[c];
    const auto m = idx.size();
    SnakePath e;
    if (static_cast<int>(c) == root_component) {
      e.duration = static_cast<double>(m) * step;
      for (std::size_t i : idx) {
        e.lifetime.push_back(s.lifetime[i]);
        e.tip.push_back(s.tip[i] - r);
      }
      e.lifetime.push_back(0.0);
      e.tip.push_back(s.tip[k] - r);
      e.basepoint_label = e.tip.front();
    } else {
      e.duration = static_cast<double>(m) * step;
      e.lifetime.reserve(m + 2);
      e.tip.reserve(m + 2);
      e.lifetime.push_back(0.0);
      e.tip.push_back(0.0);
      for (std::size_t i : idx) {
        e.lifetime.push_back(s.lifetime[i] - base_height[c]);
        e.tip.push_back(s.tip[i] - r);
      }
      e.lifetime.push_back(0.0);
      e.tip.push_back(0.0);
      e.basepoint_label = 0.0;
    }
    out.push_back(std::move(e));
  }
  return out;
}

double boundary_size_estimate(const SnakePath& s, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("boundary_size_estimate: eps must be positive");
  const std::size_t k = s.grid_size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (s.tip[i] < 0.0) throw std::invalid_argument("boundary_size_estimate: negative label");
    if (s.tip[i] > 0.0 && s.tip[i] < eps) ++count;
  }
  return static_cast<double>(count) * s.step() / (eps * eps);
}

double default_boundary_eps(const SnakePath& s) { return std::pow(s.step(), 0.25); }

}  // namespace bglab
