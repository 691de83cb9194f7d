// bglab: command-line front end.
//
// Exit codes: 0 ok, 1 invariant or diagnostic failure, 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bglab/errors.hpp"
#include "bglab/growth_frag.hpp"
#include "bglab/parallel.hpp"
#include "bglab/planar_map.hpp"
#include "bglab/plane_tree.hpp"
#include "bglab/snake.hpp"
#include "experiments.hpp"
#include "report.hpp"

#ifndef BGLAB_VERSION
#define BGLAB_VERSION "unknown"
#endif

namespace {

using namespace bglab;
using cli::Cell;
using cli::Format;
using cli::Json;
using cli::Report;

constexpr int kUsage = 2;
constexpr int kDiagnostic = 1;

// Usage problems detected after parsing (missing seed and the like).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  std::size_t samples = 0;
  std::optional<std::uint64_t> seed;
  double eps = 0.0;
  double mmin = 0.0;
  double level = 0.0;
  unsigned threads = 0;
  std::string out;
  Format format = Format::csv;
  double z = 1.0;
  std::optional<double> q;
  bool exhaustive = false;
  std::string file;

  Seed require_seed() const {
    if (!seed) throw UsageError("--seed is required for this command");
    return *seed;
  }
  unsigned worker_count() const { return threads ? threads : default_thread_count(); }
};

Json versions() {
  Json v;
  v["bglab"] = BGLAB_VERSION;
  v["compiler"] = __VERSION__;
  v["rng"] = "mt19937_64 seeded with splitmix64(seed)";
  v["replica_seed"] = "splitmix64(seed + 0x9E3779B97F4A7C15 * (replica + 1))";
  return v;
}

Json meta(const std::string& command, Json config, const Options& o) {
  Json j;
  j["command"] = command;
  j["config"] = std::move(config);
  j["seed"] = o.seed ? Json(*o.seed) : Json(nullptr);
  j["versions"] = versions();
  return j;
}

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("cannot open " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void emit(const Report& r, const Options& o) {
  Sink sink(o.out);
  r.write(sink.stream(), o.format);
}

std::string join(std::span<const int> xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + std::to_string(xs[i]);
  return s;
}

// ---------------------------------------------------------------- tree

int tree_sample(const Options& o) {
  const Seed seed = o.require_seed();
  const std::size_t count = o.samples ? o.samples : 1;
  Report r(meta("tree sample", {{"n", o.n}, {"samples", count}}, o), {"replica", "dyck", "labels"});
  std::vector<std::optional<LabeledPlaneTree>> trees(count);
  parallel_for(count, o.worker_count(), [&](std::size_t i) {
    Rng rng = make_rng(derive_seed(seed, i));
    trees[i] = sample_labels(sample_plane_tree(o.n, rng), rng);
  });
  for (std::size_t i = 0; i < count; ++i)
    r.add_row({std::uint64_t{i}, trees[i]->tree().dyck_word(), join(trees[i]->labels())});
  emit(r, o);
  return 0;
}

int tree_enumerate(const Options& o) {
  Report r(meta("tree enumerate", {{"n", o.n}}, o), {"index", "dyck"});
  const auto trees = enumerate_plane_trees(o.n);
  for (std::size_t i = 0; i < trees.size(); ++i) r.add_row({std::uint64_t{i}, trees[i].dyck_word()});
  r.summary()["count"] = trees.size();
  emit(r, o);
  return 0;
}

// ---------------------------------------------------------------- map

int map_sample(const Options& o) {
  const Seed seed = o.require_seed();
  Rng rng = make_rng(seed);
  const auto t = sample_labels(sample_plane_tree(o.n, rng), rng);
  const int eps = std::bernoulli_distribution(0.5)(rng) ? 1 : -1;
  const auto q = schaeffer_forward(t, eps);
  const Json m = meta("map sample", {{"n", o.n}, {"eps", eps}, {"tree", encode_tree(t)}}, o);
  Sink sink(o.out);
  if (o.format == Format::json) {
    Json doc;
    doc["meta"] = m;
    doc["map"] = encode_map(q.map, q.point);
    sink.stream() << doc.dump(2) << '\n';
  } else {
    sink.stream() << "# " << m.dump() << '\n' << encode_map(q.map, q.point);
  }
  return 0;
}

int map_check(const Options& o) {
  std::ifstream in(o.file, std::ios::binary);
  if (!in) throw UsageError("cannot read " + o.file);
  std::string text, line;
  while (std::getline(in, line))
    if (!line.starts_with('#')) text += line + '\n';

  std::vector<std::string> diag;
  std::optional<DecodedMap> decoded;
  try {
    decoded = decode_map(text);
    diag = validate_quadrangulation(decoded->map, decoded->point);
  } catch (const std::exception& e) {
    diag.emplace_back(e.what());
  }
  Report r(meta("map check", {{"file", o.file}}, o), {"faces", "vertices", "edges", "status"});
  if (decoded && diag.empty()) {
    const auto& mp = decoded->map;
    r.add_row({std::uint64_t{mp.face_count()}, std::uint64_t{mp.vertex_count()}, std::uint64_t{mp.edge_count()},
               std::string("OK")});
    emit(r, o);
    return 0;
  }
  for (const auto& d : diag) std::cerr << "map check: " << d << '\n';
  return kDiagnostic;
}

int map_roundtrip(const Options& o) {
  const unsigned threads = o.worker_count();
  experiments::BijectionCheck c;
  Json config{{"n", o.n}, {"exhaustive", o.exhaustive}};
  if (o.exhaustive) {
    c = experiments::bijection_exhaustive(o.n, threads);
  } else {
    const std::size_t count = o.samples ? o.samples : 10000;
    config["samples"] = count;
    c = experiments::bijection_random(count, o.n, o.require_seed(), threads);
  }
  const Json m = meta("map roundtrip", config, o);
  Sink sink(o.out);
  std::ostream& os = sink.stream();
  if (o.format == Format::json) {
    Json doc{{"meta", m},
             {"cases", c.cases},
             {"bijection_failures", c.bijection_failures},
             {"distance_failures", c.distance_failures}};
    if (!c.ok()) doc["first_failure"] = c.first_failure;
    os << doc.dump(2) << '\n';
  } else {
    os << "# " << m.dump() << '\n';
    if (c.ok())
      os << "OK " << c.cases << " cases\n";
    else
      os << "FAIL " << c.bijection_failures << " bijection and " << c.distance_failures
         << " distance failures in " << c.cases << " cases; first: " << c.first_failure << '\n';
  }
  return c.ok() ? 0 : kDiagnostic;
}

// ---------------------------------------------------------------- snake

int snake_sample(const Options& o) {
  Rng rng = make_rng(o.require_seed());
  const auto zeta = sample_excursion(o.k, rng);
  const auto s = sample_snake(zeta, rng);
  Json config{{"k", o.k}, {"excursion", "bessel_bridge"}};
  Json m = meta("snake sample", config, o);
  m["duration"] = s.duration;
  m["grid_size"] = s.grid_size();
  Report r(m, {"i", "zeta", "what"});
  for (std::size_t i = 0; i < s.lifetime.size(); ++i) r.add_row({std::uint64_t{i}, s.lifetime[i], s.tip[i]});
  emit(r, o);
  if (!o.out.empty()) {
    std::ofstream side(o.out + ".json", std::ios::binary);
    side << m.dump(2) << '\n';
  }
  return 0;
}

int snake_excursions(const Options& o) {
  Rng rng = make_rng(o.require_seed());
  const auto s = sample_snake(sample_excursion(o.k, rng), rng);
  const auto parts = extract_excursions_above(s, o.level);
  Report r(meta("snake excursions", {{"k", o.k}, {"level", o.level}, {"eps", o.eps}}, o),
           {"component", "duration", "grid_size", "max_label", "boundary_size"});
  double total = 0.0;
  for (std::size_t c = 0; c < parts.size(); ++c) {
    const auto& e = parts[c];
    if (e.tip.front() != 0.0) continue;  // component containing the root: no boundary at time 0
    const double eps = o.eps > 0.0 ? o.eps : default_boundary_eps(e);
    const double size = boundary_size_estimate(e, eps);
    total += size;
    r.add_row({std::uint64_t{c}, e.duration, std::uint64_t{e.grid_size()},
               *std::max_element(e.tip.begin(), e.tip.end()), size});
  }
  r.summary()["components"] = parts.size();
  r.summary()["total_boundary_size"] = total;
  emit(r, o);
  return 0;
}

// ---------------------------------------------------------------- metric

int map2pt(const Options& o) {
  const auto tp = experiments::two_point(o.n, o.k, o.samples, o.require_seed(), o.worker_count());
  Report r(meta("map2pt", {{"n", o.n}, {"k", o.k}, {"samples", o.samples}}, o),
           {"replica", "discrete", "continuum"});
  for (std::size_t i = 0; i < o.samples; ++i) r.add_row({std::uint64_t{i}, tp.discrete[i], tp.continuum[i]});
  r.summary()["ks"] = tp.ks;
  r.summary()["p_value"] = stats::ks_two_sample_p(tp.ks, o.samples, o.samples);
  emit(r, o);
  return 0;
}

int dim(const Options& o) {
  const auto d = experiments::dimension(o.k, o.m, o.samples, experiments::kDimensionWindow.first,
                                        experiments::kDimensionWindow.second, o.require_seed(),
                                        o.worker_count());
  Report r(meta("dim",
                {{"k", o.k}, {"m", o.m}, {"samples", o.samples}, {"r_lo", d.r_lo}, {"r_hi", d.r_hi}}, o),
           {"radius", "volume"});
  for (std::size_t i = 0; i < d.radii.size(); ++i) r.add_row({d.radii[i], d.mean_volume[i]});
  r.summary()["slope"] = d.fit.slope;
  r.summary()["slope_std_error"] = d.fit.slope_std_error;
  r.summary()["basepoint_failures"] = d.basepoint_failures;
  emit(r, o);
  return d.basepoint_failures ? kDiagnostic : 0;
}

int disk_slice(const Options& o) {
  const auto v = experiments::disk_slices(o.k, o.m, o.samples, o.level, experiments::kNearBoundary,
                                          o.require_seed(), o.worker_count());
  Report r(meta("disk slice",
                {{"k", o.k}, {"m", o.m}, {"samples", o.samples}, {"level", o.level},
                 {"near_boundary", experiments::kNearBoundary}},
                o),
           {"instance", "duration", "grid_size", "points", "boundary_error", "boundary_size"});
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    r.add_row({std::uint64_t{i}, v[i].duration, std::uint64_t{v[i].grid}, std::uint64_t{v[i].points}, v[i].error,
               v[i].boundary_size});
    sum += v[i].error;
  }
  r.summary()["mean_boundary_error"] = v.empty() ? 0.0 : sum / static_cast<double>(v.size());
  emit(r, o);
  return 0;
}

// ---------------------------------------------------------------- gf

int gf_psi(const Options& o) {
  Report r(meta("gf psi", {{"q", o.q ? Json(*o.q) : Json("table")}}, o), {"q", "psi", "psi_fixed_order"});
  std::vector<double> qs;
  if (o.q)
    qs.push_back(*o.q);
  else
    for (int i = 0; i <= 20; ++i) qs.push_back(0.25 * i);
  for (double q : qs) r.add_row({q, gf::psi(q), gf::psi_fixed_order(q)});
  emit(r, o);
  return 0;
}

int gf_simulate(const Options& o) {
  const std::size_t count = o.samples ? o.samples : 1;
  const auto v = experiments::cascades(o.z, o.mmin, count, o.require_seed(), o.worker_count());
  Report r(meta("gf simulate", {{"z", o.z}, {"mmin", o.mmin}, {"samples", count}}, o),
           {"replica", "h_star", "particles"});
  for (std::size_t i = 0; i < count; ++i) r.add_row({std::uint64_t{i}, v[i].h_star, std::uint64_t{v[i].particles}});
  emit(r, o);
  return 0;
}

int gf_tail(const Options& o) {
  const Seed seed = o.require_seed();
  const auto v = experiments::cascades(o.z, o.mmin, o.samples, seed, o.worker_count());
  std::vector<double> h;
  for (const auto& c : v) h.push_back(c.h_star);
  const auto [lo, hi] = gf::survival_window(h, experiments::kTailSurvival.first, experiments::kTailSurvival.second);
  const auto fit = gf::extinction_tail(h, lo, hi, derive_seed(seed, o.samples));
  Report r(meta("gf tail", {{"z", o.z}, {"mmin", o.mmin}, {"samples", o.samples}}, o), {"r", "survival"});
  std::vector<double> sorted = h;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < fit.points; ++i) {
    const double rad = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(fit.points - 1));
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), rad);
    r.add_row({rad, static_cast<double>(above) / static_cast<double>(sorted.size())});
  }
  r.summary()["slope"] = fit.slope;
  r.summary()["band"] = {fit.band_lo, fit.band_hi};
  r.summary()["window"] = {fit.r_lo, fit.r_hi};
  emit(r, o);
  return 0;
}

int density_check(const Options& o) {
  const std::size_t draws = o.samples ? o.samples : 100000;
  const auto mo = experiments::density_moments(o.z);
  const double ks = experiments::sigma_ks(o.z, draws, o.require_seed(), o.worker_count());
  Report r(meta("density check", {{"z", o.z}, {"samples", draws}}, o), {"z", "integral", "mean", "ks"});
  r.add_row({o.z, mo.integral, mo.mean, ks});
  emit(r, o);
  return 0;
}

// ---------------------------------------------------------------- parsing

void add_common(CLI::App* cmd, Options& o, bool stochastic) {
  if (stochastic) cmd->add_option("--seed", o.seed, "64-bit base seed");
  cmd->add_option("--threads", o.threads, "worker threads (default: $BGLAB_THREADS or all cores)");
  cmd->add_option("--out", o.out, "output file (default: stdout)");
  cmd->add_option("--format", o.format, "output format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"csv", Format::csv}, {"json", Format::json}}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brownian geometry laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", BGLAB_VERSION);
  Options o;
  std::function<int()> run;
  auto bind = [&](CLI::App* cmd, int (*fn)(const Options&)) { cmd->callback([&run, &o, fn] { run = [&o, fn] { return fn(o); }; }); };
  const auto positive = CLI::PositiveNumber;

  auto* tree = app.add_subcommand("tree", "plane trees")->require_subcommand(1);
  {
    auto* c = tree->add_subcommand("sample", "uniform labeled plane trees");
    c->add_option("--n", o.n, "edges")->required()->check(positive);
    c->add_option("--samples", o.samples, "number of trees (default 1)");
    add_common(c, o, true);
    bind(c, tree_sample);
    c = tree->add_subcommand("enumerate", "all plane trees with n edges, n <= 10");
    c->add_option("--n", o.n, "edges")->required()->check(CLI::Range(0, 10));
    add_common(c, o, false);
    bind(c, tree_enumerate);
  }
  auto* map = app.add_subcommand("map", "quadrangulations")->require_subcommand(1);
  {
    auto* c = map->add_subcommand("sample", "uniform pointed rooted quadrangulation");
    c->add_option("--n", o.n, "faces")->required()->check(positive);
    add_common(c, o, true);
    bind(c, map_sample);
    c = map->add_subcommand("check", "validate a map file");
    c->add_option("file", o.file, "map file")->required();
    add_common(c, o, false);
    bind(c, map_check);
    c = map->add_subcommand("roundtrip", "inverse(forward(t)) == t and the distance identity");
    c->add_option("--n", o.n, "largest tree size")->required()->check(positive);
    c->add_flag("--exhaustive", o.exhaustive, "all labeled trees with at most n edges, both signs");
    c->add_option("--samples", o.samples, "random cases (default 10000)");
    add_common(c, o, true);
    bind(c, map_roundtrip);
  }
  auto* snake = app.add_subcommand("snake", "Brownian snake")->require_subcommand(1);
  {
    auto* c = snake->add_subcommand("sample", "snake driven by a normalized excursion");
    c->add_option("--k", o.k, "grid steps")->required()->check(CLI::Range(2ul, 1ul << 28));
    add_common(c, o, true);
    bind(c, snake_sample);
    c = snake->add_subcommand("excursions", "excursions above a level and their boundary sizes");
    c->add_option("--k", o.k, "grid steps")->required()->check(CLI::Range(2ul, 1ul << 28));
    c->add_option("--level", o.level, "level r");
    c->add_option("--eps", o.eps, "boundary-size window (default step^(1/4) per component)")
        ->check(CLI::NonNegativeNumber);
    add_common(c, o, true);
    bind(c, snake_excursions);
  }
  {
    auto* c = app.add_subcommand("map2pt", "two-point function: quadrangulation vs Brownian map");
    c->add_option("--n", o.n, "faces")->required()->check(positive);
    c->add_option("--k", o.k, "snake grid steps")->required()->check(CLI::Range(2ul, 1ul << 28));
    c->add_option("--samples", o.samples, "draws of each")->required()->check(positive);
    add_common(c, o, true);
    bind(c, map2pt);
    c = app.add_subcommand("dim", "mean ball-volume profile at x* and its log-log slope");
    c->add_option("--k", o.k, "snake grid steps")->required()->check(CLI::Range(2ul, 1ul << 28));
    c->add_option("--m", o.m, "cloud size")->required()->check(positive);
    c->add_option("--samples", o.samples, "instances")->required()->check(positive);
    add_common(c, o, true);
    bind(c, dim);
  }
  auto* disk = app.add_subcommand("disk", "Brownian disk")->require_subcommand(1);
  {
    auto* c = disk->add_subcommand("slice", "disk clouds on the longest excursion above a level");
    c->add_option("--k", o.k, "snake grid steps")->required()->check(CLI::Range(2ul, 1ul << 28));
    c->add_option("--m", o.m, "cloud size")->required()->check(positive);
    c->add_option("--samples", o.samples, "instances")->required()->check(positive);
    c->add_option("--level", o.level, "level r (default 0)");
    add_common(c, o, true);
    bind(c, disk_slice);
  }
  auto* gf = app.add_subcommand("gf", "growth-fragmentation")->require_subcommand(1);
  {
    auto* c = gf->add_subcommand("psi", "Levy exponent psi(q)");
    c->add_option("--q", o.q, "argument (default: table on [0, 5])")->check(CLI::NonNegativeNumber);
    add_common(c, o, false);
    bind(c, gf_psi);
    c = gf->add_subcommand("simulate", "cascades: extinction height and particle count");
    c->add_option("--z", o.z, "initial mass (default 1)")->check(positive);
    c->add_option("--mmin", o.mmin, "smallest simulated mass")->required()->check(positive);
    c->add_option("--samples", o.samples, "cascades (default 1)");
    add_common(c, o, true);
    bind(c, gf_simulate);
    c = gf->add_subcommand("tail", "survival function of H* and its log-log slope");
    c->add_option("--z", o.z, "initial mass (default 1)")->check(positive);
    c->add_option("--mmin", o.mmin, "smallest simulated mass")->required()->check(positive);
    c->add_option("--samples", o.samples, "cascades")
        ->required()
        ->check(CLI::Range(gf::kMinTailSamples, std::size_t{1} << 40));
    add_common(c, o, true);
    bind(c, gf_tail);
  }
  auto* density = app.add_subcommand("density", "disk densities")->require_subcommand(1);
  {
    auto* c = density->add_subcommand("check", "normalization, mean and sampler of g_z");
    c->add_option("--z", o.z, "z (default 1)")->check(positive);
    c->add_option("--samples", o.samples, "draws (default 100000)");
    add_common(c, o, true);
    bind(c, density_check);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    return run();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kDiagnostic;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDiagnostic;
  }
}
