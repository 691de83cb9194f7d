#include "bglab/planar_map.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <stdexcept>

#include "bglab/errors.hpp"

namespace bglab {

namespace {

bool is_permutation_of_range(const std::vector<HalfEdge>& p) {
  std::vector<char> seen(p.size(), 0);
  for (HalfEdge x : p) {
    if (x >= p.size() || seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

// Cycle index of every element of permutation p; returns the number of cycles.
// Cycles are numbered in order of their smallest element.
std::size_t cycle_ids(const std::vector<HalfEdge>& p, std::vector<std::uint32_t>& id) {
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  id.assign(p.size(), kUnset);
  std::uint32_t next = 0;
  for (std::size_t start = 0; start < p.size(); ++start) {
    if (id[start] != kUnset) continue;
    for (auto h = static_cast<HalfEdge>(start); id[h] == kUnset; h = p[h]) id[h] = next;
    ++next;
  }
  return next;
}

bool transitive(const std::vector<HalfEdge>& alpha, const std::vector<HalfEdge>& sigma) {
  if (alpha.empty()) return true;
  std::vector<char> seen(alpha.size(), 0);
  std::vector<HalfEdge> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const HalfEdge h = stack.back();
    stack.pop_back();
    for (HalfEdge g : {alpha[h], sigma[h]}) {
      if (!seen[g]) {
        seen[g] = 1;
        ++reached;
        stack.push_back(g);
      }
    }
  }
  return reached == alpha.size();
}

std::vector<HalfEdge> compose(const std::vector<HalfEdge>& outer, const std::vector<HalfEdge>& inner) {
  std::vector<HalfEdge> r(inner.size());
  for (std::size_t h = 0; h < inner.size(); ++h) r[h] = outer[inner[h]];
  return r;
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) {
    if (!s.empty()) s += "; ";
    s += p;
  }
  return s;
}

}  // namespace

std::vector<std::string> validate_map(const MapData& m) {
  std::vector<std::string> diag;
  const std::size_t H = m.alpha.size();
  if (H == 0) {
    diag.emplace_back("no half-edges");
    return diag;
  }
  if (H % 2 != 0) diag.emplace_back("half-edge count not even");
  if (H > std::numeric_limits<HalfEdge>::max() / 2) diag.emplace_back("too many half-edges");
  if (m.sigma.size() != H) {
    diag.emplace_back("sigma size differs from alpha size");
    return diag;
  }
  bool alpha_ok = is_permutation_of_range(m.alpha);
  if (!alpha_ok) {
    diag.emplace_back("alpha not a permutation");
  } else {
    bool involution = true, fixed_point_free = true;
    for (std::size_t h = 0; h < H; ++h) {
      if (m.alpha[m.alpha[h]] != h) involution = false;
      if (m.alpha[h] == h) fixed_point_free = false;
    }
    if (!involution) diag.emplace_back("alpha not an involution");
    if (!fixed_point_free) diag.emplace_back("alpha not fixed-point-free");
    alpha_ok = involution && fixed_point_free;
  }
  const bool sigma_ok = is_permutation_of_range(m.sigma);
  if (!sigma_ok) diag.emplace_back("sigma not a permutation");
  if (m.root >= H) diag.emplace_back("root out of range");
  if (!alpha_ok || !sigma_ok) return diag;

  if (!transitive(m.alpha, m.sigma)) {
    diag.emplace_back("not transitive");
    return diag;
  }

  std::vector<std::uint32_t> vid;
  const std::size_t V = cycle_ids(m.sigma, vid);
  if (!m.vertex_of.empty()) {
    if (m.vertex_of.size() != H) {
      diag.emplace_back("vertex_of size differs from half-edge count");
    } else {
      // vertex_of must induce a bijection between sigma cycles and 0..V-1.
      std::vector<VertexId> cycle_to_vertex(V, kNoVertex);
      std::vector<char> used(V, 0);
      bool ok = true;
      for (std::size_t h = 0; h < H && ok; ++h) {
        const VertexId v = m.vertex_of[h];
        if (v >= V) {
          ok = false;
        } else if (cycle_to_vertex[vid[h]] == kNoVertex) {
          if (used[v]) ok = false;
          cycle_to_vertex[vid[h]] = v;
          used[v] = 1;
        } else if (cycle_to_vertex[vid[h]] != v) {
          ok = false;
        }
      }
      if (!ok) diag.emplace_back("vertex_of not a bijection from sigma cycles onto 0..V-1");
    }
  }

  std::vector<std::uint32_t> fid;
  const std::size_t F = cycle_ids(compose(m.sigma, m.alpha), fid);
  const long euler = static_cast<long>(V) - static_cast<long>(H / 2) + static_cast<long>(F);
  if (euler != 2) diag.push_back("Euler relation fails: V - E + F = " + std::to_string(euler));
  return diag;
}

CombinatorialMap::CombinatorialMap(MapData data) {
  const auto diag = validate_map(data);
  if (!diag.empty()) throw InvariantError("invalid map: " + join(diag));
  alpha_ = std::move(data.alpha);
  sigma_ = std::move(data.sigma);
  root_ = data.root;
  std::vector<std::uint32_t> ids;
  vertex_count_ = cycle_ids(sigma_, ids);
  vertex_of_ = data.vertex_of.empty() ? std::move(ids) : std::move(data.vertex_of);
  face_count_ = cycle_ids(compose(sigma_, alpha_), ids);
}

std::vector<std::vector<HalfEdge>> CombinatorialMap::faces() const {
  std::vector<std::vector<HalfEdge>> out;
  std::vector<char> seen(half_edge_count(), 0);
  for (std::size_t start = 0; start < half_edge_count(); ++start) {
    if (seen[start]) continue;
    auto& face = out.emplace_back();
    for (auto h = static_cast<HalfEdge>(start); !seen[h]; h = phi(h)) {
      seen[h] = 1;
      face.push_back(h);
    }
  }
  return out;
}

CanonicalMap canonical_form(const CombinatorialMap& m, std::optional<VertexId> point) {
  const std::size_t H = m.half_edge_count();
  constexpr auto kUnset = std::numeric_limits<HalfEdge>::max();
  std::vector<HalfEdge> relabel(H, kUnset), order;
  order.reserve(H);
  relabel[m.root()] = 0;
  order.push_back(m.root());
  for (std::size_t head = 0; head < order.size(); ++head) {
    const HalfEdge h = order[head];
    for (HalfEdge g : {m.sigma(h), m.alpha(h)}) {
      if (relabel[g] == kUnset) {
        relabel[g] = static_cast<HalfEdge>(order.size());
        order.push_back(g);
      }
    }
  }
  CanonicalMap c;
  c.alpha.resize(H);
  c.sigma.resize(H);
  for (std::size_t i = 0; i < H; ++i) {
    c.alpha[i] = relabel[m.alpha(order[i])];
    c.sigma[i] = relabel[m.sigma(order[i])];
  }
  if (point) {
    HalfEdge best = kUnset;
    for (std::size_t h = 0; h < H; ++h)
      if (m.origin(static_cast<HalfEdge>(h)) == *point) best = std::min(best, relabel[h]);
    if (best == kUnset) throw std::out_of_range("point is not a vertex of the map");
    c.point = best;
  }
  return c;
}

bool isomorphic(const CombinatorialMap& a, const CombinatorialMap& b) {
  return a.half_edge_count() == b.half_edge_count() && canonical_form(a) == canonical_form(b);
}

bool operator==(const PointedQuadrangulation& a, const PointedQuadrangulation& b) {
  return a.map.half_edge_count() == b.map.half_edge_count() &&
         canonical_form(a.map, a.point) == canonical_form(b.map, b.point);
}

std::vector<std::string> validate_quadrangulation(const CombinatorialMap& m, VertexId point) {
  std::vector<std::string> diag;
  const std::size_t n = m.face_count();
  for (const auto& f : m.faces()) {
    if (f.size() != 4) {
      diag.push_back("face of degree " + std::to_string(f.size()));
      break;
    }
  }
  if (m.edge_count() != 2 * n) diag.emplace_back("edge count is not twice the face count");
  if (m.vertex_count() != n + 2) diag.emplace_back("vertex count is not face count + 2");
  if (point >= m.vertex_count()) diag.emplace_back("point is not a vertex");
  return diag;
}

std::vector<std::uint32_t> bfs_distances(const CombinatorialMap& m, VertexId source) {
  const std::size_t V = m.vertex_count();
  if (source >= V) throw std::out_of_range("bfs_distances: unknown vertex");
  const std::size_t H = m.half_edge_count();
  // CSR adjacency: neighbors of v are the targets of half-edges leaving v.
  std::vector<std::uint32_t> begin(V + 1, 0);
  for (std::size_t h = 0; h < H; ++h) ++begin[m.origin(static_cast<HalfEdge>(h)) + 1];
  for (std::size_t v = 0; v < V; ++v) begin[v + 1] += begin[v];
  std::vector<VertexId> adj(H);
  std::vector<std::uint32_t> fill(begin.begin(), begin.end() - 1);
  for (std::size_t h = 0; h < H; ++h) {
    const auto he = static_cast<HalfEdge>(h);
    adj[fill[m.origin(he)]++] = m.target(he);
  }
  std::vector<std::uint32_t> dist(V, kUnreachable);
  std::vector<VertexId> queue;
  queue.reserve(V);
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    for (std::uint32_t k = begin[v]; k < begin[v + 1]; ++k) {
      const VertexId w = adj[k];
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

namespace {

void append_list(std::string& s, std::span<const HalfEdge> xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s.push_back(',');
    s += std::to_string(xs[i]);
  }
}

std::string_view take_line(std::string_view& text) {
  const auto nl = text.find('\n');
  std::string_view line = text.substr(0, nl);
  text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::string_view field(std::string_view& text, std::string_view key) {
  const std::string_view line = take_line(text);
  if (!line.starts_with(key) || line.size() <= key.size() || line[key.size()] != ':')
    throw std::invalid_argument("map record: expected line " + std::string(key));
  return line.substr(key.size() + 1);
}

std::uint32_t parse_u32(std::string_view tok) {
  std::uint32_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
    throw std::invalid_argument("map record: malformed integer '" + std::string(tok) + "'");
  return v;
}

std::vector<HalfEdge> parse_list(std::string_view s, std::size_t expected) {
  std::vector<HalfEdge> out;
  out.reserve(expected);
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_u32(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  if (out.size() != expected) throw std::invalid_argument("map record: permutation has wrong length");
  return out;
}

}  // namespace

std::string encode_map(const CombinatorialMap& m, VertexId point) {
  if (point >= m.vertex_count()) throw std::out_of_range("encode_map: unknown point");
  // Convert the point to the numbering of sigma cycles by smallest half-edge.
  VertexId derived = 0;
  std::vector<char> seen_vertex(m.vertex_count(), 0);
  for (std::size_t h = 0; h < m.half_edge_count(); ++h) {
    const VertexId v = m.origin(static_cast<HalfEdge>(h));
    if (seen_vertex[v]) continue;
    if (v == point) break;
    seen_vertex[v] = 1;
    ++derived;
  }
  std::string s = "HALFEDGES:" + std::to_string(m.half_edge_count()) + "\nALPHA:";
  append_list(s, m.alpha());
  s += "\nSIGMA:";
  append_list(s, m.sigma());
  s += "\nROOT:" + std::to_string(m.root()) + "\nPOINT:" + std::to_string(derived) + "\n";
  return s;
}

DecodedMap decode_map(std::string_view text) {
  const std::uint32_t H = parse_u32(field(text, "HALFEDGES"));
  if (H == 0) throw std::invalid_argument("map record: no half-edges");
  MapData data;
  data.alpha = parse_list(field(text, "ALPHA"), H);
  data.sigma = parse_list(field(text, "SIGMA"), H);
  data.root = parse_u32(field(text, "ROOT"));
  const VertexId point = parse_u32(field(text, "POINT"));
  while (!text.empty()) {
    if (!take_line(text).empty()) throw std::invalid_argument("map record: trailing content");
  }
  CombinatorialMap map(std::move(data));
  if (point >= map.vertex_count()) throw std::invalid_argument("map record: POINT out of range");
  return {std::move(map), point};
}

}  // namespace bglab
