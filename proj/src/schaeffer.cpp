#include <algorithm>
#include <limits>
#include <stdexcept>

#include "bglab/errors.hpp"
#include "bglab/planar_map.hpp"

namespace bglab {

namespace {

constexpr std::uint32_t kToPoint = std::numeric_limits<std::uint32_t>::max();

// Successor of every corner: index of the next corner (cyclically) whose
// label is one less, or kToPoint for corners carrying the minimal label.
std::vector<std::uint32_t> successors(const std::vector<int>& lab, int min_label) {
  const std::size_t m = lab.size();
  const int max_label = *std::max_element(lab.begin(), lab.end());
  std::vector<std::uint32_t> last(static_cast<std::size_t>(max_label - min_label) + 1, kToPoint);
  std::vector<std::uint32_t> succ(m, kToPoint);
  for (std::size_t q = 2 * m; q-- > 0;) {
    const std::size_t i = q % m;
    const auto level = static_cast<std::size_t>(lab[i] - min_label);
    if (q < m && level > 0) succ[i] = last[level - 1];
    last[level] = static_cast<std::uint32_t>(i);
  }
  return succ;
}

}  // namespace

PointedQuadrangulation schaeffer_forward(const LabeledPlaneTree& t, int eps) {
  if (eps != 1 && eps != -1) throw std::invalid_argument("schaeffer_forward: eps must be +1 or -1");
  const std::size_t n = t.edge_count();
  if (n == 0) throw std::invalid_argument("schaeffer_forward: tree has no edges");
  const auto corner_vertex = contour_vertices(t.tree());
  const std::size_t m = corner_vertex.size();  // 2n corners, one map edge each
  std::vector<int> lab(m);
  for (std::size_t i = 0; i < m; ++i) lab[i] = t.label(corner_vertex[i]);
  const int min_label = t.min_label();
  const auto succ = successors(lab, min_label);

  // Edge i runs from corner i (half-edge 2i) to its successor (half-edge 2i+1).
  std::vector<std::vector<std::uint32_t>> incoming(m);
  std::vector<std::uint32_t> to_point;
  for (std::size_t i = 0; i < m; ++i) {
    if (succ[i] == kToPoint)
      to_point.push_back(static_cast<std::uint32_t>(i));
    else
      incoming[succ[i]].push_back(static_cast<std::uint32_t>(i));
  }

  const auto point = static_cast<VertexId>(n + 1);
  MapData data;
  data.alpha.resize(2 * m);
  data.sigma.resize(2 * m);
  data.vertex_of.resize(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    data.alpha[2 * i] = static_cast<HalfEdge>(2 * i + 1);
    data.alpha[2 * i + 1] = static_cast<HalfEdge>(2 * i);
    data.vertex_of[2 * i] = corner_vertex[i];
    data.vertex_of[2 * i + 1] = succ[i] == kToPoint ? point : corner_vertex[succ[i]];
  }

  // Around a tree vertex: its corners in contour order; inside a corner, the
  // arriving edges from the nearest source outwards, then the edge leaving it.
  std::vector<std::vector<HalfEdge>> rotation(n + 2);
  for (std::size_t i = 0; i < m; ++i) {
    auto& in = incoming[i];
    std::sort(in.begin(), in.end(), [&](std::uint32_t a, std::uint32_t b) {
      return (i + m - a) % m < (i + m - b) % m;
    });
    auto& rot = rotation[corner_vertex[i]];
    for (std::uint32_t p : in) rot.push_back(2 * p + 1);
    rot.push_back(static_cast<HalfEdge>(2 * i));
  }
  for (auto it = to_point.rbegin(); it != to_point.rend(); ++it) rotation[point].push_back(2 * *it + 1);
  for (const auto& rot : rotation)
    for (std::size_t k = 0; k < rot.size(); ++k) data.sigma[rot[k]] = rot[(k + 1) % rot.size()];

  data.root = eps == 1 ? 0 : 1;
  PointedQuadrangulation q{CombinatorialMap(std::move(data)), point};
  if (q.map.face_count() != n) throw InvariantError("schaeffer_forward produced a non-quadrangulation");
  return q;
}

SchaefferPreimage schaeffer_inverse(const PointedQuadrangulation& q) {
  const CombinatorialMap& map = q.map;
  if (const auto diag = validate_quadrangulation(map, q.point); !diag.empty()) {
    std::string msg = "schaeffer_inverse: not a pointed quadrangulation:";
    for (const auto& d : diag) msg += " " + d + ";";
    throw InvariantError(msg);
  }
  const std::size_t H = map.half_edge_count();
  const std::size_t n = map.face_count();
  const auto dist = bfs_distances(map, q.point);

  // One tree edge per face, realized as half-edges H+2f (and its twin
  // H+2f+1) inserted at the face corners they join. ins[x] is the tree
  // half-edge placed right after x in the rotation; after_of inverts it.
  constexpr HalfEdge kNone = std::numeric_limits<HalfEdge>::max();
  std::vector<HalfEdge> ins(H, kNone);
  std::vector<HalfEdge> after_of(2 * n);
  std::vector<VertexId> tree_origin(2 * n);
  const auto faces = map.faces();
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const auto& h = faces[f];
    std::uint32_t d[4];
    for (int k = 0; k < 4; ++k) d[k] = dist[map.origin(h[k])];
    int top = 0;
    for (int k = 1; k < 4; ++k)
      if (d[k] > d[top]) top = k;
    int other;
    if (d[(top + 2) % 4] == d[top]) {
      other = (top + 2) % 4;  // l, l+1, l, l+1: join the two l+1 corners
    } else if (d[(top + 2) % 4] + 2 == d[top]) {
      other = (top + 3) % 4;  // l, l+1, l+2, l+1: l+2 joins the previous l+1
    } else {
      throw InvariantError("schaeffer_inverse: unexpected label pattern around a face");
    }
    const HalfEdge base = static_cast<HalfEdge>(H + 2 * f);
    const int ends[2] = {top, other};
    for (int e = 0; e < 2; ++e) {
      const int k = ends[e];
      const HalfEdge x = map.alpha(h[(k + 3) % 4]);
      if (ins[x] != kNone) throw InvariantError("schaeffer_inverse: corner used twice");
      ins[x] = base + e;
      after_of[base + e - H] = x;
      tree_origin[base + e - H] = map.origin(h[k]);
    }
  }
  auto next = [&](HalfEdge h) -> HalfEdge {
    if (h >= H) return map.sigma(after_of[h - H]);
    return ins[h] != kNone ? ins[h] : map.sigma(h);
  };

  const HalfEdge r = map.root();
  const bool root_outward = dist[map.origin(r)] > dist[map.target(r)];
  const int eps = root_outward ? 1 : -1;
  const HalfEdge start = root_outward ? r : map.alpha(r);
  const VertexId tree_root = map.origin(start);
  const auto base_label = static_cast<long>(dist[tree_root]);

  std::string word;
  word.reserve(2 * n);
  std::vector<int> labels{0};
  labels.reserve(n + 1);
  struct Frame {
    HalfEdge stop;
    HalfEdge cursor;
  };
  std::vector<Frame> stack{{start, start}};
  std::size_t steps = 0;
  while (!stack.empty()) {
    if (++steps > 4 * H + 8 * n) throw InvariantError("schaeffer_inverse: tree walk does not terminate");
    Frame& fr = stack.back();
    fr.cursor = next(fr.cursor);
    if (fr.cursor == fr.stop) {
      stack.pop_back();
      if (!stack.empty()) word.push_back('0');
      continue;
    }
    if (fr.cursor < H) continue;
    const HalfEdge partner = fr.cursor ^ 1u;
    if (word.size() >= 2 * n) throw InvariantError("schaeffer_inverse: recovered edges form no tree");
    word.push_back('1');
    labels.push_back(static_cast<int>(static_cast<long>(dist[tree_origin[partner - H]]) - base_label));
    stack.push_back({partner, partner});
  }
  if (word.size() != 2 * n) throw InvariantError("schaeffer_inverse: recovered tree has wrong size");
  return {LabeledPlaneTree(PlaneTree::from_dyck(word), std::move(labels)), eps};
}

CornerBoundReport check_corner_bound(const PointedQuadrangulation& q, const LabeledPlaneTree& t) {
  const auto corner_vertex = contour_vertices(t.tree());
  const std::size_t m = corner_vertex.size();
  if (q.map.vertex_count() != t.tree().vertex_count() + 1)
    throw std::invalid_argument("check_corner_bound: map and tree sizes differ");
  std::vector<long> lab(m), prefix_min(m), suffix_min(m);
  for (std::size_t i = 0; i < m; ++i) lab[i] = t.label(corner_vertex[i]);
  for (std::size_t i = 0; i < m; ++i) prefix_min[i] = i ? std::min(prefix_min[i - 1], lab[i]) : lab[i];
  for (std::size_t i = m; i-- > 0;) suffix_min[i] = i + 1 < m ? std::min(suffix_min[i + 1], lab[i]) : lab[i];

  std::vector<std::vector<std::uint32_t>> dist(t.tree().vertex_count());
  for (std::size_t v = 0; v < dist.size(); ++v) dist[v] = bfs_distances(q.map, static_cast<VertexId>(v));

  CornerBoundReport report;
  for (std::size_t i = 0; i < m; ++i) {
    long inner_min = lab[i];
    for (std::size_t j = i; j < m; ++j) {
      inner_min = std::min(inner_min, lab[j]);
      const long outer_min = std::min(prefix_min[i], suffix_min[j]);
      const long bound = lab[i] + lab[j] - 2 * std::max(inner_min, outer_min) + 2;
      ++report.pairs_checked;
      if (static_cast<long>(dist[corner_vertex[i]][corner_vertex[j]]) > bound && report.holds) {
        report.holds = false;
        report.violation = std::make_pair(i, j);
      }
    }
  }
  return report;
}

}  // namespace bglab
