#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bglab/plane_tree.hpp"

namespace bglab {

using HalfEdge = std::uint32_t;

/// Raw rotation-system data, before validation.
struct MapData {
  std::vector<HalfEdge> alpha;  // opposite half-edge
  std::vector<HalfEdge> sigma;  // next half-edge around the origin vertex
  HalfEdge root = 0;
  /// Vertex id of the origin of each half-edge. Leave empty to number the
  /// sigma cycles by their smallest half-edge.
  std::vector<VertexId> vertex_of;
};

/// Every violated invariant, one message each; empty when `m` describes a
/// connected planar rotation system. Messages include "alpha not
/// fixed-point-free" and "not transitive".
std::vector<std::string> validate_map(const MapData& m);

/// Rooted planar map as a rotation system. Faces are the cycles of
/// phi = sigma o alpha; the corner of a face at the origin of phi(h) lies
/// between alpha(h) and phi(h) in the rotation.
class CombinatorialMap {
 public:
  /// Throws InvariantError listing every diagnostic of validate_map.
  explicit CombinatorialMap(MapData data);

  std::size_t half_edge_count() const { return alpha_.size(); }
  std::size_t edge_count() const { return alpha_.size() / 2; }
  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t face_count() const { return face_count_; }

  HalfEdge alpha(HalfEdge h) const { return alpha_.at(h); }
  HalfEdge sigma(HalfEdge h) const { return sigma_.at(h); }
  HalfEdge phi(HalfEdge h) const { return sigma_.at(alpha_.at(h)); }
  HalfEdge root() const { return root_; }
  VertexId origin(HalfEdge h) const { return vertex_of_.at(h); }
  VertexId target(HalfEdge h) const { return vertex_of_.at(alpha_.at(h)); }

  std::span<const HalfEdge> alpha() const { return alpha_; }
  std::span<const HalfEdge> sigma() const { return sigma_; }
  std::span<const VertexId> vertex_of() const { return vertex_of_; }

  /// Face cycles, each listed from its smallest half-edge.
  std::vector<std::vector<HalfEdge>> faces() const;

 private:
  std::vector<HalfEdge> alpha_;
  std::vector<HalfEdge> sigma_;
  std::vector<VertexId> vertex_of_;
  HalfEdge root_;
  std::size_t vertex_count_;
  std::size_t face_count_;
};

/// Root-preserving isomorphism classes: the rotation system relabeled by a
/// breadth-first search from the root half-edge (sigma before alpha), with
/// the distinguished vertex, if any, recorded as its smallest new half-edge.
struct CanonicalMap {
  std::vector<HalfEdge> alpha;
  std::vector<HalfEdge> sigma;
  std::optional<HalfEdge> point;
  friend bool operator==(const CanonicalMap&, const CanonicalMap&) = default;
  friend auto operator<=>(const CanonicalMap&, const CanonicalMap&) = default;
};

CanonicalMap canonical_form(const CombinatorialMap& m, std::optional<VertexId> point = {});

/// Same rooted map up to relabeling of half-edges and vertices.
bool isomorphic(const CombinatorialMap& a, const CombinatorialMap& b);

struct PointedQuadrangulation {
  CombinatorialMap map;
  VertexId point;  // v*

  std::size_t face_count() const { return map.face_count(); }
};

/// Rooted pointed isomorphism.
bool operator==(const PointedQuadrangulation& a, const PointedQuadrangulation& b);

/// Diagnostics for a pointed quadrangulation: face degrees, sizes, and the
/// point being a vertex of the map. Empty when valid.
std::vector<std::string> validate_quadrangulation(const CombinatorialMap& m, VertexId point);

/// Schaeffer's construction. Vertex ids of the result are the tree ids,
/// with v* = n + 1. eps = +1 roots the map at the tree root.
/// Throws std::invalid_argument for a zero-edge tree or eps not in {-1,+1}.
PointedQuadrangulation schaeffer_forward(const LabeledPlaneTree& t, int eps);

struct SchaefferPreimage {
  LabeledPlaneTree tree;
  int eps;
};

/// Inverse of schaeffer_forward. Labels are BFS distances from v*, shifted
/// so the tree root has label 0. Throws InvariantError when `q` is not a
/// valid pointed quadrangulation.
SchaefferPreimage schaeffer_inverse(const PointedQuadrangulation& q);

inline constexpr std::uint32_t kUnreachable = ~std::uint32_t{0};

/// Graph distance from `source` to every vertex (indexed by vertex id).
/// Throws std::out_of_range for an unknown vertex.
std::vector<std::uint32_t> bfs_distances(const CombinatorialMap& m, VertexId source);

struct CornerBoundReport {
  bool holds = true;
  std::size_t pairs_checked = 0;
  std::optional<std::pair<std::size_t, std::size_t>> violation;  // corner indices i <= j
};

/// Checks d(v_i, v_j) <= l_i + l_j - 2 max(min over [i,j], min over the
/// complementary cyclic interval) + 2 for every pair of corners i <= j of t,
/// with distances measured in q = schaeffer_forward(t, eps).
CornerBoundReport check_corner_bound(const PointedQuadrangulation& q, const LabeledPlaneTree& t);

/// Map file format, five lines:
///   HALFEDGES:<2E>
///   ALPHA:<comma-separated images of 0..2E-1>
///   SIGMA:<comma-separated images of 0..2E-1>
///   ROOT:<half-edge>
///   POINT:<vertex id>
/// The vertex id in POINT refers to the numbering of sigma cycles by their
/// smallest half-edge; encode_map converts to it.
std::string encode_map(const CombinatorialMap& m, VertexId point);

struct DecodedMap {
  CombinatorialMap map;
  VertexId point;
};

/// Parses the map file format. Throws std::invalid_argument on grammar
/// errors and InvariantError when the rotation system is invalid.
DecodedMap decode_map(std::string_view text);

}  // namespace bglab
