#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bglab/rng.hpp"

namespace bglab {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = ~VertexId{0};

/// Rooted ordered tree. Vertex ids follow the first visit of the contour
/// (preorder), so the root is 0 and the children of a vertex appear in
/// sibling order. Immutable once built.
class PlaneTree {
 public:
  /// The single-vertex tree.
  PlaneTree();

  /// Builds the tree whose contour is the given Dyck word: '1' steps to a new
  /// child, '0' returns to the parent. Throws std::invalid_argument if the
  /// word is not a balanced Dyck word over {0,1}.
  static PlaneTree from_dyck(std::string_view word);

  std::size_t edge_count() const { return parent_.size() - 1; }
  std::size_t vertex_count() const { return parent_.size(); }
  VertexId root() const { return 0; }
  VertexId parent(VertexId v) const { return parent_.at(v); }
  std::span<const VertexId> children(VertexId v) const;
  std::size_t depth(VertexId v) const { return depth_.at(v); }

  std::string dyck_word() const;

  friend bool operator==(const PlaneTree&, const PlaneTree&) = default;

 private:
  std::vector<VertexId> parent_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> child_begin_;  // CSR offsets, size V+1
  std::vector<VertexId> child_list_;
};

/// Plane tree with integer labels: root label 0, adjacent labels differ by at
/// most one. The constructor checks both and throws InvariantError.
class LabeledPlaneTree {
 public:
  LabeledPlaneTree(PlaneTree tree, std::vector<int> labels);

  const PlaneTree& tree() const { return tree_; }
  std::span<const int> labels() const { return labels_; }
  int label(VertexId v) const { return labels_.at(v); }
  std::size_t edge_count() const { return tree_.edge_count(); }
  int min_label() const;

  friend bool operator==(const LabeledPlaneTree&, const LabeledPlaneTree&) = default;

 private:
  PlaneTree tree_;
  std::vector<int> labels_;
};

/// Angular sector at `vertex`; `position` counts the corners of that vertex in
/// contour order.
struct Corner {
  VertexId vertex;
  std::uint32_t position;
  friend bool operator==(const Corner&, const Corner&) = default;
};

using CornerSequence = std::vector<Corner>;

/// Corners c_0..c_{2n-1} in contour order starting at the root corner.
/// Throws std::invalid_argument for the zero-edge tree.
CornerSequence contour(const PlaneTree& tree);

/// Vertex of each corner, i.e. contour(tree)[i].vertex, without the positions.
std::vector<VertexId> contour_vertices(const PlaneTree& tree);

/// Uniform plane tree with n edges via the cycle lemma: a uniform
/// arrangement of n up-steps and n+1 down-steps is rotated to its unique
/// Lukasiewicz conjugate and the final down-step dropped.
PlaneTree sample_plane_tree(std::size_t n, Rng& rng);
PlaneTree sample_plane_tree(std::size_t n, Seed seed);

inline constexpr std::size_t kMaxEnumerationEdges = 10;

/// Every plane tree with n edges, once each, in decreasing lexicographic
/// order of Dyck words ('1' before '0'). Throws std::invalid_argument for
/// n > kMaxEnumerationEdges.
std::vector<PlaneTree> enumerate_plane_trees(std::size_t n);

/// Independent uniform {-1,0,+1} increments along every edge, root label 0.
LabeledPlaneTree sample_labels(const PlaneTree& tree, Rng& rng);
LabeledPlaneTree sample_labels(const PlaneTree& tree, Seed seed);

/// Every labeling of `tree` (3^n of them), in base-3 counter order.
std::vector<LabeledPlaneTree> enumerate_labelings(const PlaneTree& tree);

/// Tree file format, one line:
///   DYCK:<word over {0,1}>;LABELS:<comma-separated increments in {-1,0,1}>
/// Increments are listed for non-root vertices in contour-first-visit order
/// (child label minus parent label).
std::string encode_tree(const LabeledPlaneTree& t);

/// Inverse of encode_tree. A single trailing newline is accepted. Throws
/// std::invalid_argument on grammar errors, unbalanced words, a wrong number
/// of increments or increments outside {-1,0,1}.
LabeledPlaneTree decode_tree(std::string_view text);

}  // namespace bglab
