#include "bglab/plane_tree.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <stdexcept>

#include "bglab/errors.hpp"

namespace bglab {

PlaneTree::PlaneTree() : parent_{kNoVertex}, depth_{0}, child_begin_{0, 0} {}

PlaneTree PlaneTree::from_dyck(std::string_view word) {
  if (word.size() % 2 != 0) throw std::invalid_argument("Dyck word has odd length");
  PlaneTree t;
  t.parent_.reserve(word.size() / 2 + 1);
  t.depth_.reserve(word.size() / 2 + 1);
  VertexId current = 0;
  for (char ch : word) {
    if (ch == '1') {
      const auto id = static_cast<VertexId>(t.parent_.size());
      t.parent_.push_back(current);
      t.depth_.push_back(t.depth_[current] + 1);
      current = id;
    } else if (ch == '0') {
      if (current == 0) throw std::invalid_argument("Dyck word goes below the root");
      current = t.parent_[current];
    } else {
      throw std::invalid_argument("Dyck word must use only '0' and '1'");
    }
  }
  if (current != 0) throw std::invalid_argument("Dyck word is unbalanced");

  const std::size_t n_vertices = t.parent_.size();
  t.child_begin_.assign(n_vertices + 1, 0);
  for (std::size_t v = 1; v < n_vertices; ++v) ++t.child_begin_[t.parent_[v] + 1];
  for (std::size_t v = 0; v < n_vertices; ++v) t.child_begin_[v + 1] += t.child_begin_[v];
  t.child_list_.assign(n_vertices - 1, 0);
  std::vector<std::uint32_t> fill(t.child_begin_.begin(), t.child_begin_.end() - 1);
  // Preorder visits siblings left to right, so appending keeps sibling order.
  for (std::size_t v = 1; v < n_vertices; ++v)
    t.child_list_[fill[t.parent_[v]]++] = static_cast<VertexId>(v);
  return t;
}

std::span<const VertexId> PlaneTree::children(VertexId v) const {
  if (v >= vertex_count()) throw std::out_of_range("vertex id out of range");
  return std::span<const VertexId>(child_list_).subspan(child_begin_[v],
                                                        child_begin_[v + 1] - child_begin_[v]);
}

std::string PlaneTree::dyck_word() const {
  std::string w;
  w.reserve(2 * edge_count());
  std::uint32_t prev_depth = 0;
  for (std::size_t v = 1; v < vertex_count(); ++v) {
    // returns from the previous vertex up to the parent of v
    w.append(prev_depth + 1 - depth_[v], '0');
    w.push_back('1');
    prev_depth = depth_[v];
  }
  w.append(prev_depth, '0');
  return w;
}

LabeledPlaneTree::LabeledPlaneTree(PlaneTree tree, std::vector<int> labels)
    : tree_(std::move(tree)), labels_(std::move(labels)) {
  if (labels_.size() != tree_.vertex_count())
    throw InvariantError("label count does not match vertex count");
  if (labels_[0] != 0) throw InvariantError("root label must be 0");
  for (std::size_t v = 1; v < tree_.vertex_count(); ++v) {
    if (std::abs(labels_[v] - labels_[tree_.parent(static_cast<VertexId>(v))]) > 1)
      throw InvariantError("adjacent labels differ by more than 1");
  }
}

int LabeledPlaneTree::min_label() const { return *std::min_element(labels_.begin(), labels_.end()); }

std::vector<VertexId> contour_vertices(const PlaneTree& tree) {
  if (tree.edge_count() == 0) throw std::invalid_argument("zero-edge tree has no corners");
  const std::string word = tree.dyck_word();
  std::vector<VertexId> out;
  out.reserve(word.size());
  out.push_back(0);
  VertexId current = 0, next_new = 1;
  for (std::size_t i = 0; i + 1 < word.size(); ++i) {
    current = word[i] == '1' ? next_new++ : tree.parent(current);
    out.push_back(current);
  }
  return out;
}

CornerSequence contour(const PlaneTree& tree) {
  const auto verts = contour_vertices(tree);
  std::vector<std::uint32_t> seen(tree.vertex_count(), 0);
  CornerSequence corners;
  corners.reserve(verts.size());
  for (VertexId v : verts) corners.push_back({v, seen[v]++});
  return corners;
}

PlaneTree sample_plane_tree(std::size_t n, Rng& rng) {
  if (n == 0) return PlaneTree{};
  // n up-steps (+1) and n+1 down-steps (-1), uniformly arranged.
  std::vector<signed char> steps(2 * n + 1, -1);
  std::fill_n(steps.begin(), n, static_cast<signed char>(1));
  std::shuffle(steps.begin(), steps.end(), rng);
  // Cycle lemma: rotate to start just after the first minimum of the
  // partial sums; all proper partial sums of the rotation are then >= 0.
  long sum = 0, best = 1;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    sum += steps[i];
    if (sum < best) {
      best = sum;
      arg = i;
    }
  }
  std::string word;
  word.reserve(2 * n);
  for (std::size_t j = 1; j < steps.size(); ++j)
    word.push_back(steps[(arg + j) % steps.size()] > 0 ? '1' : '0');
  return PlaneTree::from_dyck(word);
}

PlaneTree sample_plane_tree(std::size_t n, Seed seed) {
  Rng rng = make_rng(seed);
  return sample_plane_tree(n, rng);
}

namespace {

void dyck_words(std::size_t n, std::string& prefix, std::size_t open, std::size_t closed,
                std::vector<PlaneTree>& out) {
  if (closed == n) {
    out.push_back(PlaneTree::from_dyck(prefix));
    return;
  }
  if (open < n) {
    prefix.push_back('1');
    dyck_words(n, prefix, open + 1, closed, out);
    prefix.pop_back();
  }
  if (closed < open) {
    prefix.push_back('0');
    dyck_words(n, prefix, open, closed + 1, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<PlaneTree> enumerate_plane_trees(std::size_t n) {
  if (n > kMaxEnumerationEdges)
    throw std::invalid_argument("enumerate_plane_trees: n exceeds the enumeration limit");
  std::vector<PlaneTree> out;
  std::string prefix;
  dyck_words(n, prefix, 0, 0, out);
  return out;
}

LabeledPlaneTree sample_labels(const PlaneTree& tree, Rng& rng) {
  std::uniform_int_distribution<int> inc(-1, 1);
  std::vector<int> labels(tree.vertex_count(), 0);
  for (std::size_t v = 1; v < tree.vertex_count(); ++v)
    labels[v] = labels[tree.parent(static_cast<VertexId>(v))] + inc(rng);
  return LabeledPlaneTree(tree, std::move(labels));
}

LabeledPlaneTree sample_labels(const PlaneTree& tree, Seed seed) {
  Rng rng = make_rng(seed);
  return sample_labels(tree, rng);
}

std::vector<LabeledPlaneTree> enumerate_labelings(const PlaneTree& tree) {
  const std::size_t n = tree.edge_count();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  std::vector<LabeledPlaneTree> out;
  out.reserve(total);
  std::vector<int> digits(n, 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      digits[i] = static_cast<int>(c % 3) - 1;
      c /= 3;
    }
    std::vector<int> labels(n + 1, 0);
    for (std::size_t v = 1; v <= n; ++v)
      labels[v] = labels[tree.parent(static_cast<VertexId>(v))] + digits[v - 1];
    out.emplace_back(tree, std::move(labels));
  }
  return out;
}

std::string encode_tree(const LabeledPlaneTree& t) {
  std::string s = "DYCK:" + t.tree().dyck_word() + ";LABELS:";
  for (std::size_t v = 1; v < t.tree().vertex_count(); ++v) {
    if (v > 1) s.push_back(',');
    const auto id = static_cast<VertexId>(v);
    s += std::to_string(t.label(id) - t.label(t.tree().parent(id)));
  }
  return s;
}

LabeledPlaneTree decode_tree(std::string_view text) {
  if (!text.empty() && text.back() == '\n') text.remove_suffix(1);
  if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
  constexpr std::string_view kDyck = "DYCK:", kLabels = ";LABELS:";
  if (!text.starts_with(kDyck)) throw std::invalid_argument("tree record must start with DYCK:");
  const auto sep = text.find(kLabels);
  if (sep == std::string_view::npos) throw std::invalid_argument("tree record lacks ;LABELS:");
  const PlaneTree tree = PlaneTree::from_dyck(text.substr(kDyck.size(), sep - kDyck.size()));
  std::string_view rest = text.substr(sep + kLabels.size());

  std::vector<int> increments;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view tok = rest.substr(0, comma);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty())
      throw std::invalid_argument("malformed label increment");
    if (value < -1 || value > 1) throw std::invalid_argument("label increment outside {-1,0,1}");
    increments.push_back(value);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
    if (rest.empty()) throw std::invalid_argument("trailing comma in labels");
  }
  if (increments.size() != tree.edge_count())
    throw std::invalid_argument("number of label increments does not match edge count");
  std::vector<int> labels(tree.vertex_count(), 0);
  for (std::size_t v = 1; v < tree.vertex_count(); ++v)
    labels[v] = labels[tree.parent(static_cast<VertexId>(v))] + increments[v - 1];
  return LabeledPlaneTree(tree, std::move(labels));
}

}  // namespace bglab
