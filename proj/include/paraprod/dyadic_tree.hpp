#pragma once

// Finite rooted dyadic tree over [0,1).
//
// Nodes are stored in heap order: the root has id 0 and the children of node
// i are 2i+1 (left half, path bit '0') and 2i+2 (right half, path bit '1').
// A tree of depth D has levels 0..D; nodes at level D are leaves.  Haar
// functions exist only on levels 0..D-1 since h_I needs both halves of I.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace paraprod {

using NodeId = std::size_t;

inline constexpr int kMaxDepth = 24;

/// A dyadic interval [offset 2^-level, (offset+1) 2^-level).
struct DyadicIndex {
  int level = 0;
  std::uint64_t offset = 0;

  static DyadicIndex root() { return {}; }

  static DyadicIndex from_id(NodeId id) {
    int level = 0;
    while ((NodeId{2} << level) - 1 <= id) ++level;
    return {level, static_cast<std::uint64_t>(id - ((NodeId{1} << level) - 1))};
  }

  /// Parses a path string: "" is the root, '0' descends left, '1' right.
  static DyadicIndex parse(std::string_view path) {
    if (path.size() > static_cast<std::size_t>(kMaxDepth)) {
      throw std::invalid_argument("dyadic path too long: " + std::string(path));
    }
    DyadicIndex idx;
    for (char c : path) {
      if (c != '0' && c != '1') {
        throw std::invalid_argument("malformed dyadic path: \"" + std::string(path) + "\"");
      }
      idx.offset = (idx.offset << 1) | static_cast<std::uint64_t>(c - '0');
      ++idx.level;
    }
    return idx;
  }

  NodeId id() const { return ((NodeId{1} << level) - 1) + static_cast<NodeId>(offset); }

  std::string path() const {
    std::string s(static_cast<std::size_t>(level), '0');
    for (int k = 0; k < level; ++k) {
      if ((offset >> (level - 1 - k)) & 1U) s[static_cast<std::size_t>(k)] = '1';
    }
    return s;
  }

  /// |I| = 2^-level.
  double measure() const { return std::ldexp(1.0, -level); }

  double left_endpoint() const { return std::ldexp(static_cast<double>(offset), -level); }

  /// True when *this ⊆ other (inclusive).
  bool is_within(const DyadicIndex& other) const {
    if (level < other.level) return false;
    return (offset >> (level - other.level)) == other.offset;
  }

  bool strictly_within(const DyadicIndex& other) const {
    return level > other.level && is_within(other);
  }

  bool intersects(const DyadicIndex& other) const {
    return is_within(other) || other.is_within(*this);
  }

  DyadicIndex left_child() const { return {level + 1, offset << 1}; }
  DyadicIndex right_child() const { return {level + 1, (offset << 1) | 1U}; }

  friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;
};

enum class Relation { parent, left_child, right_child, sibling };

/// Depth-D truncation of the dyadic grid.
class TreeShape {
 public:
  explicit TreeShape(int depth) : depth_(depth) {
    if (depth < 1 || depth > kMaxDepth) {
      throw std::invalid_argument("tree depth must be in [1, " + std::to_string(kMaxDepth) +
                                  "], got " + std::to_string(depth));
    }
  }

  int depth() const { return depth_; }
  /// 2^(D+1) - 1.
  std::size_t node_count() const { return (std::size_t{2} << depth_) - 1; }
  /// Nodes carrying a Haar function: levels 0..D-1.
  std::size_t haar_count() const { return (std::size_t{1} << depth_) - 1; }
  std::size_t leaf_count() const { return std::size_t{1} << depth_; }
  NodeId first_leaf() const { return haar_count(); }

  bool contains(const DyadicIndex& idx) const {
    return idx.level >= 0 && idx.level <= depth_ && (idx.offset >> idx.level) == 0;
  }
  bool is_leaf(NodeId id) const { return id >= haar_count() && id < node_count(); }
  bool is_haar(NodeId id) const { return id < haar_count(); }

  void require(const DyadicIndex& idx) const {
    if (!contains(idx)) {
      throw std::out_of_range("dyadic index \"" + idx.path() + "\" not in tree of depth " +
                              std::to_string(depth_));
    }
  }

  DyadicIndex index(std::string_view path) const {
    auto idx = DyadicIndex::parse(path);
    require(idx);
    return idx;
  }

  std::optional<DyadicIndex> navigate(const DyadicIndex& idx, Relation rel) const {
    require(idx);
    switch (rel) {
      case Relation::parent:
        if (idx.level == 0) return std::nullopt;
        return DyadicIndex{idx.level - 1, idx.offset >> 1};
      case Relation::left_child:
        if (idx.level == depth_) return std::nullopt;
        return idx.left_child();
      case Relation::right_child:
        if (idx.level == depth_) return std::nullopt;
        return idx.right_child();
      case Relation::sibling:
        if (idx.level == 0) return std::nullopt;
        return DyadicIndex{idx.level, idx.offset ^ 1U};
    }
    return std::nullopt;
  }

  static NodeId left(NodeId id) { return 2 * id + 1; }
  static NodeId right(NodeId id) { return 2 * id + 2; }
  static NodeId parent(NodeId id) { return (id - 1) / 2; }

  static int level_of(NodeId id) { return DyadicIndex::from_id(id).level; }
  static double measure_of(NodeId id) { return std::ldexp(1.0, -level_of(id)); }

  /// Measures of every node, indexed by id.
  std::vector<double> measures() const {
    std::vector<double> m(node_count());
    for (int level = 0; level <= depth_; ++level) {
      const double len = std::ldexp(1.0, -level);
      const NodeId first = (NodeId{1} << level) - 1;
      for (NodeId k = 0; k < (NodeId{1} << level); ++k) m[first + k] = len;
    }
    return m;
  }

  friend bool operator==(const TreeShape&, const TreeShape&) = default;

 private:
  int depth_;
};

/// Reduces each node's full subtree (inclusive) in one bottom-up pass.
/// `combine(self, left, right)` must be associative in the usual sense.
template <class T, class Combine>
std::vector<T> bottom_up_aggregate(const TreeShape& tree, std::span<const T> values,
                                   Combine combine) {
  if (values.size() != tree.node_count()) {
    throw std::invalid_argument("bottom_up_aggregate: value count does not match tree");
  }
  std::vector<T> out(values.begin(), values.end());
  for (NodeId id = tree.haar_count(); id-- > 0;) {
    out[id] = combine(values[id], out[TreeShape::left(id)], out[TreeShape::right(id)]);
  }
  return out;
}

/// Σ_{J ⊆ I} v(J) for every I.
template <class T>
std::vector<T> subtree_sums(const TreeShape& tree, std::span<const T> values) {
  return bottom_up_aggregate(tree, values,
                             [](const T& self, const T& l, const T& r) { return self + l + r; });
}

/// Σ_{J ⊊ I} v(J) for every I.
template <class T>
std::vector<T> strict_subtree_sums(const TreeShape& tree, std::span<const T> values) {
  const auto incl = subtree_sums(tree, values);
  std::vector<T> out(incl.size(), T{});
  for (NodeId id = 0; id < tree.haar_count(); ++id) {
    out[id] = incl[TreeShape::left(id)] + incl[TreeShape::right(id)];
  }
  return out;
}

template <class T>
std::vector<T> subtree_sums(const TreeShape& tree, const std::vector<T>& values) {
  return subtree_sums(tree, std::span<const T>(values));
}

template <class T>
std::vector<T> strict_subtree_sums(const TreeShape& tree, const std::vector<T>& values) {
  return strict_subtree_sums(tree, std::span<const T>(values));
}

}  // namespace paraprod
