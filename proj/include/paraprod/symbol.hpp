#pragma once

// Symbols (complex sequences on the dyadic tree), nonnegative tree weights,
// and the symbol calculus used to characterize single paraproducts:
// Schur product, sweep, E(a), and the l-infinity / Carleson-measure norms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "paraprod/dyadic_tree.hpp"

namespace paraprod {

using Complex = std::complex<double>;

/// Sequence {a_I} indexed by the nodes of a depth-D tree.  Missing entries are
/// exact zeros.  Paraproduct symbols live on levels 0..D-1; the leaf level is
/// allowed to carry values so that general tree sequences share the type.
class Symbol {
 public:
  explicit Symbol(int depth) : tree_(depth), entries_(tree_.node_count()) {}

  Symbol(const TreeShape& tree, std::vector<Complex> entries)
      : tree_(tree), entries_(std::move(entries)) {
    if (entries_.size() != tree_.node_count()) {
      throw std::invalid_argument("Symbol: entry count does not match tree");
    }
  }

  static Symbol delta(int depth, std::string_view path, Complex value = 1.0) {
    Symbol s(depth);
    s.set(path, value);
    return s;
  }

  const TreeShape& tree() const { return tree_; }
  int depth() const { return tree_.depth(); }
  std::size_t size() const { return entries_.size(); }

  Complex operator[](NodeId id) const { return entries_[id]; }
  Complex& operator[](NodeId id) { return entries_[id]; }

  Complex at(const DyadicIndex& idx) const {
    tree_.require(idx);
    return entries_[idx.id()];
  }
  Complex at(std::string_view path) const { return at(DyadicIndex::parse(path)); }

  void set(const DyadicIndex& idx, Complex value) {
    tree_.require(idx);
    entries_[idx.id()] = value;
  }
  void set(std::string_view path, Complex value) { set(DyadicIndex::parse(path), value); }

  std::span<const Complex> entries() const { return entries_; }
  std::span<Complex> entries() { return entries_; }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const Complex& z) { return z == Complex{}; });
  }

  std::size_t nonzero_count() const {
    return static_cast<std::size_t>(std::count_if(
        entries_.begin(), entries_.end(), [](const Complex& z) { return z != Complex{}; }));
  }

  /// True when every leaf-level entry is zero.
  bool on_haar_levels() const {
    return std::all_of(entries_.begin() + static_cast<std::ptrdiff_t>(tree_.haar_count()),
                       entries_.end(), [](const Complex& z) { return z == Complex{}; });
  }

  void require_haar_levels(std::string_view what) const {
    if (!on_haar_levels()) {
      throw std::invalid_argument(std::string(what) +
                                  ": symbol has nonzero entries on the leaf level");
    }
  }

  Symbol conj() const {
    Symbol out(tree_.depth());
    for (NodeId id = 0; id < size(); ++id) out[id] = std::conj(entries_[id]);
    return out;
  }

  Symbol& operator+=(const Symbol& other) {
    require_same_tree(other, "Symbol::operator+=");
    for (NodeId id = 0; id < size(); ++id) entries_[id] += other[id];
    return *this;
  }
  Symbol& operator*=(Complex s) {
    for (auto& z : entries_) z *= s;
    return *this;
  }
  friend Symbol operator+(Symbol a, const Symbol& b) { return a += b; }
  friend Symbol operator*(Complex s, Symbol a) { return a *= s; }

  void require_same_tree(const Symbol& other, std::string_view what) const {
    if (other.tree_ != tree_) {
      throw std::invalid_argument(std::string(what) + ": depth mismatch (" +
                                  std::to_string(depth()) + " vs " +
                                  std::to_string(other.depth()) + ")");
    }
  }

  friend bool operator==(const Symbol&, const Symbol&) = default;

 private:
  TreeShape tree_;
  std::vector<Complex> entries_;
};

/// Nonnegative weight per node (or per tile, in the upper half-plane picture).
class TreeWeight {
 public:
  explicit TreeWeight(int depth) : tree_(depth), values_(tree_.node_count(), 0.0) {}

  TreeWeight(const TreeShape& tree, std::vector<double> values)
      : tree_(tree), values_(std::move(values)) {
    if (values_.size() != tree_.node_count()) {
      throw std::invalid_argument("TreeWeight: value count does not match tree");
    }
    for (double v : values_) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("TreeWeight: values must be finite and nonnegative");
      }
    }
  }

  static TreeWeight constant(int depth, double value) {
    TreeShape tree(depth);
    return TreeWeight(tree, std::vector<double>(tree.node_count(), value));
  }

  /// |a_I|^2 for every node.
  static TreeWeight abs2(const Symbol& a) {
    std::vector<double> v(a.size());
    for (NodeId id = 0; id < a.size(); ++id) v[id] = std::norm(a[id]);
    return TreeWeight(a.tree(), std::move(v));
  }

  const TreeShape& tree() const { return tree_; }
  int depth() const { return tree_.depth(); }
  std::size_t size() const { return values_.size(); }

  double operator[](NodeId id) const { return values_[id]; }
  double at(const DyadicIndex& idx) const {
    tree_.require(idx);
    return values_[idx.id()];
  }
  void set(const DyadicIndex& idx, double value) {
    tree_.require(idx);
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument("TreeWeight: values must be finite and nonnegative");
    }
    values_[idx.id()] = value;
  }
  void set(std::string_view path, double value) { set(DyadicIndex::parse(path), value); }

  std::span<const double> values() const { return values_; }

  bool is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
  }

  friend bool operator==(const TreeWeight&, const TreeWeight&) = default;

 private:
  TreeShape tree_;
  std::vector<double> values_;
};

/// (b∘d)_I = b_I d_I, no conjugation.
inline Symbol schur(const Symbol& b, const Symbol& d) {
  b.require_same_tree(d, "schur");
  Symbol out(b.depth());
  for (NodeId id = 0; id < b.size(); ++id) out[id] = b[id] * d[id];
  return out;
}

/// Sweep: Ŝ(a)_I = Σ_{J⊊I} a_J <h_J^1, h_I> = |I|^{-1/2} (Σ_{J⊆I+} a_J - Σ_{J⊆I-} a_J).
/// Zero on the leaf level, where h_I does not exist.
inline Symbol sweep(const Symbol& a) {
  const auto& tree = a.tree();
  const auto sums = subtree_sums(tree, a.entries());
  Symbol out(a.depth());
  for (NodeId id = 0; id < tree.haar_count(); ++id) {
    const double scale = 1.0 / std::sqrt(TreeShape::measure_of(id));
    out[id] = scale * (sums[TreeShape::right(id)] - sums[TreeShape::left(id)]);
  }
  return out;
}

/// E(a)_J = |J|^{-1} Σ_{I⊆J} a_I (inclusive of J itself) at every node.
inline Symbol e_seq(const Symbol& a) {
  const auto& tree = a.tree();
  const auto sums = subtree_sums(tree, a.entries());
  Symbol out(a.depth());
  for (NodeId id = 0; id < tree.node_count(); ++id) {
    out[id] = sums[id] / TreeShape::measure_of(id);
  }
  return out;
}

/// E'(a)_J = |J|^{-1} Σ_{I⊊J} a_I, the strict variant that appears on the
/// diagonal of the P^(1,1) expansion.
inline Symbol e_seq_strict(const Symbol& a) {
  const auto& tree = a.tree();
  const auto sums = strict_subtree_sums(tree, a.entries());
  Symbol out(a.depth());
  for (NodeId id = 0; id < tree.node_count(); ++id) {
    out[id] = sums[id] / TreeShape::measure_of(id);
  }
  return out;
}

inline double linf_norm(const Symbol& a) {
  double m = 0.0;
  for (const auto& z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

/// Per-node Carleson averages |I|^{-1} Σ_{J⊆I} |a_J|^2.
inline std::vector<double> carleson_averages(const Symbol& a) {
  const auto w = TreeWeight::abs2(a);
  auto sums = subtree_sums(a.tree(), w.values());
  for (NodeId id = 0; id < sums.size(); ++id) sums[id] /= TreeShape::measure_of(id);
  return sums;
}

/// ||a||_CM = sqrt(max_I |I|^{-1} Σ_{J⊆I} |a_J|^2).
inline double cm_norm(const Symbol& a) {
  const auto avg = carleson_averages(a);
  return std::sqrt(*std::max_element(avg.begin(), avg.end()));
}

/// Entrywise principal square root of a nonnegative real symbol.
inline Symbol sqrt_entries(const Symbol& a) {
  Symbol out(a.depth());
  for (NodeId id = 0; id < a.size(); ++id) {
    if (a[id].imag() != 0.0 || a[id].real() < 0.0) {
      throw std::invalid_argument("sqrt_entries: symbol must be real and nonnegative");
    }
    out[id] = std::sqrt(a[id].real());
  }
  return out;
}

}  // namespace paraprod
