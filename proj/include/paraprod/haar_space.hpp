#pragma once

// The 2^D-dimensional model of L^2([0,1)): step functions constant on the
// leaf intervals, their Haar expansion, and the pairings <f, h_I^beta>.
//
// {1_[0,1)} ∪ {h_I : level(I) <= D-1} is an orthonormal basis; the constant
// lives in the `mean` slot of HaarCoefficients.

#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "paraprod/dyadic_tree.hpp"
#include "paraprod/symbol.hpp"

namespace paraprod {

class StepFunction {
 public:
  explicit StepFunction(int depth) : tree_(depth), leaves_(tree_.leaf_count()) {}

  StepFunction(int depth, std::vector<Complex> leaves) : tree_(depth), leaves_(std::move(leaves)) {
    if (leaves_.size() != tree_.leaf_count()) {
      throw std::invalid_argument("StepFunction: expected " + std::to_string(tree_.leaf_count()) +
                                  " leaf values, got " + std::to_string(leaves_.size()));
    }
  }

  static StepFunction constant(int depth, Complex value) {
    StepFunction f(depth);
    std::fill(f.leaves_.begin(), f.leaves_.end(), value);
    return f;
  }

  /// Indicator of a dyadic interval.
  static StepFunction indicator(int depth, const DyadicIndex& idx) {
    StepFunction f(depth);
    f.tree_.require(idx);
    const int shift = depth - idx.level;
    const std::size_t first = static_cast<std::size_t>(idx.offset) << shift;
    const std::size_t count = std::size_t{1} << shift;
    for (std::size_t k = first; k < first + count; ++k) f.leaves_[k] = 1.0;
    return f;
  }

  const TreeShape& tree() const { return tree_; }
  int depth() const { return tree_.depth(); }
  std::size_t size() const { return leaves_.size(); }
  /// Length of each leaf interval, 2^-D.
  double cell() const { return std::ldexp(1.0, -depth()); }

  Complex operator[](std::size_t k) const { return leaves_[k]; }
  Complex& operator[](std::size_t k) { return leaves_[k]; }
  const std::vector<Complex>& leaves() const { return leaves_; }

  StepFunction& operator+=(const StepFunction& g) {
    require_same_depth(g);
    for (std::size_t k = 0; k < size(); ++k) leaves_[k] += g[k];
    return *this;
  }
  StepFunction& operator-=(const StepFunction& g) {
    require_same_depth(g);
    for (std::size_t k = 0; k < size(); ++k) leaves_[k] -= g[k];
    return *this;
  }
  StepFunction& operator*=(Complex s) {
    for (auto& v : leaves_) v *= s;
    return *this;
  }
  friend StepFunction operator+(StepFunction f, const StepFunction& g) { return f += g; }
  friend StepFunction operator-(StepFunction f, const StepFunction& g) { return f -= g; }
  friend StepFunction operator*(Complex s, StepFunction f) { return f *= s; }

  void require_same_depth(const StepFunction& g) const {
    if (g.depth() != depth()) {
      throw std::invalid_argument("StepFunction: depth mismatch");
    }
  }

 private:
  TreeShape tree_;
  std::vector<Complex> leaves_;
};

/// <f, g> = ∫ f conj(g).
inline Complex inner(const StepFunction& f, const StepFunction& g) {
  f.require_same_depth(g);
  Complex acc{};
  for (std::size_t k = 0; k < f.size(); ++k) acc += f[k] * std::conj(g[k]);
  return acc * f.cell();
}

inline double norm(const StepFunction& f) {
  double acc = 0.0;
  for (const auto& v : f.leaves()) acc += std::norm(v);
  return std::sqrt(acc * f.cell());
}

struct HaarCoefficients {
  Complex mean{};
  /// f̂(I) on levels 0..D-1; leaf entries stay zero.
  Symbol coeffs;

  explicit HaarCoefficients(int depth) : coeffs(depth) {}
  HaarCoefficients(Complex m, Symbol c) : mean(m), coeffs(std::move(c)) {}

  int depth() const { return coeffs.depth(); }
};

namespace detail {

/// ∫_I f for every node I.
inline std::vector<Complex> interval_integrals(const StepFunction& f) {
  const auto& tree = f.tree();
  std::vector<Complex> s(tree.node_count());
  const NodeId first = tree.first_leaf();
  for (std::size_t k = 0; k < f.size(); ++k) s[first + k] = f[k] * f.cell();
  for (NodeId id = tree.haar_count(); id-- > 0;) {
    s[id] = s[TreeShape::left(id)] + s[TreeShape::right(id)];
  }
  return s;
}

/// Leaf values of Σ_I x_I h_I^1 = Σ_I x_I 1_I / |I|.
inline StepFunction synthesize_averaging(const Symbol& x) {
  const auto& tree = x.tree();
  std::vector<Complex> acc(tree.node_count());
  acc[0] = x[0];
  for (NodeId id = 1; id < tree.node_count(); ++id) {
    acc[id] = acc[TreeShape::parent(id)] + x[id] / TreeShape::measure_of(id);
  }
  StepFunction out(x.depth());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = acc[tree.first_leaf() + k];
  return out;
}

}  // namespace detail

inline HaarCoefficients analyze(const StepFunction& f) {
  const auto& tree = f.tree();
  const auto s = detail::interval_integrals(f);
  HaarCoefficients c(f.depth());
  c.mean = s[0];
  for (NodeId id = 0; id < tree.haar_count(); ++id) {
    c.coeffs[id] = (s[TreeShape::right(id)] - s[TreeShape::left(id)]) /
                   std::sqrt(TreeShape::measure_of(id));
  }
  return c;
}

inline StepFunction synthesize(const HaarCoefficients& c) {
  const auto& tree = c.coeffs.tree();
  std::vector<Complex> acc(tree.node_count());
  acc[0] = c.mean;
  for (NodeId id = 0; id < tree.haar_count(); ++id) {
    const Complex step = c.coeffs[id] / std::sqrt(TreeShape::measure_of(id));
    acc[TreeShape::left(id)] = acc[id] - step;
    acc[TreeShape::right(id)] = acc[id] + step;
  }
  StepFunction f(c.depth());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = acc[tree.first_leaf() + k];
  return f;
}

/// The Haar function h_I as a step function.
inline StepFunction haar_function(int depth, const DyadicIndex& idx) {
  HaarCoefficients c(depth);
  if (idx.level >= depth) {
    throw std::invalid_argument("haar_function: no Haar function at leaf level");
  }
  c.coeffs.set(idx, 1.0);
  return synthesize(c);
}

/// <f, h_I^beta>: beta = 0 gives f̂(I), beta = 1 gives the average of f over I.
inline Complex pair(const StepFunction& f, const DyadicIndex& idx, int beta) {
  f.tree().require(idx);
  if (beta != 0 && beta != 1) throw std::invalid_argument("pair: beta must be 0 or 1");
  const int shift = f.depth() - idx.level;
  const std::size_t first = static_cast<std::size_t>(idx.offset) << shift;
  const std::size_t count = std::size_t{1} << shift;
  if (beta == 1) {
    Complex acc{};
    for (std::size_t k = first; k < first + count; ++k) acc += f[k];
    return acc / static_cast<double>(count);
  }
  if (idx.level >= f.depth()) {
    throw std::invalid_argument("pair: beta = 0 requires level(I) <= D-1, got \"" + idx.path() +
                                "\"");
  }
  Complex left{}, right{};
  for (std::size_t k = 0; k < count / 2; ++k) {
    left += f[first + k];
    right += f[first + count / 2 + k];
  }
  return (right - left) * f.cell() / std::sqrt(idx.measure());
}

/// Q_I f = Σ_{J⊆I} f̂(J) h_J.
inline StepFunction project_Q(const StepFunction& f, const DyadicIndex& idx) {
  f.tree().require(idx);
  auto c = analyze(f);
  c.mean = 0.0;
  for (NodeId id = 0; id < f.tree().haar_count(); ++id) {
    if (!DyadicIndex::from_id(id).is_within(idx)) c.coeffs[id] = 0.0;
  }
  return synthesize(c);
}

/// Q_I a = Σ_{J⊆I} a_J h_J for a sequence.
inline StepFunction project_Q(const Symbol& a, const DyadicIndex& idx) {
  a.tree().require(idx);
  HaarCoefficients c(a.depth());
  for (NodeId id = 0; id < a.tree().haar_count(); ++id) {
    if (DyadicIndex::from_id(id).is_within(idx)) c.coeffs[id] = a[id];
  }
  return synthesize(c);
}

}  // namespace paraprod
