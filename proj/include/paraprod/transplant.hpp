#pragma once

// Tile-constant functions on the upper half-plane and the operators that
// paraproduct compositions become under V h_I = 1̃_{T(I)}.
//
// Geometry: T(I) = I × [|I|/2, |I|] for interior nodes.  Leaf tiles are
// completed to the full box L × [0, |L|], so the tiles under K partition the
// Carleson square Q(K) and |Q(K)| = |K|^2 exactly.  The norm is the plain area
// integral.
//
// Consequences of this normalization (all measured in the tests):
//   ‖1_{Q±(K)}‖ = |K|/√2
//   positive U in tree form:   (Uf)(K) = (1/√2) s(K)^-2 I*(s^2 f)(K) off the leaves
//   T^(0,1,1,0) Gram = (1/√2) · gram_entry on J ⊆ I, zero above the diagonal
//   T^(0,1,0,0) Gram = 1 · gram_entry on all Haar pairs

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "paraprod/dyadic_tree.hpp"
#include "paraprod/haar_space.hpp"
#include "paraprod/opnorm.hpp"
#include "paraprod/operator.hpp"
#include "paraprod/paraproducts.hpp"
#include "paraprod/symbol.hpp"

namespace paraprod {

/// Area of tile T(I): |I|^2/2 inside, |I|^2 on leaves when leaf-completed.
inline double tile_area(const TreeShape& tree, NodeId id, bool leaf_completed = true) {
  const double len = TreeShape::measure_of(id);
  return (leaf_completed && tree.is_leaf(id)) ? len * len : 0.5 * len * len;
}

class TileFunction {
 public:
  explicit TileFunction(int depth, bool leaf_completed = true)
      : tree_(depth), values_(tree_.node_count()), leaf_completed_(leaf_completed) {}

  TileFunction(int depth, std::vector<Complex> values, bool leaf_completed = true)
      : tree_(depth), values_(std::move(values)), leaf_completed_(leaf_completed) {
    if (values_.size() != tree_.node_count()) {
      throw std::invalid_argument("TileFunction: expected one value per tile");
    }
  }

  const TreeShape& tree() const { return tree_; }
  int depth() const { return tree_.depth(); }
  std::size_t size() const { return values_.size(); }
  bool leaf_completed() const { return leaf_completed_; }
  double area(NodeId id) const { return tile_area(tree_, id, leaf_completed_); }

  Complex operator[](NodeId id) const { return values_[id]; }
  Complex& operator[](NodeId id) { return values_[id]; }
  Complex at(const DyadicIndex& idx) const {
    tree_.require(idx);
    return values_[idx.id()];
  }
  const std::vector<Complex>& values() const { return values_; }

  TileFunction& operator+=(const TileFunction& g) {
    require_same_layout(g);
    for (NodeId id = 0; id < size(); ++id) values_[id] += g[id];
    return *this;
  }
  TileFunction& operator-=(const TileFunction& g) {
    require_same_layout(g);
    for (NodeId id = 0; id < size(); ++id) values_[id] -= g[id];
    return *this;
  }
  TileFunction& operator*=(Complex s) {
    for (auto& v : values_) v *= s;
    return *this;
  }
  friend TileFunction operator+(TileFunction f, const TileFunction& g) { return f += g; }
  friend TileFunction operator-(TileFunction f, const TileFunction& g) { return f -= g; }
  friend TileFunction operator*(Complex s, TileFunction f) { return f *= s; }

  void require_same_layout(const TileFunction& g) const {
    if (g.depth() != depth() || g.leaf_completed_ != leaf_completed_) {
      throw std::invalid_argument("TileFunction: layout mismatch");
    }
  }

 private:
  TreeShape tree_;
  std::vector<Complex> values_;
  bool leaf_completed_;
};

inline Complex inner(const TileFunction& f, const TileFunction& g) {
  f.require_same_layout(g);
  Complex acc{};
  for (NodeId id = 0; id < f.size(); ++id) acc += f[id] * std::conj(g[id]) * f.area(id);
  return acc;
}

inline double norm(const TileFunction& f) {
  double acc = 0.0;
  for (NodeId id = 0; id < f.size(); ++id) acc += std::norm(f[id]) * f.area(id);
  return std::sqrt(acc);
}

/// <f, g>_{L^2(w)} for a tile-constant weight w.
inline Complex weighted_inner(const TileFunction& f, const TileFunction& g, const TreeWeight& w) {
  f.require_same_layout(g);
  Complex acc{};
  for (NodeId id = 0; id < f.size(); ++id) acc += f[id] * std::conj(g[id]) * w[id] * f.area(id);
  return acc;
}

inline double weighted_norm(const TileFunction& f, const TreeWeight& w) {
  return std::sqrt(weighted_inner(f, f, w).real());
}

/// f / ‖f‖; the zero function is returned unchanged.
inline TileFunction normalized(TileFunction f) {
  const double n = norm(f);
  if (n > 0.0) f *= 1.0 / n;
  return f;
}

/// Orthonormal tile coordinates: c_I = f_I sqrt(area(T(I))).
template <>
struct Coordinates<TileFunction> {
  static Eigen::Index dim(int depth) { return static_cast<Eigen::Index>(TreeShape(depth).node_count()); }

  static CVector to_coords(const TileFunction& f) {
    CVector v(static_cast<Eigen::Index>(f.size()));
    for (NodeId id = 0; id < f.size(); ++id) v[static_cast<Eigen::Index>(id)] = f[id] * std::sqrt(f.area(id));
    return v;
  }

  static TileFunction from_coords(int depth, const CVector& v) {
    TileFunction f(depth);
    if (v.size() != static_cast<Eigen::Index>(f.size())) {
      throw std::invalid_argument("from_coords: dimension mismatch");
    }
    for (NodeId id = 0; id < f.size(); ++id) f[id] = v[static_cast<Eigen::Index>(id)] / std::sqrt(f.area(id));
    return f;
  }
};

using TileOperator = Operator<TileFunction>;

enum class Region { tile, square, signed_square };

/// 1_{T(K)}, 1_{Q(K)} or 1_{Q±(K)} = -1_{Q(K-)} + 1_{Q(K+)}.
inline TileFunction region_indicator(int depth, Region kind, const DyadicIndex& k) {
  TileFunction f(depth);
  f.tree().require(k);
  if (kind == Region::tile) {
    f[k.id()] = 1.0;
    return f;
  }
  if (kind == Region::signed_square && k.level >= depth) {
    throw std::invalid_argument("region_indicator: signed square needs level(K) <= D-1");
  }
  for (NodeId id = 0; id < f.size(); ++id) {
    const auto l = DyadicIndex::from_id(id);
    if (kind == Region::square) {
      if (l.is_within(k)) f[id] = 1.0;
    } else if (l.is_within(k.left_child())) {
      f[id] = -1.0;
    } else if (l.is_within(k.right_child())) {
      f[id] = 1.0;
    }
  }
  return f;
}

/// M_a^λ: the value on T(K) is scaled by a_K |K|^λ.
inline TileFunction mult_lambda(const Symbol& a, double lambda, const TileFunction& f) {
  if (a.depth() != f.depth()) throw std::invalid_argument("mult_lambda: depth mismatch");
  TileFunction out = f;
  for (NodeId id = 0; id < out.size(); ++id) {
    out[id] *= a[id] * std::pow(TreeShape::measure_of(id), lambda);
  }
  return out;
}

inline TileFunction mult_lambda(const TreeWeight& a, double lambda, const TileFunction& f) {
  if (a.depth() != f.depth()) throw std::invalid_argument("mult_lambda: depth mismatch");
  TileFunction out = f;
  for (NodeId id = 0; id < out.size(); ++id) {
    out[id] *= a[id] * std::pow(TreeShape::measure_of(id), lambda);
  }
  return out;
}

inline TileOperator mult_lambda_operator(const Symbol& a, double lambda) {
  TileOperator op;
  op.depth = a.depth();
  op.label = "M^" + std::to_string(lambda);
  op.apply = [a, lambda](const TileFunction& f) { return mult_lambda(a, lambda, f); };
  op.adjoint = [ac = a.conj(), lambda](const TileFunction& f) { return mult_lambda(ac, lambda, f); };
  return op;
}

enum class UKind { positive, signed_kernel };

namespace detail {

/// Σ_{L⊆K} f_L area(L) for every K.
inline std::vector<Complex> square_integrals(const TileFunction& f) {
  std::vector<Complex> w(f.size());
  for (NodeId id = 0; id < f.size(); ++id) w[id] = f[id] * f.area(id);
  return subtree_sums(f.tree(), w);
}

}  // namespace detail

/// positive: Σ_K <f, 1̃_{Q(K)}> 1̃_{T(K)} over every tile.
/// signed:   Σ_{K Haar} <f, 1̃_{T(K)}> 1̃_{Q±(K)}.
inline TileFunction u_apply(UKind kind, const TileFunction& f) {
  const auto& tree = f.tree();
  TileFunction out(f.depth(), f.leaf_completed());
  if (kind == UKind::positive) {
    const auto s = detail::square_integrals(f);
    for (NodeId id = 0; id < f.size(); ++id) {
      out[id] = s[id] / (TreeShape::measure_of(id) * std::sqrt(f.area(id)));
    }
    return out;
  }
  // Top-down: each Haar ancestor K adds ∓ its weight on the tiles under K∓.
  std::vector<Complex> acc(f.size());
  for (NodeId id = 0; id < tree.haar_count(); ++id) {
    const Complex w = f[id] * std::sqrt(f.area(id)) * std::sqrt(2.0) / TreeShape::measure_of(id);
    acc[TreeShape::left(id)] = acc[id] - w;
    acc[TreeShape::right(id)] = acc[id] + w;
  }
  for (NodeId id = 0; id < f.size(); ++id) out[id] = acc[id];
  return out;
}

/// Explicit adjoint kernels: positive Σ 1̃_{Q(K)} ⊗ 1̃_{T(K)}, signed Σ 1̃_{T(K)} ⊗ 1̃_{Q±(K)}.
inline TileFunction u_adjoint_apply(UKind kind, const TileFunction& g) {
  const auto& tree = g.tree();
  TileFunction out(g.depth(), g.leaf_completed());
  if (kind == UKind::positive) {
    std::vector<Complex> acc(g.size());
    for (NodeId id = 0; id < g.size(); ++id) {
      const Complex w = g[id] * std::sqrt(g.area(id)) / TreeShape::measure_of(id);
      acc[id] = (id == 0 ? Complex{} : acc[TreeShape::parent(id)]) + w;
    }
    for (NodeId id = 0; id < g.size(); ++id) out[id] = acc[id];
    return out;
  }
  const auto s = detail::square_integrals(g);
  for (NodeId id = 0; id < tree.haar_count(); ++id) {
    const Complex c =
        (s[TreeShape::right(id)] - s[TreeShape::left(id)]) * std::sqrt(2.0) / TreeShape::measure_of(id);
    out[id] = c / std::sqrt(g.area(id));
  }
  return out;
}

inline TileOperator u_operator(int depth, UKind kind) {
  TileOperator op;
  op.depth = depth;
  op.label = kind == UKind::positive ? "U+" : "U±";
  op.apply = [kind](const TileFunction& f) { return u_apply(kind, f); };
  op.adjoint = [kind](const TileFunction& f) { return u_adjoint_apply(kind, f); };
  return op;
}

/// Tree integral in sequence form: (I*f)(K) = Σ_{L⊆K} f(L).
inline std::vector<double> tree_adjoint_integral(const TreeShape& tree, std::span<const double> f) {
  return subtree_sums(tree, f);
}

inline std::vector<Complex> tree_adjoint_integral(const TreeShape& tree, std::span<const Complex> f) {
  return subtree_sums(tree, f);
}

inline std::vector<double> tree_adjoint_integral(const TreeWeight& f) {
  return subtree_sums(f.tree(), f.values());
}

/// Scale in the tree form of positive U under the plain-area normalization.
inline const double kTreeFormScale = 1.0 / std::sqrt(2.0);

/// scale · s(K)^-2 I*(s^2 f)(K) with s(K) = |K|.  Agrees with u_apply(positive)
/// on interior tiles whenever f vanishes on the leaf tiles.
inline TileFunction tree_form_positive_u(const TileFunction& f, double scale = kTreeFormScale) {
  std::vector<Complex> s2f(f.size());
  for (NodeId id = 0; id < f.size(); ++id) {
    const double len = TreeShape::measure_of(id);
    s2f[id] = len * len * f[id];
  }
  const auto acc = tree_adjoint_integral(f.tree(), std::span<const Complex>(s2f));
  TileFunction out(f.depth(), f.leaf_completed());
  for (NodeId id = 0; id < f.size(); ++id) {
    const double len = TreeShape::measure_of(id);
    out[id] = scale * acc[id] / (len * len);
  }
  return out;
}

/// T^(0,1,1,0) = M_{b̄}^0 U+ M_d^-1 and T^(0,1,0,0) = M_{b̄}^-1 U± M_d^{1/2}.
inline TileOperator build_transplant(CompositionKind kind, const Symbol& b, const Symbol& d) {
  b.require_same_tree(d, "build_transplant");
  const Symbol bc = b.conj();
  const int depth = b.depth();
  TileOperator out;
  if (kind == CompositionKind::type_0110) {
    out = compose(mult_lambda_operator(bc, 0.0),
                  compose(u_operator(depth, UKind::positive), mult_lambda_operator(d, -1.0)));
  } else {
    out = compose(mult_lambda_operator(bc, -1.0),
                  compose(u_operator(depth, UKind::signed_kernel), mult_lambda_operator(d, 0.5)));
  }
  out.label = "T" + to_string(kind);
  return out;
}

/// Gram entries of P_{b̄}^(0,1)∘P_d^(·,0) in the Haar basis, indexed by node id
/// (row I, column J), zero-padded to the full tile dimension.
inline CMatrix closed_form_gram(const Symbol& b, const Symbol& d, CompositionKind kind) {
  const auto& tree = b.tree();
  const auto n = static_cast<Eigen::Index>(tree.node_count());
  CMatrix g = CMatrix::Zero(n, n);
  for (NodeId i = 0; i < tree.haar_count(); ++i) {
    for (NodeId j = 0; j < tree.haar_count(); ++j) {
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          gram_entry(b, d, kind, DyadicIndex::from_id(i), DyadicIndex::from_id(j));
    }
  }
  return g;
}

struct GramMatch {
  /// Least-squares c with T ≈ c·G on the compared entries.
  Complex constant;
  /// max |T - c G| over the compared entries.
  double residual = 0.0;
  /// max |T| over the entries outside the compared region.
  double outside = 0.0;
  std::size_t compared = 0;
};

/// Compares the dense Gram matrix of build_transplant(kind, b, d) with the
/// closed form: kind (0,1,1,0) on the lower triangle J ⊆ I, kind (0,1,0,0)
/// on all Haar pairs.
inline GramMatch transplant_gram_match(CompositionKind kind, const Symbol& b, const Symbol& d) {
  const auto& tree = b.tree();
  const CMatrix t = dense_materialize(build_transplant(kind, b, d));
  const CMatrix g = closed_form_gram(b, d, kind);
  auto compared = [&](NodeId i, NodeId j) {
    if (!tree.is_haar(i) || !tree.is_haar(j)) return false;
    if (kind == CompositionKind::type_0100) return true;
    return DyadicIndex::from_id(j).is_within(DyadicIndex::from_id(i));
  };
  Complex num{};
  double den = 0.0;
  GramMatch m;
  for (NodeId i = 0; i < tree.node_count(); ++i) {
    for (NodeId j = 0; j < tree.node_count(); ++j) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      if (compared(i, j)) {
        num += std::conj(g(ii, jj)) * t(ii, jj);
        den += std::norm(g(ii, jj));
        ++m.compared;
      } else {
        m.outside = std::max(m.outside, std::abs(t(ii, jj)));
      }
    }
  }
  m.constant = den > 0.0 ? num / den : Complex{};
  for (NodeId i = 0; i < tree.node_count(); ++i) {
    for (NodeId j = 0; j < tree.node_count(); ++j) {
      if (!compared(i, j)) continue;
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      m.residual = std::max(m.residual, std::abs(t(ii, jj) - m.constant * g(ii, jj)));
    }
  }
  return m;
}

/// Gram constants under the plain-area normalization.
inline const double kGramConstant0110 = 1.0 / std::sqrt(2.0);
inline constexpr double kGramConstant0100 = 1.0;

struct TestingReport {
  double c1 = 0.0;
  double c2 = 0.0;
  double brute_norm = 0.0;
  /// max(c1, c2) / brute_norm; 0 when brute_norm is 0.
  double ratio_lower = 0.0;
  /// brute_norm / (c1 + c2); 0 when c1 + c2 is 0.
  double ratio_upper = 0.0;
};

inline TestingReport make_report(double c1, double c2, double brute) {
  TestingReport r{c1, c2, brute, 0.0, 0.0};
  if (brute > 0.0) r.ratio_lower = std::max(c1, c2) / brute;
  if (c1 + c2 > 0.0) r.ratio_upper = brute / (c1 + c2);
  return r;
}

/// Dense matrix of g ↦ I*(gω) from ℓ²(ω) to ℓ²(σ) in orthonormal coordinates:
/// A[K, L] = sqrt(σ_K) sqrt(ω_L) [L ⊆ K].
inline Eigen::MatrixXd tree_inequality_matrix(const TreeWeight& omega, const TreeWeight& sigma) {
  if (omega.tree() != sigma.tree()) throw std::invalid_argument("tree_inequality_matrix: depth mismatch");
  const auto& tree = omega.tree();
  const auto n = static_cast<Eigen::Index>(tree.node_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (NodeId l = 0; l < tree.node_count(); ++l) {
    const double sw = std::sqrt(omega[l]);
    if (sw == 0.0) continue;
    // Walk from L up to the root.
    for (NodeId k = l;; k = TreeShape::parent(k)) {
      a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = std::sqrt(sigma[k]) * sw;
      if (k == 0) break;
    }
  }
  return a;
}

/// c1^2 = max_I Σ_{J⊆I} (I*ω(J))^2 σ(J) / I*ω(I) over I with I*ω(I) > 0.
/// The tree inequality has a single testing condition, so c2 is reported as 0.
inline TestingReport tree_two_weight_constants(const TreeWeight& omega, const TreeWeight& sigma) {
  if (omega.tree() != sigma.tree()) throw std::invalid_argument("tree_two_weight_constants: depth mismatch");
  const auto& tree = omega.tree();
  const auto w = tree_adjoint_integral(omega);
  std::vector<double> x(tree.node_count());
  for (NodeId id = 0; id < x.size(); ++id) x[id] = w[id] * w[id] * sigma[id];
  const auto y = subtree_sums(tree, x);
  double c1sq = 0.0;
  for (NodeId id = 0; id < x.size(); ++id) {
    if (w[id] > 0.0) c1sq = std::max(c1sq, y[id] / w[id]);
  }
  const double brute = largest_singular_value(tree_inequality_matrix(omega, sigma));
  return make_report(std::sqrt(c1sq), 0.0, brute);
}

namespace detail {

/// max_I num(I)/den(I) over den(I) > 0.
inline double max_ratio(const std::vector<double>& num, const std::vector<double>& den) {
  double m = 0.0;
  for (std::size_t k = 0; k < num.size(); ++k) {
    if (den[k] > 0.0) m = std::max(m, num[k] / den[k]);
  }
  return m;
}

/// max_I [Σ_{J⊆I} |x_J|^2 |J|^-2 (Σ_{L⊆J}|y_L|^2)^2] / Σ_{L⊆I}|y_L|^2.
inline double positive_testing_sq(const Symbol& x, const Symbol& y) {
  const auto& tree = x.tree();
  const auto yw = TreeWeight::abs2(y);
  const auto ys = subtree_sums(tree, yw.values());
  std::vector<double> t(tree.node_count());
  for (NodeId id = 0; id < t.size(); ++id) {
    const double len = TreeShape::measure_of(id);
    t[id] = std::norm(x[id]) / (len * len) * ys[id] * ys[id];
  }
  return max_ratio(subtree_sums(tree, t), ys);
}

}  // namespace detail

/// Testing constants for P_b^(0,1)∘P_d^(1,0) (kind 0110) and
/// P_b^(0,1)∘P_d^(0,0) (kind 0100); brute_norm is the dense norm of that
/// composition on StepFunction.
inline TestingReport composition_testing_constants(CompositionKind kind, const Symbol& b, const Symbol& d) {
  b.require_same_tree(d, "composition_testing_constants");
  const auto& tree = b.tree();
  double c1 = 0.0, c2 = 0.0;
  ParaproductType inner_type{1, 0};
  if (kind == CompositionKind::type_0110) {
    c1 = std::sqrt(detail::positive_testing_sq(b, d));
    c2 = std::sqrt(detail::positive_testing_sq(d, b));
  } else {
    inner_type = {0, 0};
    const auto bw = TreeWeight::abs2(b);
    const auto strict = strict_subtree_sums(tree, bw.values());
    const auto incl = subtree_sums(tree, bw.values());
    for (NodeId id = 0; id < tree.node_count(); ++id) {
      c1 = std::max(c1, std::abs(d[id]) * std::sqrt(strict[id] / TreeShape::measure_of(id)));
    }
    std::vector<double> t(tree.node_count());
    for (NodeId id = 0; id < tree.haar_count(); ++id) {
      const double diff = incl[TreeShape::right(id)] - incl[TreeShape::left(id)];
      t[id] = std::norm(d[id]) / TreeShape::measure_of(id) * diff * diff;
    }
    c2 = std::sqrt(detail::max_ratio(subtree_sums(tree, t), incl));
  }
  const double brute =
      operator_norm(paraproduct_composition(b, {0, 1}, d, inner_type), {.method = NormMethod::dense}).value;
  return make_report(c1, c2, brute);
}

/// ν(Q(K)) = Σ_{L⊆K} ν_L area(L) for every K.
inline std::vector<double> square_masses(const TreeWeight& nu) {
  std::vector<double> m(nu.size());
  for (NodeId id = 0; id < m.size(); ++id) m[id] = nu[id] * tile_area(nu.tree(), id);
  return subtree_sums(nu.tree(), m);
}

/// ν̃(J) = sqrt(ν(J+) ν(J-) / (ν(J+) + ν(J-))).
inline double balanced_mass(const TreeWeight& nu, const DyadicIndex& j) {
  nu.tree().require(j);
  if (j.level >= nu.depth()) throw std::invalid_argument("balanced_mass: J must be at a Haar level");
  const auto m = square_masses(nu);
  const double mp = m[j.right_child().id()], mm = m[j.left_child().id()];
  if (!(mp > 0.0) || !(mm > 0.0)) {
    throw std::invalid_argument("weighted basis at \"" + j.path() + "\" undefined: a child has zero mass");
  }
  return std::sqrt(mp * mm / (mp + mm));
}

/// H^J_ν = ν̃(J) (-1_{Q(J+)}/ν(J+) + 1_{Q(J-)}/ν(J-)), a unit vector of L²(ν)
/// with ν-mean zero.
inline TileFunction weighted_haar(const TreeWeight& nu, const DyadicIndex& j) {
  const double bal = balanced_mass(nu, j);
  const auto m = square_masses(nu);
  const double mp = m[j.right_child().id()], mm = m[j.left_child().id()];
  TileFunction h(nu.depth());
  for (NodeId id = 0; id < h.size(); ++id) {
    const auto l = DyadicIndex::from_id(id);
    if (l.is_within(j.right_child())) h[id] = -bal / mp;
    else if (l.is_within(j.left_child())) h[id] = bal / mm;
  }
  return h;
}

/// (1/|I|)(1_{Q(I-)} - 1_{Q(I+)}): the signed square in the orientation of H^I_ν.
inline TileFunction weighted_test_square(int depth, const DyadicIndex& i) {
  auto f = region_indicator(depth, Region::signed_square, i);
  f *= -1.0 / i.measure();
  return f;
}

/// <(1/|I|)(1_{Q(I-)} - 1_{Q(I+)}), H^J_ν>_{L²(ν)} in closed form:
///   0                                      if J ⊊ I or I ∩ J = ∅
///   -(1/|I|)(ν̃(J)/ν(J+))(ν(I-) - ν(I+))    if I ⊆ J+
///   +(1/|I|)(ν̃(J)/ν(J-))(ν(I-) - ν(I+))    if I ⊆ J-
///   (2/|I|) ν̃(J)                          if I = J
inline double weighted_basis_coeff(const DyadicIndex& i, const DyadicIndex& j, const TreeWeight& nu) {
  nu.tree().require(i);
  if (i.level >= nu.depth()) throw std::invalid_argument("weighted_basis_coeff: I must be at a Haar level");
  const double bal = balanced_mass(nu, j);
  const auto m = square_masses(nu);
  const double inv = 1.0 / i.measure();
  if (i == j) return 2.0 * inv * bal;
  if (!i.strictly_within(j)) return 0.0;
  const double tilt = m[i.left_child().id()] - m[i.right_child().id()];
  if (i.is_within(j.right_child())) return -inv * bal / m[j.right_child().id()] * tilt;
  return inv * bal / m[j.left_child().id()] * tilt;
}

/// Dense matrix of U_μ f = U±(fμ) from L²(μ) to L²(ν) in orthonormal coordinates:
/// A[L, K] = ± sqrt(ν_L area(L)) sqrt(μ_K) √2/|K| for L ⊆ K±.
inline Eigen::MatrixXd ntv_matrix(const TreeWeight& mu, const TreeWeight& nu) {
  if (mu.tree() != nu.tree()) throw std::invalid_argument("ntv_matrix: depth mismatch");
  const auto& tree = mu.tree();
  const auto n = static_cast<Eigen::Index>(tree.node_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (NodeId l = 1; l < tree.node_count(); ++l) {
    const double out = std::sqrt(nu[l] * tile_area(tree, l));
    if (out == 0.0) continue;
    NodeId child = l;
    for (NodeId k = TreeShape::parent(l);; k = TreeShape::parent(k)) {
      const double sign = child == TreeShape::left(k) ? -1.0 : 1.0;
      a(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) =
          sign * out * std::sqrt(mu[k]) * std::sqrt(2.0) / TreeShape::measure_of(k);
      if (k == 0) break;
      child = k;
    }
  }
  return a;
}

/// U_μ as a tile operator: f ↦ U±(fμ).  Its L²(μ)→L²(ν) adjoint is g ↦ U±*(gν).
inline TileFunction ntv_apply(const TreeWeight& mu, const TileFunction& f) {
  return u_apply(UKind::signed_kernel, mult_lambda(mu, 0.0, f));
}

inline TileFunction ntv_adjoint_apply(const TreeWeight& nu, const TileFunction& g) {
  return u_adjoint_apply(UKind::signed_kernel, mult_lambda(nu, 0.0, g));
}

struct NtvReport {
  TestingReport testing;
  /// Entries of the signed squares against the H_ν basis, by relation of (I, J).
  double a_block_max = 0.0;  // I ⊊ J
  double b_block_max = 0.0;  // J ⊊ I, zero by construction
  double c_block_max = 0.0;  // I = J
  std::size_t basis_size = 0;
};

/// Testing constants for U_μ : L²(μ) → L²(ν):
///   c1 = max_I ‖U(μ 1_{T(I)})‖_ν / sqrt(μ(T(I)))
///   c2 = max_I ‖1_{Q(I)} U*(ν 1_{Q(I)})‖_μ / sqrt(ν(Q(I)))
/// both in closed form, plus the dense norm and the block diagnostics.  The
/// blocks are computed by direct tile integration over the H^J_ν that exist.
inline NtvReport ntv_verify(const TreeWeight& mu, const TreeWeight& nu) {
  if (mu.tree() != nu.tree()) throw std::invalid_argument("ntv_verify: depth mismatch");
  const auto& tree = mu.tree();
  const auto nq = square_masses(nu);

  double c1sq = 0.0;
  for (NodeId id = 0; id < tree.haar_count(); ++id) {
    const double len = TreeShape::measure_of(id);
    const double below = nq[id] - nu[id] * tile_area(tree, id);
    if (mu[id] > 0.0) c1sq = std::max(c1sq, 2.0 * mu[id] * below / (len * len));
  }

  std::vector<double> t(tree.node_count());
  for (NodeId id = 0; id < tree.haar_count(); ++id) {
    const double len = TreeShape::measure_of(id);
    const double diff = nq[TreeShape::right(id)] - nq[TreeShape::left(id)];
    t[id] = 2.0 * mu[id] * diff * diff / (len * len);
  }
  const double c2sq = detail::max_ratio(subtree_sums(tree, t), nq);

  NtvReport r;
  r.testing = make_report(std::sqrt(c1sq), std::sqrt(c2sq), largest_singular_value(ntv_matrix(mu, nu)));

  std::vector<TileFunction> basis;
  std::vector<DyadicIndex> where;
  for (NodeId id = 0; id < tree.haar_count(); ++id) {
    const NodeId lc = TreeShape::left(id), rc = TreeShape::right(id);
    if (nq[lc] > 0.0 && nq[rc] > 0.0) {
      where.push_back(DyadicIndex::from_id(id));
      basis.push_back(weighted_haar(nu, where.back()));
    }
  }
  r.basis_size = basis.size();
  for (NodeId id = 0; id < tree.haar_count(); ++id) {
    const auto i = DyadicIndex::from_id(id);
    const auto f = weighted_test_square(tree.depth(), i);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const double v = std::abs(weighted_inner(f, basis[k], nu));
      const auto& j = where[k];
      if (i == j) r.c_block_max = std::max(r.c_block_max, v);
      else if (j.strictly_within(i)) r.b_block_max = std::max(r.b_block_max, v);
      else if (i.strictly_within(j)) r.a_block_max = std::max(r.a_block_max, v);
    }
  }
  return r;
}

}  // namespace paraprod
