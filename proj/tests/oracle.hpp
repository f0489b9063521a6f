#pragma once

// Slow reference implementations used only by the tests.  Nothing here calls
// the library's fast paths: Haar functions are evaluated pointwise, subtrees
// are found by comparing interval endpoints, tile inner products come from
// rectangle intersections, and norms use a Jacobi SVD.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;

struct Node {
  int level;
  std::uint64_t offset;
  double lo() const { return std::ldexp(static_cast<double>(offset), -level); }
  double hi() const { return std::ldexp(static_cast<double>(offset + 1), -level); }
  double len() const { return std::ldexp(1.0, -level); }
  double mid() const { return 0.5 * (lo() + hi()); }
};

/// Nodes of a depth-D tree in heap order.
inline std::vector<Node> nodes(int depth) {
  std::vector<Node> out;
  for (int l = 0; l <= depth; ++l) {
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << l); ++k) out.push_back({l, k});
  }
  return out;
}

inline std::size_t haar_count(int depth) { return (std::size_t{1} << depth) - 1; }

/// J ⊆ I by endpoints.
inline bool within(const Node& j, const Node& i) { return j.lo() >= i.lo() && j.hi() <= i.hi(); }

inline double haar_at(const Node& i, double x) {
  if (x < i.lo() || x >= i.hi()) return 0.0;
  return (x < i.mid() ? -1.0 : 1.0) / std::sqrt(i.len());
}

inline double avg_kernel_at(const Node& i, double x) {
  return (x >= i.lo() && x < i.hi()) ? 1.0 / i.len() : 0.0;
}

inline double h_at(int type, const Node& i, double x) { return type == 0 ? haar_at(i, x) : avg_kernel_at(i, x); }

inline double leaf_mid(int depth, std::size_t k) { return (static_cast<double>(k) + 0.5) * std::ldexp(1.0, -depth); }

/// Matrix of P_b^(α,β) in the orthonormal leaf basis u_y = 1_y / sqrt(cell).
inline CMat paraproduct_leaf(int depth, const std::vector<Complex>& b, int alpha, int beta) {
  const auto ns = nodes(depth);
  const std::size_t n = std::size_t{1} << depth;
  const double cell = std::ldexp(1.0, -depth);
  CMat m = CMat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t id = 0; id < haar_count(depth); ++id) {
    if (b[id] == Complex{}) continue;
    for (std::size_t x = 0; x < n; ++x) {
      const double hx = h_at(alpha, ns[id], leaf_mid(depth, x));
      if (hx == 0.0) continue;
      for (std::size_t y = 0; y < n; ++y) {
        const double hy = h_at(beta, ns[id], leaf_mid(depth, y));
        m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) += cell * b[id] * hx * hy;
      }
    }
  }
  return m;
}

/// Orthogonal change of basis from leaf coordinates to (mean, h_node0, h_node1, ...).
inline Eigen::MatrixXd leaf_to_haar(int depth) {
  const auto ns = nodes(depth);
  const std::size_t n = std::size_t{1} << depth;
  const double rc = std::sqrt(std::ldexp(1.0, -depth));
  Eigen::MatrixXd w(n, n);
  for (std::size_t y = 0; y < n; ++y) {
    w(0, static_cast<Eigen::Index>(y)) = rc;
    for (std::size_t id = 0; id < haar_count(depth); ++id) {
      w(static_cast<Eigen::Index>(id + 1), static_cast<Eigen::Index>(y)) = rc * haar_at(ns[id], leaf_mid(depth, y));
    }
  }
  return w;
}

inline CMat to_haar(int depth, const CMat& leaf) {
  const Eigen::MatrixXd w = leaf_to_haar(depth);
  return w.cast<Complex>() * leaf * w.transpose().cast<Complex>();
}

inline double norm2(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()[0];
}

inline double norm2(const Eigen::MatrixXd& m) { return norm2(CMat(m.cast<Complex>())); }

/// Σ_{J⊆I} v_J by scanning every node.
template <class T>
T subtree_sum(int depth, const std::vector<T>& v, std::size_t i) {
  const auto ns = nodes(depth);
  T acc{};
  for (std::size_t j = 0; j < ns.size(); ++j) {
    if (within(ns[j], ns[i])) acc += v[j];
  }
  return acc;
}

inline double cm_norm(int depth, const std::vector<Complex>& a) {
  const auto ns = nodes(depth);
  double best = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < ns.size(); ++j) {
      if (within(ns[j], ns[i])) s += std::norm(a[j]);
    }
    best = std::max(best, s / ns[i].len());
  }
  return std::sqrt(best);
}

// --- tile geometry ---------------------------------------------------------

struct Rect {
  double x0, x1, y0, y1;
  double area() const { return std::max(0.0, x1 - x0) * std::max(0.0, y1 - y0); }
};

inline double overlap(const Rect& a, const Rect& b) {
  return Rect{std::max(a.x0, b.x0), std::min(a.x1, b.x1), std::max(a.y0, b.y0), std::min(a.y1, b.y1)}.area();
}

/// Leaf tiles reach down to the real axis.
inline Rect tile(int depth, const Node& i) {
  return {i.lo(), i.hi(), i.level == depth ? 0.0 : 0.5 * i.len(), i.len()};
}

inline Rect square(const Node& i) { return {i.lo(), i.hi(), 0.0, i.len()}; }

inline Node left(const Node& i) { return {i.level + 1, 2 * i.offset}; }
inline Node right(const Node& i) { return {i.level + 1, 2 * i.offset + 1}; }

/// Positive U in orthonormal tile coordinates: entry (K, L) = <1̃_{T(L)}, 1̃_{Q(K)}>.
inline Eigen::MatrixXd positive_u(int depth) {
  const auto ns = nodes(depth);
  const auto n = static_cast<Eigen::Index>(ns.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Rect q = square(ns[k]);
    for (Eigen::Index l = 0; l < n; ++l) {
      const Rect t = tile(depth, ns[l]);
      m(k, l) = overlap(t, q) / std::sqrt(t.area() * q.area());
    }
  }
  return m;
}

/// Signed U: entry (L, K) = <1̃_{Q±(K)}, 1̃_{T(L)}> for Haar K, zero columns otherwise.
inline Eigen::MatrixXd signed_u(int depth) {
  const auto ns = nodes(depth);
  const auto n = static_cast<Eigen::Index>(ns.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(haar_count(depth)); ++k) {
    const Rect qm = square(left(ns[k])), qp = square(right(ns[k]));
    const double nrm = std::sqrt(qm.area() + qp.area());
    for (Eigen::Index l = 0; l < n; ++l) {
      const Rect t = tile(depth, ns[l]);
      m(l, k) = (overlap(t, qp) - overlap(t, qm)) / (nrm * std::sqrt(t.area()));
    }
  }
  return m;
}

/// ν(R) for a tile-constant density given per node.
inline double mass(int depth, const std::vector<double>& nu, const Rect& r) {
  const auto ns = nodes(depth);
  double s = 0.0;
  for (std::size_t l = 0; l < ns.size(); ++l) s += nu[l] * overlap(tile(depth, ns[l]), r);
  return s;
}

}  // namespace oracle
