#pragma once

// Operator-norm oracles.  Operators are moved into orthonormal coordinates
// (Coordinates<Vec>) and either materialized densely, where the norm is the
// largest singular value, or handled matrix-free by power iteration on T*T.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "paraprod/haar_space.hpp"
#include "paraprod/operator.hpp"

namespace paraprod {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr std::size_t kDefaultDenseCeiling = 4096;

/// Matrix-free operator between coordinate spaces C^cols -> C^rows.
struct LinearOperator {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::function<CVector(const CVector&)> apply;
  std::function<CVector(const CVector&)> adjoint;
  std::string label;

  bool has_adjoint() const { return static_cast<bool>(adjoint); }
};

/// Orthonormal coordinates for a vector type.  Specialized per space.
template <class Vec>
struct Coordinates;

/// StepFunction in the haar_plus_mean basis: slot 0 is the mean, slot k >= 1
/// is the Haar coefficient of node k-1.
template <>
struct Coordinates<StepFunction> {
  static Eigen::Index dim(int depth) { return static_cast<Eigen::Index>(TreeShape(depth).leaf_count()); }

  static CVector to_coords(const StepFunction& f) {
    const auto c = analyze(f);
    CVector v(dim(f.depth()));
    v[0] = c.mean;
    for (NodeId id = 0; id < f.tree().haar_count(); ++id) v[static_cast<Eigen::Index>(id) + 1] = c.coeffs[id];
    return v;
  }

  static StepFunction from_coords(int depth, const CVector& v) {
    if (v.size() != dim(depth)) throw std::invalid_argument("from_coords: dimension mismatch");
    HaarCoefficients c(depth);
    c.mean = v[0];
    for (NodeId id = 0; id < c.coeffs.tree().haar_count(); ++id) c.coeffs[id] = v[static_cast<Eigen::Index>(id) + 1];
    return synthesize(c);
  }
};

template <class Vec>
LinearOperator to_linear(const Operator<Vec>& op) {
  using C = Coordinates<Vec>;
  LinearOperator out;
  out.rows = out.cols = C::dim(op.depth);
  out.label = op.label;
  const int depth = op.depth;
  out.apply = [op, depth](const CVector& x) { return C::to_coords(op.apply(C::from_coords(depth, x))); };
  if (op.has_adjoint()) {
    out.adjoint = [op, depth](const CVector& x) {
      return C::to_coords(op.adjoint(C::from_coords(depth, x)));
    };
  }
  return out;
}

inline LinearOperator to_linear(const CMatrix& m, std::string label = "matrix") {
  LinearOperator out;
  out.rows = m.rows();
  out.cols = m.cols();
  out.label = std::move(label);
  out.apply = [m](const CVector& x) -> CVector { return m * x; };
  out.adjoint = [m](const CVector& x) -> CVector { return m.adjoint() * x; };
  return out;
}

/// Column k is the operator applied to the k-th basis vector.
inline CMatrix dense_materialize(const LinearOperator& op,
                                 std::size_t ceiling = kDefaultDenseCeiling) {
  const auto big = static_cast<std::size_t>(std::max(op.rows, op.cols));
  if (big > ceiling) {
    throw std::length_error("dense_materialize: dimension " + std::to_string(big) +
                            " exceeds ceiling " + std::to_string(ceiling) + " for " + op.label);
  }
  CMatrix m(op.rows, op.cols);
  CVector e = CVector::Zero(op.cols);
  for (Eigen::Index k = 0; k < op.cols; ++k) {
    e[k] = 1.0;
    m.col(k) = op.apply(e);
    e[k] = 0.0;
  }
  return m;
}

template <class Vec>
CMatrix dense_materialize(const Operator<Vec>& op, std::size_t ceiling = kDefaultDenseCeiling) {
  return dense_materialize(to_linear(op), ceiling);
}

/// Materializes the hand-coded adjoint.
inline CMatrix dense_adjoint(const LinearOperator& op, std::size_t ceiling = kDefaultDenseCeiling) {
  if (!op.has_adjoint()) throw std::logic_error("dense_adjoint: " + op.label + " has no adjoint");
  LinearOperator adj{op.cols, op.rows, op.adjoint, op.apply, op.label + "*"};
  return dense_materialize(adj, ceiling);
}

/// max |A*_coded - conj(A)^T| entrywise.
inline double adjoint_mismatch(const LinearOperator& op, std::size_t ceiling = kDefaultDenseCeiling) {
  const CMatrix a = dense_materialize(op, ceiling);
  const CMatrix b = dense_adjoint(op, ceiling);
  return (b - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Largest singular value; uses a real SVD when every entry is real.
inline double largest_singular_value(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
    const Eigen::MatrixXd re = m.real();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(re);
    return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  }
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

inline double largest_singular_value(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()[0];
}

enum class NormMethod { automatic, dense, power };

inline std::string to_string(NormMethod m) {
  switch (m) {
    case NormMethod::automatic: return "auto";
    case NormMethod::dense: return "dense";
    case NormMethod::power: return "power";
  }
  return "?";
}

struct NormOptions {
  double tol = 1e-10;
  NormMethod method = NormMethod::automatic;
  /// automatic picks dense up to this dimension.
  std::size_t dense_limit = 1024;
  std::size_t ceiling = kDefaultDenseCeiling;
  int restarts = 5;
  std::uint64_t seed = 0x5eed;
  int max_iter = 20000;
};

struct NormEstimate {
  double value = 0.0;
  NormMethod method = NormMethod::dense;
  int iterations = 0;
  /// Dense: 0.  Power: ‖T*Tx - λx‖ / λ at the best restart.
  double residual = 0.0;
  bool converged = true;
};

namespace detail {

inline CVector random_unit(Eigen::Index n, std::uint64_t seed, int restart) {
  std::seed_seq seq{seed, static_cast<std::uint64_t>(restart)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> g;
  CVector x(n);
  for (Eigen::Index k = 0; k < n; ++k) x[k] = Complex(g(rng), g(rng));
  return x / x.norm();
}

}  // namespace detail

inline NormEstimate power_norm(const LinearOperator& op, const NormOptions& opt) {
  std::function<CVector(const CVector&)> adj = op.adjoint;
  if (!adj) {
    // Fall back to the dense conjugate transpose.
    const CMatrix m = dense_materialize(op, opt.ceiling);
    adj = [mh = CMatrix(m.adjoint())](const CVector& y) -> CVector { return mh * y; };
  }
  NormEstimate best;
  best.method = NormMethod::power;
  best.converged = true;
  if (op.cols == 0 || op.rows == 0) return best;
  const double stop = 0.01 * opt.tol;

  for (int r = 0; r < std::max(1, opt.restarts); ++r) {
    CVector x = detail::random_unit(op.cols, opt.seed, r);
    double prev = 0.0, value = 0.0, residual = 0.0;
    bool conv = false;
    int it = 0;
    for (; it < opt.max_iter; ++it) {
      const CVector y = op.apply(x);
      value = y.norm();  // Rayleigh quotient of T*T is value^2
      if (value == 0.0) {
        conv = true;
        break;
      }
      CVector z = adj(y);
      const double lambda = value * value;
      residual = (z - lambda * x).norm() / lambda;
      const double zn = z.norm();
      if (zn == 0.0) {
        conv = true;
        break;
      }
      x = z / zn;
      if (it > 0 && std::abs(value - prev) <= stop * value) {
        conv = true;
        ++it;
        break;
      }
      prev = value;
    }
    if (r == 0 || value > best.value) {
      best.value = value;
      best.iterations = it;
      best.residual = residual;
    }
    best.converged = best.converged && conv;
  }
  return best;
}

inline NormEstimate operator_norm(const LinearOperator& op, const NormOptions& opt = {}) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("operator_norm: tol must be positive");
  const auto big = static_cast<std::size_t>(std::max(op.rows, op.cols));
  const bool dense = opt.method == NormMethod::dense ||
                     (opt.method == NormMethod::automatic && big <= opt.dense_limit);
  if (!dense) return power_norm(op, opt);
  NormEstimate est;
  est.method = NormMethod::dense;
  est.value = largest_singular_value(dense_materialize(op, opt.ceiling));
  return est;
}

template <class Vec>
NormEstimate operator_norm(const Operator<Vec>& op, const NormOptions& opt = {}) {
  return operator_norm(to_linear(op), opt);
}

inline NormEstimate operator_norm(const CMatrix& m, const NormOptions& opt = {}) {
  return operator_norm(to_linear(m), opt);
}

/// Row-major CSV; each cell is a quoted "re,im" pair.
inline void write_matrix_csv(std::ostream& os, const CMatrix& m) {
  os.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << '"' << m(i, j).real() << ',' << m(i, j).imag() << '"';
    }
    os << '\n';
  }
}

}  // namespace paraprod
