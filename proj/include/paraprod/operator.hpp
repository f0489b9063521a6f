#pragma once

// Uniform handle for linear operators acting on a vector type (StepFunction
// or TileFunction).  The adjoint is optional; when present it must be the
// Hilbert-space adjoint with respect to the natural L^2 inner product.

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace paraprod {

template <class Vec>
struct Operator {
  int depth = 1;
  std::function<Vec(const Vec&)> apply;
  std::function<Vec(const Vec&)> adjoint;
  std::string label;

  Vec operator()(const Vec& v) const { return apply(v); }
  bool has_adjoint() const { return static_cast<bool>(adjoint); }
};

template <class Vec>
Operator<Vec> adjoint_of(const Operator<Vec>& op) {
  if (!op.has_adjoint()) throw std::logic_error("adjoint_of: operator " + op.label + " has no adjoint");
  return {op.depth, op.adjoint, op.apply, "(" + op.label + ")*"};
}

/// outer ∘ inner.
template <class Vec>
Operator<Vec> compose(const Operator<Vec>& outer, const Operator<Vec>& inner) {
  Operator<Vec> out;
  out.depth = outer.depth;
  out.label = outer.label + " o " + inner.label;
  out.apply = [outer, inner](const Vec& v) { return outer.apply(inner.apply(v)); };
  if (outer.has_adjoint() && inner.has_adjoint()) {
    out.adjoint = [outer, inner](const Vec& v) { return inner.adjoint(outer.adjoint(v)); };
  }
  return out;
}

template <class Vec>
Operator<Vec> operator+(const Operator<Vec>& a, const Operator<Vec>& b) {
  Operator<Vec> out;
  out.depth = a.depth;
  out.label = a.label + " + " + b.label;
  out.apply = [a, b](const Vec& v) {
    Vec r = a.apply(v);
    r += b.apply(v);
    return r;
  };
  if (a.has_adjoint() && b.has_adjoint()) {
    out.adjoint = [a, b](const Vec& v) {
      Vec r = a.adjoint(v);
      r += b.adjoint(v);
      return r;
    };
  }
  return out;
}

template <class Vec>
Operator<Vec> operator-(const Operator<Vec>& a, const Operator<Vec>& b) {
  Operator<Vec> out;
  out.depth = a.depth;
  out.label = a.label + " - " + b.label;
  out.apply = [a, b](const Vec& v) {
    Vec r = a.apply(v);
    r -= b.apply(v);
    return r;
  };
  if (a.has_adjoint() && b.has_adjoint()) {
    out.adjoint = [a, b](const Vec& v) {
      Vec r = a.adjoint(v);
      r -= b.adjoint(v);
      return r;
    };
  }
  return out;
}

template <class Vec>
Operator<Vec> sum_of(const std::vector<Operator<Vec>>& terms) {
  if (terms.empty()) throw std::invalid_argument("sum_of: no terms");
  Operator<Vec> acc = terms.front();
  for (std::size_t k = 1; k < terms.size(); ++k) acc = acc + terms[k];
  return acc;
}

template <class Vec>
Operator<Vec> identity_operator(int depth) {
  auto id = [](const Vec& v) { return v; };
  return {depth, id, id, "I"};
}

}  // namespace paraprod
