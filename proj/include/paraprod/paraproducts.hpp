#pragma once

// Dyadic paraproducts P_b^(α,β) f = Σ_I b_I <f, h_I^β> h_I^α on the truncated
// tree, their compositions, the Pott–Smith expansion of P^(1,1), the dyadic
// shift, the multiplier decomposition and closed-form Gram entries.
//
// Adjoint convention (checked against dense matrices in the tests):
//   (P_b^(α,β))* = P_{conj(b)}^(β,α).
// Gram entries follow the same convention: gram_entry(b, d, ...) is the Haar
// matrix entry of P_{conj(b)}^(0,1) ∘ P_d^(·,0).

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "paraprod/dyadic_tree.hpp"
#include "paraprod/haar_space.hpp"
#include "paraprod/operator.hpp"
#include "paraprod/symbol.hpp"

namespace paraprod {

using StepOperator = Operator<StepFunction>;

struct ParaproductType {
  int alpha = 0;
  int beta = 0;

  ParaproductType() = default;
  ParaproductType(int a, int b) : alpha(a), beta(b) {
    if ((a != 0 && a != 1) || (b != 0 && b != 1)) {
      throw std::invalid_argument("ParaproductType: indices must be 0 or 1");
    }
  }
  ParaproductType dual() const { return {beta, alpha}; }
  std::string str() const { return "(" + std::to_string(alpha) + "," + std::to_string(beta) + ")"; }
  friend bool operator==(const ParaproductType&, const ParaproductType&) = default;
};

inline StepFunction apply_paraproduct(const Symbol& b, ParaproductType t, const StepFunction& f) {
  if (b.depth() != f.depth()) throw std::invalid_argument("apply_paraproduct: depth mismatch");
  b.require_haar_levels("apply_paraproduct");
  const auto& tree = b.tree();
  const auto s = detail::interval_integrals(f);

  Symbol x(b.depth());
  for (NodeId id = 0; id < tree.haar_count(); ++id) {
    if (b[id] == Complex{}) continue;
    const double len = TreeShape::measure_of(id);
    const Complex pairing =
        t.beta == 0 ? (s[TreeShape::right(id)] - s[TreeShape::left(id)]) / std::sqrt(len)
                    : s[id] / len;
    x[id] = b[id] * pairing;
  }
  if (t.alpha == 0) return synthesize(HaarCoefficients(0.0, std::move(x)));
  return detail::synthesize_averaging(x);
}

inline StepOperator paraproduct(const Symbol& b, ParaproductType t) {
  b.require_haar_levels("paraproduct");
  const Symbol bc = b.conj();
  StepOperator op;
  op.depth = b.depth();
  op.label = "P" + t.str();
  op.apply = [b, t](const StepFunction& f) { return apply_paraproduct(b, t, f); };
  op.adjoint = [bc, t](const StepFunction& f) { return apply_paraproduct(bc, t.dual(), f); };
  return op;
}

/// P_b^(α,β) ∘ P_d^(γ,δ).
inline StepOperator paraproduct_composition(const Symbol& b, ParaproductType outer, const Symbol& d,
                                            ParaproductType inner) {
  b.require_same_tree(d, "paraproduct_composition");
  return compose(paraproduct(b, outer), paraproduct(d, inner));
}

/// P_b^(α,0) ∘ P_d^(0,δ) = P_{b∘d}^(α,δ); returns b∘d.
inline Symbol compose_reduce(const Symbol& b, const Symbol& d, int alpha, int delta) {
  ParaproductType(alpha, delta);  // validates the indices
  b.require_haar_levels("compose_reduce");
  d.require_haar_levels("compose_reduce");
  return schur(b, d);
}

/// Rank-one operator f ↦ c <f, 1> 1 on [0,1).
inline StepOperator mean_projector(int depth, Complex c) {
  StepOperator op;
  op.depth = depth;
  op.label = "mean projector";
  op.apply = [c](const StepFunction& f) {
    Complex m{};
    for (const auto& v : f.leaves()) m += v;
    m *= f.cell();
    return StepFunction::constant(f.depth(), c * m);
  };
  op.adjoint = [cc = std::conj(c)](const StepFunction& f) {
    Complex m{};
    for (const auto& v : f.leaves()) m += v;
    m *= f.cell();
    return StepFunction::constant(f.depth(), cc * m);
  };
  return op;
}

/// P_a^(1,1) = P_{Ŝ(a)}^(1,0) + P_{Ŝ(a)}^(0,1) + P_{E(a)}^(0,0) + correction.
///
/// On [0,1) the upward expansion h_I^1 = Σ_{K⊋I} ĥ_I^1(K) h_K + 1 terminates
/// in the constant, which contributes the rank-one term root_mass·<·,1>1 with
/// root_mass = Σ_I a_I.  The diagonal of the expansion only sees I ⊊ J, so
/// the inclusive E(a) overshoots by P_{diagonal_part}^(0,0), diagonal_part_J =
/// a_J / |J|.  Both pieces make up `correction`.
struct PsDecomposition {
  Symbol sweep_part;
  Symbol e_part;
  Symbol diagonal_part;
  Complex root_mass;
  StepOperator root_correction;
  StepOperator correction;

  /// Sum of the three paraproducts plus the correction.
  StepOperator assembled() const {
    return paraproduct(sweep_part, {1, 0}) + paraproduct(sweep_part, {0, 1}) +
           paraproduct(e_part, {0, 0}) + correction;
  }
};

inline PsDecomposition ps_decompose(const Symbol& a) {
  a.require_haar_levels("ps_decompose");
  Symbol diag(a.depth());
  for (NodeId id = 0; id < a.tree().haar_count(); ++id) {
    diag[id] = a[id] / TreeShape::measure_of(id);
  }
  const Complex mass = subtree_sums(a.tree(), a.entries())[0];
  auto root = mean_projector(a.depth(), mass);
  root.label = "root correction";
  auto corr = root - paraproduct(diag, {0, 0});
  corr.label = "PS correction";
  return {sweep(a), e_seq(a), diag, mass, root, corr};
}

/// Dyadic shift S h_I = h_{I-} - h_{I+}; the half shift keeps h_I ↦ h_{I-}.
/// Haar functions on level D-1 map to 0 (their children carry no Haar function)
/// and constants are annihilated.
inline StepFunction shift_apply(const StepFunction& f, bool half) {
  const auto& tree = f.tree();
  const auto c = analyze(f);
  HaarCoefficients out(f.depth());
  for (NodeId id = 0; id < tree.haar_count(); ++id) {
    const NodeId l = TreeShape::left(id), r = TreeShape::right(id);
    if (!tree.is_haar(l)) continue;
    out.coeffs[l] += c.coeffs[id];
    if (!half) out.coeffs[r] -= c.coeffs[id];
  }
  return synthesize(out);
}

inline StepFunction shift_adjoint_apply(const StepFunction& f, bool half) {
  const auto& tree = f.tree();
  const auto c = analyze(f);
  HaarCoefficients out(f.depth());
  for (NodeId id = 0; id < tree.haar_count(); ++id) {
    const NodeId l = TreeShape::left(id), r = TreeShape::right(id);
    if (!tree.is_haar(l)) continue;
    out.coeffs[id] = c.coeffs[l] - (half ? Complex{} : c.coeffs[r]);
  }
  return synthesize(out);
}

inline StepOperator shift_operator(int depth, bool half) {
  StepOperator op;
  op.depth = depth;
  op.label = half ? "S_half" : "S";
  op.apply = [half](const StepFunction& f) { return shift_apply(f, half); };
  op.adjoint = [half](const StepFunction& f) { return shift_adjoint_apply(f, half); };
  return op;
}

/// Pointwise multiplication M_w on leaf values.
inline StepOperator multiplier_operator(const StepFunction& w) {
  StepOperator op;
  op.depth = w.depth();
  op.label = "M_w";
  op.apply = [w](const StepFunction& f) {
    StepFunction out = f;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= w[k];
    return out;
  };
  op.adjoint = [w](const StepFunction& f) {
    StepFunction out = f;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= std::conj(w[k]);
    return out;
  };
  return op;
}

/// M_b = P_{b̂}^(0,1) + P_{b̂}^(1,0) + P_{<b>}^(0,0) + <b>_root <·>_root 1.
struct MultiplierDecomposition {
  Symbol p01;
  Symbol p10;
  Symbol p00;
  StepOperator root_remainder;

  StepOperator assembled() const {
    return paraproduct(p01, {0, 1}) + paraproduct(p10, {1, 0}) + paraproduct(p00, {0, 0}) +
           root_remainder;
  }
};

inline MultiplierDecomposition mult_decompose(const StepFunction& b) {
  for (const auto& v : b.leaves()) {
    if (v.imag() != 0.0 || !(v.real() > 0.0)) {
      throw std::invalid_argument("mult_decompose: multiplier must be strictly positive on leaves");
    }
  }
  const auto c = analyze(b);
  const auto s = detail::interval_integrals(b);
  Symbol averages(b.depth());
  for (NodeId id = 0; id < b.tree().haar_count(); ++id) {
    averages[id] = s[id] / TreeShape::measure_of(id);
  }
  auto rem = mean_projector(b.depth(), c.mean);
  rem.label = "root remainder";
  return {c.coeffs, c.coeffs, averages, rem};
}

enum class CompositionKind { type_0110, type_0100 };

inline std::string to_string(CompositionKind k) {
  return k == CompositionKind::type_0110 ? "(0,1,1,0)" : "(0,1,0,0)";
}

/// Closed-form Haar Gram entries G_{I,J} = <P_{b̄}^(0,1) P_d^(·,0) h_J, h_I>:
///   type_0110: conj(b_I) d_J |I∩J| / (|I||J|)
///   type_0100: conj(b_I) d_J ĥ_I^1(J) = ∓conj(b_I) d_J / sqrt|J| for I ⊆ J∓
inline Complex gram_entry(const Symbol& b, const Symbol& d, CompositionKind kind,
                          const DyadicIndex& I, const DyadicIndex& J) {
  b.require_same_tree(d, "gram_entry");
  if (I.level >= b.depth() || J.level >= b.depth()) {
    throw std::invalid_argument("gram_entry: indices must be at Haar levels");
  }
  const Complex coef = std::conj(b.at(I)) * d.at(J);
  if (kind == CompositionKind::type_0110) {
    if (J.is_within(I)) return coef / I.measure();
    if (I.is_within(J)) return coef / J.measure();
    return 0.0;
  }
  if (I.is_within(J.left_child())) return -coef / std::sqrt(J.measure());
  if (I.is_within(J.right_child())) return coef / std::sqrt(J.measure());
  return 0.0;
}

}  // namespace paraprod
