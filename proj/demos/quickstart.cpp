// Small tour: build a symbol, apply a paraproduct, compare its norm with the
// Carleson norm, and check a tile-space transplant.
#include <cstdio>

#include "paraprod/paraprod.hpp"

using namespace paraprod;

int main() {
  const int depth = 6;

  ExperimentConfig cfg;
  cfg.depth = depth;
  const Symbol b = random_symbol(cfg, 0, 0);
  const Symbol d = random_symbol(cfg, 0, 1);

  const auto f = haar_function(depth, DyadicIndex::parse("01"));
  const auto g = apply_paraproduct(b, {0, 1}, f);
  std::printf("|P_b^(0,1) h_01| = %.6f\n", norm(g));

  const double n01 = operator_norm(paraproduct(b, {0, 1})).value;
  std::printf("norm of P_b^(0,1) = %.6f, Carleson norm of b = %.6f, ratio %.4f\n", n01, cm_norm(b),
              n01 / cm_norm(b));

  const double n00 = operator_norm(paraproduct(b, {0, 0})).value;
  std::printf("norm of P_b^(0,0) = %.6f, sup |b| = %.6f\n", n00, linf_norm(b));

  const double comp = operator_norm(paraproduct_composition(b, {0, 1}, d, {0, 0})).value;
  const double tile = operator_norm(build_transplant(CompositionKind::type_0100, b, d)).value;
  std::printf("composition (0,1)(0,0): %.6f, tile transplant: %.6f\n", comp, tile);

  const auto rep = composition_testing_constants(CompositionKind::type_0100, b, d);
  std::printf("testing constants c1 = %.6f, c2 = %.6f, norm/(c1+c2) = %.4f\n", rep.c1, rep.c2, rep.ratio_upper);
}
