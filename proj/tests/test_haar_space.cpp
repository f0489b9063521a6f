#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "paraprod/haar_space.hpp"

using namespace paraprod;

namespace {

StepFunction random_step(int depth, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StepFunction f(depth);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = Complex(g(rng), g(rng));
  return f;
}

StepFunction left_half(int depth) { return StepFunction::indicator(depth, DyadicIndex::parse("0")); }

}  // namespace

TEST(Analyze, SpecExamples) {
  const auto c = analyze(left_half(1));
  EXPECT_NEAR(c.mean.real(), 0.5, 1e-15);
  EXPECT_NEAR(c.coeffs.at("").real(), -0.5, 1e-15);

  const auto one = analyze(StepFunction::constant(4, 1.0));
  EXPECT_NEAR(std::abs(one.mean - 1.0), 0.0, 1e-15);
  EXPECT_EQ(one.coeffs.nonzero_count(), 0u);

  const auto h = analyze(haar_function(4, DyadicIndex::root()));
  EXPECT_NEAR(std::abs(h.mean), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(h.coeffs.at("") - 1.0), 0.0, 1e-15);
  EXPECT_EQ(h.coeffs.nonzero_count(), 1u);
}

TEST(Synthesize, SpecExamples) {
  HaarCoefficients c(3);
  c.mean = 1.0;
  const auto flat = synthesize(c);
  for (const auto& v : flat.leaves()) EXPECT_EQ(v, Complex(1.0));

  HaarCoefficients h(1);
  h.coeffs.set("", 1.0);
  const auto f = synthesize(h);
  EXPECT_EQ(f[0], Complex(-1.0));
  EXPECT_EQ(f[1], Complex(1.0));
}

TEST(Synthesize, RoundTripRandom) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  HaarCoefficients c(6);
  c.mean = Complex(g(rng), g(rng));
  for (NodeId id = 0; id < c.coeffs.tree().haar_count(); ++id) c.coeffs[id] = Complex(g(rng), g(rng));
  const auto back = analyze(synthesize(c));
  EXPECT_LE(std::abs(back.mean - c.mean), 1e-12);
  for (NodeId id = 0; id < c.coeffs.size(); ++id) EXPECT_LE(std::abs(back.coeffs[id] - c.coeffs[id]), 1e-12);
}

TEST(HaarFunction, MatchesPointwiseDefinition) {
  const int depth = 4;
  const auto ns = oracle::nodes(depth);
  for (NodeId id = 0; id < oracle::haar_count(depth); ++id) {
    const auto f = haar_function(depth, DyadicIndex::from_id(id));
    for (std::size_t k = 0; k < f.size(); ++k) {
      EXPECT_NEAR(f[k].real(), oracle::haar_at(ns[id], oracle::leaf_mid(depth, k)), 1e-12);
    }
  }
  EXPECT_THROW(haar_function(depth, DyadicIndex::parse("0000")), std::invalid_argument);
}

TEST(Pair, SpecExamples) {
  const auto one = StepFunction::constant(3, 1.0);
  for (NodeId id = 0; id < one.tree().node_count(); ++id) {
    EXPECT_NEAR(std::abs(pair(one, DyadicIndex::from_id(id), 1) - 1.0), 0.0, 1e-15);
  }
  for (NodeId id = 0; id < one.tree().haar_count(); ++id) {
    EXPECT_NEAR(std::abs(pair(one, DyadicIndex::from_id(id), 0)), 0.0, 1e-15);
  }
  const auto f = left_half(3);
  EXPECT_NEAR(pair(f, DyadicIndex::parse("0"), 1).real(), 1.0, 1e-15);
  EXPECT_NEAR(pair(f, DyadicIndex::root(), 1).real(), 0.5, 1e-15);
}

TEST(Pair, BetaZeroAtLeafRejected) {
  EXPECT_THROW(pair(StepFunction(2), DyadicIndex::parse("01"), 0), std::invalid_argument);
  EXPECT_NO_THROW(pair(StepFunction(2), DyadicIndex::parse("01"), 1));
  EXPECT_THROW(pair(StepFunction(2), DyadicIndex::root(), 2), std::invalid_argument);
}

TEST(Pair, AgreesWithAnalyze) {
  std::mt19937_64 rng(3);
  const auto f = random_step(5, rng);
  const auto c = analyze(f);
  for (NodeId id = 0; id < f.tree().haar_count(); ++id) {
    EXPECT_LE(std::abs(pair(f, DyadicIndex::from_id(id), 0) - c.coeffs[id]), 1e-12);
  }
}

TEST(Parseval, RandomDepth8) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const auto f = random_step(8, rng);
    const auto c = analyze(f);
    double s = std::norm(c.mean);
    for (const auto& z : c.coeffs.entries()) s += std::norm(z);
    const double n = norm(f);
    EXPECT_NEAR(n * n, s, 1e-10);
  }
}

TEST(ProjectQ, SpecExamples) {
  std::mt19937_64 rng(5);
  const auto f = random_step(4, rng);
  const auto q = project_Q(f, DyadicIndex::root());
  const auto mean = analyze(f).mean;
  for (std::size_t k = 0; k < f.size(); ++k) EXPECT_LE(std::abs(q[k] - (f[k] - mean)), 1e-12);

  const auto zero = project_Q(StepFunction::constant(4, 1.0), DyadicIndex::parse("01"));
  for (const auto& v : zero.leaves()) EXPECT_LE(std::abs(v), 1e-15);

  HaarCoefficients c(4);
  c.coeffs.set("0", 1.0);
  c.coeffs.set("1", 1.0);
  const auto p = analyze(project_Q(synthesize(c), DyadicIndex::parse("0")));
  EXPECT_NEAR(std::abs(p.coeffs.at("0") - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(p.coeffs.at("1")), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(p.mean), 0.0, 1e-12);
}

TEST(ProjectQ, IdempotentAndSelfAdjoint) {
  std::mt19937_64 rng(9);
  const auto f = random_step(5, rng), g = random_step(5, rng);
  for (const char* path : {"", "1", "01", "110"}) {
    const auto i = DyadicIndex::parse(path);
    const auto qf = project_Q(f, i);
    const auto qqf = project_Q(qf, i);
    for (std::size_t k = 0; k < f.size(); ++k) EXPECT_LE(std::abs(qf[k] - qqf[k]), 1e-12);
    EXPECT_LE(std::abs(inner(qf, g) - inner(f, project_Q(g, i))), 1e-12);
  }
}

TEST(Pair, RootedUpwardExpansion) {
  // For mean-zero f: <f, h_I^1> = Σ_{K⊋I} f̂(K) <h_K, h_I^1>.
  std::mt19937_64 rng(13);
  const int depth = 5;
  auto f = random_step(depth, rng);
  f -= StepFunction::constant(depth, analyze(f).mean);
  const auto c = analyze(f);
  const auto ns = oracle::nodes(depth);
  for (NodeId i = 0; i < f.tree().node_count(); ++i) {
    Complex s{};
    for (NodeId k = 0; k < f.tree().haar_count(); ++k) {
      if (!(oracle::within(ns[i], ns[k]) && ns[i].level > ns[k].level)) continue;
      s += c.coeffs[k] * oracle::haar_at(ns[k], ns[i].mid());
    }
    EXPECT_LE(std::abs(pair(f, DyadicIndex::from_id(i), 1) - s), 1e-10);
  }
}

TEST(StepFunction, Validation) {
  EXPECT_THROW(StepFunction(2, std::vector<Complex>(3)), std::invalid_argument);
  EXPECT_THROW(StepFunction(2) += StepFunction(3), std::invalid_argument);
  EXPECT_THROW(StepFunction::indicator(2, DyadicIndex::parse("000")), std::out_of_range);
}
