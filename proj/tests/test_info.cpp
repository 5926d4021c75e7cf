#include <gtest/gtest.h>

#include "jcas/channel.hpp"
#include "jcas/info.hpp"
#include "test_support.hpp"

using namespace jcas;
using enum Var;
namespace jt = jcas::testing;

namespace {

JointDistribution random_joint(Rng& rng, const ChannelSpec& spec) {
  return build_joint(spec, jt::random_design(rng, spec, jt::random_size(rng, 1, 4),
                                             jt::random_size(rng, 1, 3)));
}

JointDistribution binary_joint(double q, double alpha, double p) {
  return build_joint(make_binary_multiplicative(q, alpha), InputDesign{{1 - p, p}, {}, {}});
}

} // namespace

TEST(Entropy, UniformFourSymbols) {
  JointDistribution j({X}, {4}, {0.25, 0.25, 0.25, 0.25});
  EXPECT_DOUBLE_EQ(entropy(j, {X}), 2.0);
}

TEST(Entropy, DeterministicCopyHasNoConditionalEntropy) {
  JointDistribution j({X, Y1}, {3, 3}, {0.2, 0, 0, 0, 0.5, 0, 0, 0, 0.3});
  EXPECT_NEAR(entropy(j, {Y1}, {X}), 0.0, 1e-15);
}

TEST(Entropy, BinaryExampleHY1GivenS1) {
  // q * H_b(p) at q = p = 0.5, since S1 = 0 forces Y1 = 0 and S1 = 1 gives Y1 = X.
  const auto j = binary_joint(0.5, 0.5, 0.5);
  EXPECT_NEAR(entropy(j, {Y1}, {S1}), 0.5, 1e-12);
  const auto spec = make_binary_multiplicative(0.5, 0.5);
  const auto oracle = jt::oracle_joint(spec, InputDesign{{0.5, 0.5}, {}, {}});
  EXPECT_NEAR(jt::oracle_hc(oracle, {jt::cY1}, {jt::cS1}), 0.5, 1e-12);
}

TEST(Entropy, Errors) {
  const auto j = binary_joint(0.3, 0.3, 0.3);
  EXPECT_THROW(entropy(j, {X}, {X}), OverlapError);
  EXPECT_THROW(entropy(marginalize(j, {X, S1}), {Y1}), UnknownVariable);
  EXPECT_THROW(mutual_information(j, {X}, {Y1}, {Y1}), OverlapError);
  EXPECT_THROW(marginalize(j, {X, X}), OverlapError);
}

TEST(MutualInformation, IndependentVariablesGiveZero) {
  JointDistribution j({X, Y1}, {2, 3}, {0.1, 0.2, 0.1, 0.15, 0.3, 0.15});
  EXPECT_NEAR(mutual_information(j, {X}, {Y1}), 0.0, 1e-12);
}

TEST(MutualInformation, BinaryExampleIXY1GivenS1) {
  const auto j = binary_joint(0.5, 0.5, 0.5);
  EXPECT_NEAR(mutual_information(j, {X}, {Y1}, {S1}), 0.5 * binary_entropy(0.5), 1e-12);
  for (double q : {0.2, 0.7})
    for (double p : {0.1, 0.6})
      EXPECT_NEAR(mutual_information(binary_joint(q, 0.4, p), {X}, {Y1}, {S1}),
                  q * binary_entropy(p), 1e-12);
}

TEST(MutualInformation, SymmetricOnRandomJoints) {
  Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    const auto spec = jt::random_channel(rng, jt::random_alphabets(rng));
    const auto j = random_joint(rng, spec);
    EXPECT_NEAR(mutual_information(j, {V}, {Y1, S2}), mutual_information(j, {Y1, S2}, {V}), 1e-12);
    EXPECT_NEAR(mutual_information(j, {X}, {Y2}, {S1}), mutual_information(j, {Y2}, {X}, {S1}),
                1e-12);
  }
}

TEST(BinaryEntropy, Values) {
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  // log2(3) - 2/3, evaluated at 30 digits
  EXPECT_NEAR(binary_entropy(1.0 / 3.0), 0.918295834054489557, 1e-15);
  EXPECT_THROW(binary_entropy(-0.01), DomainError);
  EXPECT_THROW(binary_entropy(1.01), DomainError);
}

TEST(PosPart, Values) {
  EXPECT_EQ(pos_part(0.3), 0.3);
  EXPECT_EQ(pos_part(-0.2), 0.0);
  EXPECT_EQ(pos_part(0.0), 0.0);
}

TEST(BuildJoint, BinaryMarginals) {
  const auto spec = make_binary_multiplicative(0.5, 0.5);
  const auto j = build_joint(spec, InputDesign{{0.5, 0.5}, {}, {}});
  EXPECT_EQ(marginalize(j, {X}).probs(), (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(marginalize(j, {S1, S2}).probs(), spec.state_dist);
  EXPECT_EQ(j.dim(U), 1u);
  EXPECT_EQ(j.dim(V), 2u);
}

TEST(BuildJoint, NormalizedAndMatchesNestedLoopOracle) {
  Rng rng(4);
  for (int i = 0; i < 25; ++i) {
    const auto spec = jt::random_channel(rng, {2, 2, 2, 2, 2, 2, 2});
    const auto design = jt::random_design(rng, spec, 3, 2);
    const auto j = build_joint(spec, design);
    EXPECT_NEAR(j.total(), 1.0, 1e-12);
    const auto oracle = jt::oracle_joint(spec, design);
    ASSERT_EQ(oracle.size(), j.probs().size());
    std::size_t k = 0;
    for (const auto& [tuple, p] : oracle) EXPECT_NEAR(j.probs()[k++], p, 1e-15);
  }
}

TEST(BuildJoint, Errors) {
  const auto spec = make_binary_multiplicative(0.5, 0.5);
  EXPECT_THROW(build_joint(spec, InputDesign{{1.0}, {}, {}}), DimensionMismatch);
  EXPECT_THROW(build_joint(spec, InputDesign{{0.5, 0.5}, Matrix{{1.0}}, {}}), DimensionMismatch);
  EXPECT_THROW(build_joint(spec, InputDesign{{0.5, 0.5}, Matrix{{0.5, 0.5}, {1.0}}, {}}),
               DimensionMismatch);
  EXPECT_THROW(build_joint(spec, InputDesign{{0.7, 0.7}, {}, {}}), DegenerateInput);
  EXPECT_THROW(JointDistribution({X, Y1}, {2}, {1.0, 0.0}), DimensionMismatch);
  EXPECT_THROW(JointDistribution::cell_count({1000, 1000, 1000}), JointTooLarge);
}

TEST(Marginalize, KeepAllIsIdentityKeepNoneIsScalar) {
  const auto j = binary_joint(0.3, 0.6, 0.4);
  const auto all = marginalize(j, j.vars());
  EXPECT_EQ(all.probs(), j.probs());
  const auto none = marginalize(j, {});
  ASSERT_EQ(none.probs().size(), 1u);
  EXPECT_NEAR(none.probs()[0], 1.0, 1e-15);
}

TEST(Marginalize, BinaryXY1ClosedForm) {
  const double q = 0.3, p = 0.4;
  const auto m = marginalize(binary_joint(q, 0.6, p), {X, Y1});
  const double p_s1[] = {1 - q, q};
  const double p_x[] = {1 - p, p};
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y1 = 0; y1 < 2; ++y1) {
      double want = 0;
      for (std::size_t s1 = 0; s1 < 2; ++s1) want += p_s1[s1] * (y1 == s1 * x) * p_x[x];
      EXPECT_NEAR(m.probs()[x * 2 + y1], want, 1e-15);
    }
}

TEST(Marginalize, ReordersAxes) {
  JointDistribution j({X, Y1}, {2, 3}, {0.1, 0.2, 0.0, 0.3, 0.25, 0.15});
  const auto m = marginalize(j, {Y1, X});
  EXPECT_EQ(m.probs(), (std::vector<double>{0.1, 0.3, 0.2, 0.25, 0.0, 0.15}));
}

TEST(InfoIdentities, ChainRuleTwoPathsAndNonnegativity) {
  Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    const auto spec = jt::random_channel(rng, jt::random_alphabets(rng));
    const auto j = random_joint(rng, spec);
    EXPECT_NEAR(entropy(j, {V, Y1}), entropy(j, {V}) + entropy(j, {Y1}, {V}), 1e-12);
    EXPECT_NEAR(mutual_information(j, {V}, {Y1}, {S1}),
                entropy(j, {V}, {S1}) - entropy(j, {V}, {Y1, S1}), 1e-12);
    for (const auto& [a, b, g] : {std::tuple{VarList{U}, VarList{Y1}, VarList{S1}},
                                  {VarList{V}, VarList{Y2}, VarList{S2, U}},
                                  {VarList{X}, VarList{Y1, S1}, VarList{}}}) {
      EXPECT_GE(mutual_information(j, a, b, g), -1e-12);
      EXPECT_GE(entropy(j, a, g), -1e-12);
    }
    EXPECT_LE(mutual_information(j, {V}, {S1, S2}), 1e-12);
    EXPECT_LE(mutual_information(j, {X}, {S1, S2}), 1e-12);
    EXPECT_NEAR(mutual_information(j, {V}, {Y2, S2}), mutual_information(j, {V}, {Y2}, {S2}),
                1e-12);
  }
}

TEST(InfoIdentities, AgreesWithMapOracle) {
  Rng rng(12);
  for (int i = 0; i < 20; ++i) {
    const auto spec = jt::random_channel(rng, jt::random_alphabets(rng));
    const auto design = jt::random_design(rng, spec, 3, 2);
    const auto j = build_joint(spec, design);
    const auto o = jt::oracle_joint(spec, design);
    EXPECT_NEAR(mutual_information(j, {V}, {Y1}, {S1, U}),
                jt::oracle_i(o, {jt::cV}, {jt::cY1}, {jt::cS1, jt::cU}), 1e-12);
    EXPECT_NEAR(entropy(j, {Y1, S1}, {Y2, S2}),
                jt::oracle_hc(o, {jt::cY1, jt::cS1}, {jt::cY2, jt::cS2}), 1e-12);
  }
}
