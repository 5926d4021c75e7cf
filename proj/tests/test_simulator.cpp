#include <gtest/gtest.h>

#include <numeric>

#include "jcas/simulator.hpp"
#include "test_support.hpp"

using namespace jcas;
namespace jt = jcas::testing;

TEST(SampleRun, BinaryDistortionNearAnalytic) {
  const auto spec = make_binary_multiplicative(0.3, 0.5);
  const auto st = sample_run(spec, {0.5, 0.5}, 1'000'000, 2024);
  EXPECT_NEAR(st.mean_d1, 0.15, 0.005);
  EXPECT_NEAR(total_variation(st.freq, analytic_joint(spec, {0.5, 0.5})), 0.0, 0.01);
  const auto total = std::accumulate(st.counts.begin(), st.counts.end(), std::uint64_t{0});
  EXPECT_EQ(total, 1'000'000u);
}

TEST(SampleRun, DegenerateInputHasZeroDistortion) {
  const auto st = sample_run(make_binary_multiplicative(0.4, 0.6), {0.0, 1.0}, 50'000, 1);
  EXPECT_EQ(st.mean_d1, 0.0);
  EXPECT_EQ(st.mean_d2, 0.0);
}

TEST(SampleRun, DeterministicAcrossRunsAndThreads) {
  Rng rng(6);
  const auto spec = jt::random_channel(rng, {3, 2, 3, 2, 2, 2, 3});
  const auto px = rng.simplex(3);
  const std::size_t n = 3 * kShardSize + 17;
  const auto a = sample_run(spec, px, n, 99, 1);
  EXPECT_EQ(a, sample_run(spec, px, n, 99, 1));
  EXPECT_EQ(a, sample_run(spec, px, n, 99, 8));
  EXPECT_NE(a, sample_run(spec, px, n, 100, 1));
}

TEST(SampleRun, FrequenciesAreCountsOverN) {
  const auto st = sample_run(make_binary_multiplicative(0.5, 0.5), {0.5, 0.5}, 1000, 3);
  double sum = 0;
  for (std::size_t i = 0; i < st.freq.size(); ++i) {
    EXPECT_EQ(st.freq[i], static_cast<double>(st.counts[i]) / 1000.0);
    sum += st.freq[i];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  // P(S1=0, S2=1) = 0, so those cells never fire
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 4; ++y) EXPECT_EQ(st.counts[((x * 2 + 0) * 2 + 1) * 4 + y], 0u);
}

TEST(SampleRun, Errors) {
  const auto spec = make_binary_multiplicative(0.5, 0.5);
  EXPECT_THROW(sample_run(spec, {0.5, 0.5}, 0, 1), DegenerateInput);
  EXPECT_THROW(sample_run(spec, {0.9, 0.9}, 10, 1), DegenerateInput);
}

TEST(VerifyDistortion, Examples) {
  const auto spec = make_binary_multiplicative(0.3, 0.5);
  const auto rep = verify_distortion(spec, {0.5, 0.5}, 1'000'000, 11, 0.01);
  EXPECT_TRUE(rep.pass);
  EXPECT_NEAR(rep.d1.analytic, 0.15, 1e-12);
  EXPECT_GT(rep.d1.std_error, 0.0);
  EXPECT_LT(rep.d1.std_error, 0.001);

  EXPECT_TRUE(verify_distortion(spec, {0.5, 0.5}, 1, 5, 1.0).pass);

  const auto exact = verify_distortion(make_binary_multiplicative(0.0, 0.5), {0.5, 0.5}, 5000, 2, 0.0);
  EXPECT_TRUE(exact.pass);
  EXPECT_EQ(exact.d1.empirical, 0.0);
}

TEST(TotalVariation, Basic) {
  EXPECT_DOUBLE_EQ(total_variation({0.5, 0.5}, {1.0, 0.0}), 0.5);
  EXPECT_EQ(total_variation({0.2, 0.8}, {0.2, 0.8}), 0.0);
}
