#include <gtest/gtest.h>

#include <array>

#include "partype/belief.hpp"
#include "test_types.hpp"

namespace partype {
namespace {

TEST(UpdateBelief, WorkedExamples) {
  auto b = update_belief(TypeBelief({0.5, 0.5}), std::array{0.2, 0.1});
  EXPECT_NEAR(b[0], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(b[1], 1.0 / 3.0, 1e-12);

  auto u = update_belief(TypeBelief::uniform(4), std::array{0.3, 0.3, 0.3, 0.3});
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(u[k], 0.25, 1e-15);

  auto z = update_belief(TypeBelief({1.0, 0.0}), std::array{0.5, 0.5});
  EXPECT_EQ(z[0], 1.0);
  EXPECT_EQ(z[1], 0.0);
}

TEST(UpdateBelief, ZeroLikelihoodIsFloored) {
  auto b = update_belief(TypeBelief({0.5, 0.5}), std::array{0.0, 0.5});
  EXPECT_GT(b[0], 0.0);
  EXPECT_NEAR(b[0], 1e-12 / (1e-12 + 0.5), 1e-20);
}

TEST(UpdateBelief, RejectsDimensionMismatch) {
  EXPECT_THROW(update_belief(TypeBelief::uniform(3), std::array{0.1, 0.2}), std::invalid_argument);
  EXPECT_THROW(TypeBelief({0.7, 0.7}), std::invalid_argument);
}

TEST(UpdateBelief, InvariantUnderLikelihoodRescaling) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> prior(5), lik(5), scaled(5);
    double z = 0.0;
    for (double& p : prior) z += (p = uniform01(rng) + 1e-3);
    for (double& p : prior) p /= z;
    double c = uniform(rng, 0.01, 50.0);
    for (int k = 0; k < 5; ++k) {
      lik[k] = uniform(rng, 1e-6, 1.0);
      scaled[k] = c * lik[k];
    }
    auto a = update_belief(TypeBelief(prior), lik);
    auto b = update_belief(TypeBelief(prior), scaled);
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
  }
}

TEST(UpdateBelief, SequentialEqualsProduct) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> l1(4), l2(4), prod(4);
    for (int k = 0; k < 4; ++k) {
      l1[k] = uniform(rng, 1e-4, 1.0);
      l2[k] = uniform(rng, 1e-4, 1.0);
      prod[k] = l1[k] * l2[k];
    }
    auto seq = update_belief(update_belief(TypeBelief::uniform(4), l1), l2);
    auto once = update_belief(TypeBelief::uniform(4), prod);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(seq[k], once[k], 1e-12);
  }
}

TEST(UpdateBelief, PositiveMassNeverVanishesUnderRandomUpdates) {
  Rng rng(3);
  auto b = TypeBelief::uniform(4);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> lik(4);
    for (double& l : lik) l = uniform01(rng) < 0.3 ? 0.0 : uniform01(rng);
    b = update_belief(b, lik);
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) {
      EXPECT_GT(b[k], 0.0);
      sum += b[k];
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(LikelihoodOfObserved, UsesTheLastObservation) {
  auto type = testing::function_type({{0.0, 1.0}}, [](const ParameterVector& p) { return p[0]; });
  auto h = testing::ticks(3);
  ParameterVector p({0.8}, {{0.0, 1.0}});
  EXPECT_NEAR(likelihood_of_observed(type, std::span<const testing::Tick>(h), p, 0), 0.8, 1e-12);
  EXPECT_NEAR(likelihood_of_observed(type, std::span<const testing::Tick>(h), p, 1), 0.2, 1e-12);
  EXPECT_THROW(likelihood_of_observed(type, std::span<const testing::Tick>(h), p, 2), std::out_of_range);
}

TEST(LikelihoodOfObserved, SingleActionSpaceIsCertain) {
  HypotheticalType<testing::Tick> type(std::make_unique<testing::SingleActionType>());
  auto h = testing::ticks(4);
  EXPECT_EQ(likelihood_of_observed(type, std::span<const testing::Tick>(h), ParameterVector({0.3}, {{0, 1}}), 0),
            1.0);
}

}  // namespace
}  // namespace partype
