#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nvgates/errors.hpp"
#include "nvgates/state.hpp"
#include "support.hpp"

namespace nvgates {
namespace {

const double kS2 = 1.0 / std::sqrt(2.0);
constexpr auto kR = Polarization::kR;
constexpr auto kL = Polarization::kL;

TEST(SpinConfig, MostSignificantBitIsFirstSpin) {
  const SpinConfig c(3, 0b100);
  EXPECT_EQ(c.at(0), Spin::kMinus);
  EXPECT_EQ(c.at(1), Spin::kPlus);
  EXPECT_EQ(c.ket(), "|-++>");
  EXPECT_EQ(c.flipped(2).bits(), 0b101u);
  EXPECT_EQ(c.with(0, Spin::kPlus).bits(), 0u);
  EXPECT_THROW(SpinConfig(2, 4), ParameterError);
}

TEST(StateLayout, IndexAndValidation) {
  const StateLayout layout(2, {0, 4, 9});
  EXPECT_EQ(layout.dim(), 2u * 3u * 4u);
  EXPECT_EQ(layout.mode_index(9), 2u);
  EXPECT_EQ(layout.index(kL, 1, 3), ((1u * 3u + 1u) << 2) | 3u);
  EXPECT_THROW(layout.mode_index(5), ModeError);
  EXPECT_THROW(StateLayout(2, {1, 1}), ParameterError);
  EXPECT_THROW(StateLayout(0, {1}), ParameterError);
  EXPECT_THROW(StateLayout(2, {}), ParameterError);
}

TEST(HybridState, RejectsWrongDimension) {
  const StateLayout layout(1, {0});
  EXPECT_THROW(HybridState(layout, Eigen::VectorXcd::Zero(3)), DimensionError);
}

TEST(ProductState, BasisState) {
  const StateLayout layout(2, {0, 1});
  const std::array<AmplitudePair, 2> spins{AmplitudePair{1.0, 0.0}, AmplitudePair{1.0, 0.0}};
  const auto s = make_product_state(layout, {1.0, 0.0}, 0, spins);
  EXPECT_EQ(s.amplitude(kR, 0, 0b00), Complex(1.0));
  EXPECT_DOUBLE_EQ(s.norm_squared(), 1.0);
  EXPECT_DOUBLE_EQ(s.amplitudes().cwiseAbs().sum(), 1.0);
}

TEST(ProductState, UniformEightBranches) {
  const StateLayout layout(3, {0});
  const std::array<AmplitudePair, 3> spins{AmplitudePair{kS2, kS2}, AmplitudePair{kS2, kS2},
                                           AmplitudePair{kS2, kS2}};
  const auto s = make_product_state(layout, {kS2, kS2}, 0, spins);
  for (const auto& a : s.amplitudes()) EXPECT_NEAR(std::abs(a), 0.25, 1e-15);
}

TEST(ProductState, MatchesSymbolicExpansion) {
  std::mt19937_64 rng(1);
  const auto c = testing::random_pair(rng);
  const auto t = testing::random_pair(rng);
  const StateLayout layout(2, {0});
  const std::array<AmplitudePair, 2> spins{c, t};
  const auto s = make_product_state(layout, {kS2, kS2}, 0, spins);
  for (auto pol : {kR, kL}) {
    for (std::uint32_t cfg = 0; cfg < 4; ++cfg) {
      const Complex expected = kS2 * c[(cfg >> 1) & 1] * t[cfg & 1];
      EXPECT_LT(std::abs(s.amplitude(pol, 0, cfg) - expected), 1e-15);
    }
  }
}

TEST(ProductState, RejectsUnnormalizedPairs) {
  const StateLayout layout(1, {0});
  const std::array<AmplitudePair, 1> bad{AmplitudePair{1.0, 0.1}};
  const std::array<AmplitudePair, 1> good{AmplitudePair{1.0, 0.0}};
  EXPECT_THROW(make_product_state(layout, {1.0, 0.0}, 0, bad), NormalizationError);
  EXPECT_THROW(make_product_state(layout, {0.5, 0.5}, 0, good), NormalizationError);
  EXPECT_THROW(make_product_state(layout, {1.0, 0.0}, 3, good), ModeError);
  const std::array<AmplitudePair, 2> two{good[0], good[0]};
  EXPECT_THROW(make_product_state(layout, {1.0, 0.0}, 0, two), DimensionError);
}

TEST(Overlap, SelfOrthogonalAndConjugateLinear) {
  std::mt19937_64 rng(2);
  const StateLayout layout(2, {0, 1});
  const auto a = testing::random_state(rng, layout);
  const auto b = testing::random_state(rng, layout);
  EXPECT_NEAR(std::abs(overlap(a, a) - 1.0), 0.0, 1e-14);
  const HybridState ia(layout, Complex{0.0, 1.0} * a.amplitudes());
  EXPECT_LT(std::abs(overlap(ia, b) - Complex{0.0, -1.0} * overlap(a, b)), 1e-14);

  const std::array<testing::Term, 1> r0{testing::Term{kR, 0, 0, 1.0}};
  const std::array<testing::Term, 1> l0{testing::Term{kL, 0, 0, 1.0}};
  EXPECT_EQ(overlap(testing::state_from_terms(layout, r0), testing::state_from_terms(layout, l0)),
            Complex(0.0));
  EXPECT_THROW(overlap(a, HybridState::zero(StateLayout(2, {0}))), DimensionError);
}

TEST(Collapse, FsProjection) {
  const StateLayout layout(1, {5});
  // |F>|+> + |S>|-> (unnormalized by 1/sqrt2 each)
  const std::array<testing::Term, 4> terms{
      testing::Term{kR, 5, 0, 0.5}, testing::Term{kL, 5, 0, 0.5},
      testing::Term{kR, 5, 1, 0.5}, testing::Term{kL, 5, 1, -0.5}};
  const auto s = testing::state_from_terms(layout, terms);
  const auto f = partial_trace_photon_collapse(s, FsOutcome::kF, 5);
  const auto sp = partial_trace_photon_collapse(s, FsOutcome::kS, 5);
  EXPECT_FALSE(f.empty);
  EXPECT_NEAR(f.probability, 0.5, 1e-15);
  EXPECT_NEAR(std::abs(f.spins.amplitude(0)), 1.0, 1e-15);
  EXPECT_NEAR(sp.probability, 0.5, 1e-15);
  EXPECT_NEAR(std::abs(sp.spins.amplitude(1)), 1.0, 1e-15);
  EXPECT_THROW(partial_trace_photon_collapse(s, FsOutcome::kF, 6), ModeError);
}

TEST(Collapse, LostPhotonIsFlaggedEmpty) {
  const StateLayout layout(2, {0});
  const auto c = partial_trace_photon_collapse(HybridState::zero(layout), FsOutcome::kS, 0);
  EXPECT_TRUE(c.empty);
  EXPECT_EQ(c.probability, 0.0);
  EXPECT_EQ(c.spins.norm_squared(), 0.0);
}

TEST(Collapse, ProbabilitiesSumToModeOccupation) {
  std::mt19937_64 rng(3);
  const StateLayout layout(3, {0, 1, 2});
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = testing::random_state(rng, layout, 0.7);
    for (ModeLabel m : {0, 1, 2}) {
      const double p = project_photon(s, FsOutcome::kF, m).norm_squared() +
                       project_photon(s, FsOutcome::kS, m).norm_squared();
      EXPECT_NEAR(p, s.mode_occupation(m), 1e-14);
    }
  }
}

TEST(SpinState, ToStringListsKets) {
  const std::array<AmplitudePair, 2> spins{AmplitudePair{0.0, 1.0}, AmplitudePair{1.0, 0.0}};
  EXPECT_EQ(SpinState::product(spins).to_string(), "1|-+>");
  EXPECT_EQ(SpinState(1, Eigen::VectorXcd::Zero(2)).to_string(), "0");
}

}  // namespace
}  // namespace nvgates
