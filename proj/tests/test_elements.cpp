#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "nvgates/elements.hpp"
#include "nvgates/errors.hpp"
#include "support.hpp"

namespace nvgates {
namespace {

const double kS2 = 1.0 / std::sqrt(2.0);
constexpr auto kR = Polarization::kR;
constexpr auto kL = Polarization::kL;

using testing::Term;

HybridState single(const StateLayout& layout, Polarization p, ModeLabel m, std::uint32_t c = 0) {
  const std::array<Term, 1> t{Term{p, m, c, 1.0}};
  return testing::state_from_terms(layout, t);
}

// Random state with the photon confined to `modes`.
HybridState random_on(std::mt19937_64& rng, const StateLayout& layout, std::initializer_list<ModeLabel> modes) {
  Eigen::VectorXcd v = testing::random_state(rng, layout).amplitudes();
  const auto n = static_cast<Eigen::Index>(layout.spin_dim());
  for (std::size_t k = 0; k < layout.n_modes(); ++k) {
    if (std::find(modes.begin(), modes.end(), layout.modes()[k]) != modes.end()) continue;
    for (auto pol : {kR, kL}) v.segment(static_cast<Eigen::Index>(layout.index(pol, k, 0)), n).setZero();
  }
  return HybridState(layout, v / v.norm());
}

TEST(Pbs, RoutesByPolarization) {
  const StateLayout layout(1, {1, 2, 3, 4});
  const std::array<ModeLabel, 2> in{1, 2};
  const std::array<ModeLabel, 2> out{3, 4};
  EXPECT_EQ(apply_pbs_rl(single(layout, kR, 1), in, out).amplitude(kR, 3, 0), Complex(1.0));
  EXPECT_EQ(apply_pbs_rl(single(layout, kL, 1), in, out).amplitude(kL, 4, 0), Complex(1.0));
  EXPECT_EQ(apply_pbs_rl(single(layout, kR, 2), in, out).amplitude(kR, 4, 0), Complex(1.0));
  EXPECT_EQ(apply_pbs_rl(single(layout, kL, 2), in, out).amplitude(kL, 3, 0), Complex(1.0));
}

TEST(Pbs, SingleInputLeavesOtherPortEmpty) {
  const StateLayout layout(1, {1, 3, 4});
  const std::array<ModeLabel, 1> in{1};
  const std::array<ModeLabel, 2> out{3, 4};
  const std::array<Term, 2> t{Term{kR, 1, 0, kS2}, Term{kL, 1, 1, kS2}};
  const auto s = apply_pbs_rl(testing::state_from_terms(layout, t), in, out);
  EXPECT_NEAR(s.mode_occupation(3), 0.5, 1e-15);
  EXPECT_NEAR(s.mode_occupation(4), 0.5, 1e-15);
  EXPECT_EQ(s.mode_occupation(1), 0.0);
  EXPECT_EQ(s.amplitude(kL, 4, 1), Complex(kS2));
}

TEST(Pbs, FsEqualsHwpSandwich) {
  std::mt19937_64 rng(11);
  const StateLayout layout(2, {0, 1, 2});
  const std::array<ModeLabel, 1> in{0};
  const std::array<ModeLabel, 2> out{1, 2};
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_on(rng, layout, {0});
    const auto direct = apply_pbs_fs(s, 0, 1, 2);
    const auto sandwich = apply_hwp(apply_hwp(apply_pbs_rl(apply_hwp(s, 0), in, out), 1), 2);
    EXPECT_LT(testing::max_abs_diff(direct, sandwich), 1e-15);
  }
}

TEST(Pbs, FsRoutesDetectionBasis) {
  const StateLayout layout(1, {0, 1, 2});
  const std::array<Term, 2> f{Term{kR, 0, 0, kS2}, Term{kL, 0, 0, kS2}};
  const auto out = apply_pbs_fs(testing::state_from_terms(layout, f), 0, 1, 2);
  EXPECT_NEAR(out.mode_occupation(1), 1.0, 1e-15);
  EXPECT_NEAR(out.amplitude(kR, 1, 0).real(), kS2, 1e-15);
  EXPECT_NEAR(out.amplitude(kL, 1, 0).real(), kS2, 1e-15);
}

TEST(Hwp, HadamardAndInvolution) {
  std::mt19937_64 rng(12);
  const StateLayout layout(2, {0, 1});
  const auto r = apply_hwp(single(layout, kR, 0), 0);
  EXPECT_NEAR(r.amplitude(kR, 0, 0).real(), kS2, 1e-15);
  EXPECT_NEAR(r.amplitude(kL, 0, 0).real(), kS2, 1e-15);
  const auto l = apply_hwp(single(layout, kL, 0), 0);
  EXPECT_NEAR(l.amplitude(kL, 0, 0).real(), -kS2, 1e-15);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = random_on(rng, layout, {0});
    EXPECT_LT(testing::max_abs_diff(apply_hwp(apply_hwp(s, 0), 0), s), 1e-15);
    const auto moved = apply_hwp(s, 0, 1);
    EXPECT_EQ(moved.mode_occupation(0), 0.0);
    EXPECT_NEAR(moved.norm_squared(), 1.0, 1e-14);
  }
}

TEST(BeamSplitter, ConventionAndUnitarity) {
  const StateLayout layout(1, {0, 1, 2, 3});
  const std::array<ModeLabel, 2> in{0, 1};
  const std::array<ModeLabel, 2> out{2, 3};
  const auto a = apply_bs(single(layout, kR, 1), in, out);
  EXPECT_NEAR(a.amplitude(kR, 2, 0).real(), kS2, 1e-15);
  EXPECT_NEAR(a.amplitude(kR, 3, 0).real(), kS2, 1e-15);
  const auto b = apply_bs(single(layout, kL, 0), in, out);
  EXPECT_NEAR(b.amplitude(kL, 2, 0).real(), kS2, 1e-15);
  EXPECT_NEAR(b.amplitude(kL, 3, 0).real(), -kS2, 1e-15);

  // Equal amplitudes on both inputs interfere into out[0].
  const std::array<Term, 2> t{Term{kR, 0, 0, kS2}, Term{kR, 1, 0, kS2}};
  const auto c = apply_bs(testing::state_from_terms(layout, t), in, out);
  EXPECT_NEAR(c.mode_occupation(2), 1.0, 1e-15);
  EXPECT_NEAR(c.mode_occupation(3), 0.0, 1e-15);

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = random_on(rng, layout, {0, 1});
    EXPECT_NEAR(apply_bs(s, in, out).norm_squared(), 1.0, 1e-14);
  }
}

TEST(SpinOps, HadamardInvolutionAndPauliRelations) {
  std::mt19937_64 rng(14);
  const StateLayout layout(3, {0});
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = testing::random_state(rng, layout);
    for (int k = 0; k < 3; ++k) {
      EXPECT_LT(testing::max_abs_diff(apply_spin_hadamard(apply_spin_hadamard(s, k), k), s), 1e-15);
      EXPECT_EQ(testing::max_abs_diff(apply_spin_pauli(s, k, PauliOp::kI), s), 0.0);
      const auto z = apply_spin_pauli(s, k, PauliOp::kZ);
      const auto mz = apply_spin_pauli(s, k, PauliOp::kMinusZ);
      EXPECT_LT(testing::max_abs_diff(HybridState(layout, -z.amplitudes()), mz), 1e-15);
      EXPECT_LT(testing::max_abs_diff(apply_spin_pauli(z, k, PauliOp::kZ), s), 1e-15);
    }
  }
  const auto h = apply_spin_hadamard(single(layout, kR, 0, 0b010), 1);
  EXPECT_NEAR(h.amplitude(kR, 0, 0b000).real(), kS2, 1e-15);
  EXPECT_NEAR(h.amplitude(kR, 0, 0b010).real(), -kS2, 1e-15);
}

TEST(SpinOps, DenseOracle) {
  std::mt19937_64 rng(15);
  const StateLayout layout(2, {0});
  const auto s = testing::random_state(rng, layout);
  // Single mode: amplitude vector is (pol x spin0 x spin1) in dense order.
  const Eigen::VectorXcd expected = testing::dense::kron(
      testing::dense::identity(2), testing::dense::on_factor(testing::dense::hadamard(), 1, 2)) *
                                    s.amplitudes();
  EXPECT_LT((apply_spin_hadamard(s, 1).amplitudes() - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(apply_spin_hadamard(s, 2), ParameterError);
}

TEST(Wiring, RejectsMergingAndBadPorts) {
  const StateLayout layout(1, {0, 1, 2});
  const std::array<Term, 2> t{Term{kR, 0, 0, kS2}, Term{kR, 1, 0, kS2}};
  const auto s = testing::state_from_terms(layout, t);
  EXPECT_THROW(apply_hwp(s, 0, 1), WiringError);
  const std::array<ModeLabel, 2> dup{2, 2};
  const std::array<ModeLabel, 1> in{0};
  EXPECT_THROW(apply_pbs_rl(s, in, dup), WiringError);
  EXPECT_THROW(apply_hwp(s, 7), ModeError);
  EXPECT_THROW(check_arity(Element{ElementKind::kBeamSplitter, {0}, {1, 2}}), WiringError);
  EXPECT_THROW(check_arity(Element{ElementKind::kHwp, {0}, {1, 2}}), WiringError);
  EXPECT_THROW(check_arity(Element{ElementKind::kNvScatter, {0}, {0}}), WiringError);
  EXPECT_NO_THROW(check_arity(Element::pbs_rl({0}, {1, 2})));
}

TEST(ApplyElement, DispatchesEveryKind) {
  std::mt19937_64 rng(16);
  const StateLayout layout(2, {0, 1, 2, 3});
  const auto s = random_on(rng, layout, {0, 1});
  const std::array<ModeLabel, 2> in{0, 1};
  const std::array<ModeLabel, 2> out{2, 3};
  const auto r = resonant_reflection(1.0);
  EXPECT_EQ(testing::max_abs_diff(apply_element(s, Element::pbs_rl({0, 1}, {2, 3})), apply_pbs_rl(s, in, out)), 0.0);
  EXPECT_EQ(testing::max_abs_diff(apply_element(s, Element::beam_splitter({0, 1}, {2, 3})), apply_bs(s, in, out)), 0.0);
  EXPECT_EQ(testing::max_abs_diff(apply_element(s, Element::nv_scatter(0, 2, 1), r), scatter(s, 1, 0, 2, r)), 0.0);
  EXPECT_EQ(testing::max_abs_diff(apply_element(s, Element::spin_hadamard(0)), apply_spin_hadamard(s, 0)), 0.0);
  EXPECT_EQ(testing::max_abs_diff(apply_element(s, Element::spin_pauli(1, PauliOp::kMinusZ)),
                                  apply_spin_pauli(s, 1, PauliOp::kMinusZ)),
            0.0);
  EXPECT_EQ(to_string(ElementKind::kPbsFS), "pbsfs");
  EXPECT_EQ(to_string(PauliOp::kMinusZ), "-Z");
}

TEST(Lossless, PassiveElementsPreserveNorm) {
  std::mt19937_64 rng(17);
  const StateLayout layout(2, {0, 1, 2, 3});
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_on(rng, layout, {0, 1});
    EXPECT_NEAR(apply_element(s, Element::pbs_rl({0, 1}, {2, 3})).norm_squared(), 1.0, 1e-14);
    EXPECT_NEAR(apply_element(s, Element::pbs_fs(0, 2, 3)).norm_squared(),
                1.0, 1e-14);
    EXPECT_LE(apply_element(s, Element::nv_scatter(1, 1, 0), resonant_reflection(0.7)).norm_squared(),
              1.0 + 1e-14);
  }
}

}  // namespace
}  // namespace nvgates
