#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "nvgates/analysis.hpp"
#include "nvgates/errors.hpp"
#include "support.hpp"

namespace nvgates {
namespace {

using Rational = boost::multiprecision::cpp_rational;
namespace dense = testing::dense;

TEST(ClosedForm, ExactEndpointsAtUnitReflection) {
  for (auto g : kAllGates) {
    EXPECT_EQ(fidelity_closed_form_t<Rational>(g, Rational(1)), Rational(1)) << to_string(g);
    EXPECT_EQ(efficiency_closed_form_t<Rational>(g, Rational(1)), Rational(1)) << to_string(g);
  }
}

TEST(ClosedForm, ExactValuesAtZero) {
  EXPECT_EQ(fidelity_closed_form_t<Rational>(GateKind::kCnot, Rational(0)), Rational(2, 5));
  EXPECT_EQ(fidelity_closed_form_t<Rational>(GateKind::kToffoli, Rational(0)), Rational(81, 144));
  EXPECT_EQ(fidelity_closed_form_t<Rational>(GateKind::kFredkin, Rational(0)), Rational(841, 1896));
  EXPECT_EQ(efficiency_closed_form_t<Rational>(GateKind::kCnot, Rational(0)), Rational(9, 16));
  EXPECT_EQ(efficiency_closed_form_t<Rational>(GateKind::kToffoli, Rational(0)), Rational(63, 128));
}

TEST(ClosedForm, HeadlineEfficiencies) {
  const double r = 99.0 / 101.0;
  EXPECT_NEAR(efficiency_closed_form(GateKind::kCnot, r), 0.9805, 5e-5);
  EXPECT_NEAR(efficiency_closed_form(GateKind::kToffoli, r), 0.9757, 5e-5);
  EXPECT_NEAR(efficiency_closed_form(GateKind::kFredkin, r), 0.9615, 5e-5);
}

TEST(ClosedForm, CnotAtHalf) {
  // (2 + 1/2 + 1/4)^2 / (2 (5 - 1 + 1/2 + 1/4 + 1/16))
  EXPECT_EQ(fidelity_closed_form_t<Rational>(GateKind::kCnot, Rational(1, 2)), Rational(11, 14));
}

TEST(ClosedForm, RejectsOutOfRange) {
  EXPECT_THROW(fidelity_closed_form(GateKind::kCnot, -0.1), ParameterError);
  EXPECT_THROW(efficiency_closed_form(GateKind::kFredkin, 1.01), ParameterError);
  EXPECT_THROW(efficiency_closed_form(GateKind::kFredkin, std::nan("")), ParameterError);
}

TEST(ClosedForm, BoundedAndMonotoneOnGrid) {
  for (auto g : kAllGates) {
    double prev_f = 0.0;
    double prev_e = 0.0;
    for (double r : linspace(0.0, 1.0, 201)) {
      const double f = fidelity_closed_form(g, r);
      const double e = efficiency_closed_form(g, r);
      EXPECT_GE(f, prev_f - 1e-15);
      EXPECT_GE(e, prev_e - 1e-15);
      EXPECT_LE(f, 1.0 + 1e-12);
      EXPECT_LE(e, 1.0 + 1e-12);
      prev_f = f;
      prev_e = e;
    }
  }
}

constexpr std::array kModes{FidelityNormalization::kPostselected,
                            FidelityNormalization::kUnnormalized,
                            FidelityNormalization::kCoherentOutcomeSum};

TEST(Simulated, IdealIsPerfect) {
  const InputSpec random{InputConvention::kUniformRandom, 20, 4};
  for (auto g : kAllGates) {
    for (auto mode : kModes) {
      for (const auto& in : {InputSpec{}, random}) {
        EXPECT_NEAR(*fidelity_simulated(g, ReflectionPair::ideal(), in, mode), 1.0, 1e-10);
      }
    }
    EXPECT_NEAR(efficiency_simulated(g, ReflectionPair::ideal()), 1.0, 1e-12);
  }
}

TEST(Simulated, CoherentOutcomeSumReproducesClosedForm) {
  for (auto g : kAllGates) {
    for (double r : {0.0, 0.25, 0.5, 0.8, 0.99}) {
      EXPECT_NEAR(*fidelity_simulated(g, ReflectionPair::resonant(r), {},
                                      FidelityNormalization::kCoherentOutcomeSum),
                  fidelity_closed_form(g, r), 1e-12)
          << to_string(g) << " r=" << r;
    }
  }
}

TEST(Simulated, UnnormalizedIsPostselectedTimesSurvival) {
  for (auto g : kAllGates) {
    const auto pair = ReflectionPair::resonant(0.6);
    const double ps = *fidelity_simulated(g, pair, {}, FidelityNormalization::kPostselected);
    const double un = *fidelity_simulated(g, pair, {}, FidelityNormalization::kUnnormalized);
    EXPECT_NEAR(un, ps * efficiency_simulated(g, pair), 1e-12);
  }
}

TEST(Simulated, DarkCavitiesPassOnlyTheOpenArm) {
  // Each MZ block keeps only its unrouted arm: 1/2 per block.
  const ReflectionPair dark{Complex{0.0, 0.0}, Complex{0.0, 0.0}};
  EXPECT_NEAR(efficiency_simulated(GateKind::kCnot, dark), 0.25, 1e-12);
  EXPECT_TRUE(fidelity_simulated(GateKind::kCnot, dark).has_value());
}

TEST(Simulated, FredkinAtZeroIsFinite) {
  const auto f = fidelity_simulated(GateKind::kFredkin, ReflectionPair::resonant(0.0));
  ASSERT_TRUE(f);
  EXPECT_GT(*f, 0.0);
  EXPECT_LT(*f, 1.0);
}

Eigen::MatrixXcd diag4(Complex a, Complex b, Complex c, Complex d) {
  Eigen::Vector4cd v(a, b, c, d);
  return v.asDiagonal();
}

TEST(Simulated, CnotEfficiencyMatchesDenseOracle) {
  // Dense composition of the two lossy MZ blocks, the photon Hadamard and the
  // spin Hadamards on (pol x control x target).
  for (double r : linspace(0.0, 1.0, 11)) {
    const Complex rh{r, 0.0};
    const Eigen::MatrixXcd first = dense::kron(diag4(1, 1, -1, rh), dense::identity(2));
    Eigen::MatrixXcd swap = Eigen::MatrixXcd::Zero(8, 8);
    for (int p = 0; p < 2; ++p) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) swap(p * 4 + b * 2 + a, p * 4 + a * 2 + b) = 1.0;
      }
    }
    const Eigen::MatrixXcd second = swap * dense::kron(diag4(rh, -1, 1, 1), dense::identity(2)) * swap;
    const Eigen::MatrixXcd h2 = dense::on_factor(dense::hadamard(), 2, 3);
    const Eigen::MatrixXcd op = h2 * second * h2 * dense::on_factor(dense::hadamard(), 0, 3) * first;
    const Eigen::VectorXcd in = Eigen::VectorXcd::Constant(8, 1.0 / std::sqrt(8.0));
    const double oracle = (op * in).squaredNorm();
    EXPECT_NEAR(efficiency_simulated(GateKind::kCnot, ReflectionPair::resonant(r)), oracle, 1e-12);
    // Same quantity by hand: (5 - 2r + 2r^2 + 2r^3 + r^4) / 8.
    EXPECT_NEAR(oracle, (5 - 2 * r + 2 * r * r + 2 * r * r * r + r * r * r * r) / 8, 1e-12);
  }
}

TEST(Simulated, EfficiencyIsPreDetectionNorm) {
  for (auto g : kAllGates) {
    const auto circuit = build_gate_circuit(g);
    const auto pair = ReflectionPair::resonant(0.7);
    const InputSpec one{InputConvention::kUniformRandom, 1, 77};
    const double eta = efficiency_simulated(g, pair, one);
    EXPECT_LE(eta, 1.0);

    std::mt19937_64 same(77);
    std::normal_distribution<double> n;
    std::vector<AmplitudePair> spins;
    for (int k = 0; k < circuit.n_spins; ++k) {
      Complex a{n(same), n(same)};
      Complex b{n(same), n(same)};
      const double s = std::sqrt(std::norm(a) + std::norm(b));
      spins.push_back({a / s, b / s});
    }
    const auto run = run_netlist(circuit, gate_input_state(circuit, spins), pair);
    EXPECT_NEAR(eta, run.pre_detection_norm2, 1e-12);
    double detected = 0.0;
    for (const auto& o : run.outcomes) detected += o.probability;
    EXPECT_NEAR(detected + run.undetected_probability, run.pre_detection_norm2, 1e-12);
  }
}

TEST(Sweep, SortedAndHeadlineRows) {
  const std::vector<double> ratios{5.0, 0.5, 2.0};
  const auto rec = sweep(kAllGates, ratios);
  ASSERT_EQ(rec.size(), 9u);
  for (std::size_t i = 1; i < rec.size(); ++i) {
    EXPECT_TRUE(rec[i - 1].coupling_ratio < rec[i].coupling_ratio ||
                (rec[i - 1].coupling_ratio == rec[i].coupling_ratio &&
                 static_cast<int>(rec[i - 1].gate) < static_cast<int>(rec[i].gate)));
  }
  const auto& last = rec.back();
  EXPECT_EQ(last.gate, GateKind::kFredkin);
  EXPECT_NEAR(last.r_magnitude, 99.0 / 101.0, 1e-15);
  EXPECT_NEAR(last.efficiency_closed, 0.9615, 5e-5);
}

TEST(Sweep, ZeroCouplingKeepsActualReflection) {
  const std::vector<double> ratios{0.0};
  const std::array<GateKind, 1> gates{GateKind::kCnot};
  const auto rec = sweep(gates, ratios);
  ASSERT_EQ(rec.size(), 1u);
  EXPECT_DOUBLE_EQ(rec[0].r_magnitude, 1.0);
  EXPECT_DOUBLE_EQ(rec[0].fidelity_closed, 1.0);
  // r_hot = -1 equals r_cold: the NV has no effect, so the gate is not done.
  EXPECT_LT(rec[0].fidelity_sim, 0.99);
}

TEST(Sweep, RejectsNegativeRatio) {
  const std::vector<double> ratios{-1.0};
  EXPECT_THROW(sweep(kAllGates, ratios), ParameterError);
}

TEST(Sweep, ReflectionAxis) {
  const std::vector<double> rs{0.5, 1.0};
  const auto rec = sweep_reflection(kAllGates, rs);
  ASSERT_EQ(rec.size(), 6u);
  EXPECT_TRUE(std::isinf(rec.back().coupling_ratio));
  EXPECT_NEAR(rec.back().fidelity_sim, 1.0, 1e-12);
}

TEST(Sweep, CsvFormat) {
  const std::vector<double> ratios{5.0};
  const std::array<GateKind, 1> gates{GateKind::kCnot};
  const auto csv = sweep_csv(sweep(gates, ratios));
  EXPECT_EQ(csv.substr(0, kSweepCsvHeader.size()), kSweepCsvHeader);
  EXPECT_NE(csv.find("\n5,0.98019802,cnot,"), std::string::npos) << csv;
}

TEST(Linspace, EndpointsExact) {
  const auto v = linspace(0.5, 10.0, 96);
  EXPECT_EQ(v.size(), 96u);
  EXPECT_EQ(v.front(), 0.5);
  EXPECT_EQ(v.back(), 10.0);
  EXPECT_NEAR(v[1] - v[0], 0.1, 1e-12);
  EXPECT_THROW(linspace(0, 1, 1), ParameterError);
}

TEST(ConventionReport, IdentifiesCoherentSum) {
  const auto report = fidelity_convention_report(11, {InputConvention::kUniformRandom, 8, 1});
  EXPECT_EQ(report.results.size(), 18u);
  for (const auto& r : report.results) EXPECT_NEAR(r.value_at_one, 1.0, 1e-10);
  EXPECT_EQ(report.best_normalization, FidelityNormalization::kCoherentOutcomeSum);
  EXPECT_EQ(report.best_input, InputConvention::kBalanced);
  EXPECT_LT(report.best_max_residual, 1e-12);
  EXPECT_NE(to_markdown(report).find("Best match: coherent-outcome-sum"), std::string::npos);
}

}  // namespace
}  // namespace nvgates
