#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nvgates/cavity.hpp"
#include "nvgates/gates.hpp"

namespace nvgates {

enum class InputConvention {
  kBalanced,       // every spin and the photon in (|0>+|1>)/sqrt2
  kUniformRandom,  // average over seeded random product spin states
};

struct InputSpec {
  InputConvention convention = InputConvention::kBalanced;
  int samples = 200;
  std::uint64_t seed = 2024;
};

enum class FidelityNormalization {
  // Renormalize each surviving outcome branch before the overlap.
  kPostselected,
  // Sum of |<ideal|branch>|^2 over outcomes; loss lowers the fidelity.
  kUnnormalized,
  // |sum_o <ideal|branch_o>|^2 / (N_outcomes * survival): outcomes added as
  // amplitudes rather than probabilities.
  kCoherentOutcomeSum,
};

std::string_view to_string(InputConvention convention);
std::string_view to_string(FidelityNormalization normalization);

/// Closed-form fidelity as a function of |r|. Generic so the endpoints can be
/// checked in exact rational arithmetic.
template <class T>
T fidelity_closed_form_t(GateKind gate, const T& r) {
  const T one(1);
  switch (gate) {
    case GateKind::kCnot: {
      const T num = T(2) + r + r * r;
      const T den = T(2) * (T(5) - T(2) * r + T(2) * r * r + T(2) * r * r * r + r * r * r * r);
      return num * num / den;
    }
    case GateKind::kToffoli: {
      const T a = T(3) + r;
      const T b = T(3) + r * r;
      return a * a * a * a / (T(16) * b * b);
    }
    case GateKind::kFredkin: {
      const T r2 = r * r;
      const T r3 = r2 * r;
      const T r4 = r3 * r;
      const T r5 = r4 * r;
      const T r6 = r5 * r;
      const T r7 = r6 * r;
      const T z = T(29) + T(19) * r + T(8) * r2 + T(4) * r3 + T(3) * r4 + r5;
      const T zeta = z * z;
      const T xi = T(8) * (T(237) - T(10) * r + T(165) * r2 - T(8) * r3 + T(66) * r4 -
                           T(12) * r5 + T(26) * r6 + r7 * (T(3) + r) * (T(8) + T(3) * r + r2));
      return zeta / xi;
    }
  }
  return one;
}

template <class T>
T efficiency_closed_form_t(GateKind gate, const T& r) {
  const T r2 = r * r;
  const T a = T(3) + r2;
  switch (gate) {
    case GateKind::kCnot: return (a / T(4)) * (a / T(4));
    case GateKind::kToffoli: return a * a * (T(7) + r2) / T(128);
    case GateKind::kFredkin: {
      const T b = (T(1) + r2) * (T(1) + r2);
      return a * (T(4) + b) * (T(12) + b) / T(512);
    }
  }
  return T(1);
}

// Throw ParameterError unless 0 <= r_mag <= 1.
double fidelity_closed_form(GateKind gate, double r_mag);
double efficiency_closed_form(GateKind gate, double r_mag);

/// Fidelity of the simulated circuit against the ideal gate, averaged per
/// the input convention. nullopt when the photon never reaches a detector.
std::optional<double> fidelity_simulated(
    GateKind gate, const ReflectionPair& r, const InputSpec& input = {},
    FidelityNormalization normalization = FidelityNormalization::kPostselected);

/// Photon survival probability (pre-detection norm^2), averaged per the
/// input convention.
double efficiency_simulated(GateKind gate, const ReflectionPair& r, const InputSpec& input = {});

struct SweepRecord {
  double coupling_ratio = 0.0;
  double r_magnitude = 0.0;
  GateKind gate = GateKind::kCnot;
  double fidelity_closed = 0.0;
  double fidelity_sim = 0.0;  // NaN when undefined
  double efficiency_closed = 0.0;
  double efficiency_sim = 0.0;
};

/// Resonant sweep over g/sqrt(kappa gamma). Records are sorted by ratio,
/// then by gate.
std::vector<SweepRecord> sweep(std::span<const GateKind> gates, std::span<const double> ratios,
                               const InputSpec& input = {});
/// Sweep with |r| as the free parameter (r_hot = |r|, r_cold = -1).
std::vector<SweepRecord> sweep_reflection(std::span<const GateKind> gates,
                                          std::span<const double> r_magnitudes,
                                          const InputSpec& input = {});

// `steps` evenly spaced points from lo to hi inclusive (steps >= 2).
std::vector<double> linspace(double lo, double hi, int steps);

inline constexpr std::string_view kSweepCsvHeader =
    "ratio,r,gate,fidelity_closed,fidelity_sim,efficiency_closed,efficiency_sim";
std::string sweep_csv(std::span<const SweepRecord> records);

struct ConventionResult {
  FidelityNormalization normalization;
  InputConvention input;
  GateKind gate;
  double max_residual = 0.0;   // max |F_sim - F_closed| over the grid
  double worst_r = 0.0;        // where it occurs
  double value_at_one = 0.0;   // F_sim at |r| = 1
};

struct ConventionReport {
  std::vector<double> grid;
  std::vector<ConventionResult> results;
  // Mode with the smallest worst-gate residual.
  FidelityNormalization best_normalization = FidelityNormalization::kPostselected;
  InputConvention best_input = InputConvention::kBalanced;
  double best_max_residual = 0.0;
};

/// Compares every normalization x input convention against the closed-form
/// fidelity on `grid_points` evenly spaced |r| values in [0, 1].
ConventionReport fidelity_convention_report(int grid_points = 101, const InputSpec& random = {
    InputConvention::kUniformRandom, 64, 2024});
std::string to_markdown(const ConventionReport& report);

}  // namespace nvgates
