#include "nvgates/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "nvgates/errors.hpp"

namespace nvgates {

std::string_view to_string(InputConvention convention) {
  switch (convention) {
    case InputConvention::kBalanced: return "balanced";
    case InputConvention::kUniformRandom: return "uniform-random";
  }
  return "?";
}

std::string_view to_string(FidelityNormalization normalization) {
  switch (normalization) {
    case FidelityNormalization::kPostselected: return "postselected";
    case FidelityNormalization::kUnnormalized: return "unnormalized";
    case FidelityNormalization::kCoherentOutcomeSum: return "coherent-outcome-sum";
  }
  return "?";
}

namespace {

void require_magnitude(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw ParameterError(fmt::format("|r| must lie in [0, 1], got {}", r));
  }
}

AmplitudePair random_pair(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Complex a{normal(rng), normal(rng)};
  Complex b{normal(rng), normal(rng)};
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  return {a / n, b / n};
}

std::vector<std::vector<AmplitudePair>> input_samples(GateKind gate, const InputSpec& input) {
  const int n = gate_spin_count(gate);
  if (input.convention == InputConvention::kBalanced) {
    return {std::vector<AmplitudePair>(n, kBalancedPair)};
  }
  if (input.samples < 1) throw ParameterError("at least one random sample is required");
  std::mt19937_64 rng(input.seed);
  std::vector<std::vector<AmplitudePair>> out;
  out.reserve(input.samples);
  for (int s = 0; s < input.samples; ++s) {
    std::vector<AmplitudePair> spins;
    for (int k = 0; k < n; ++k) spins.push_back(random_pair(rng));
    out.push_back(std::move(spins));
  }
  return out;
}

struct Evaluation {
  std::optional<double> fidelity;
  double survival = 0.0;
};

Evaluation evaluate(const Netlist& circuit, const TargetGate& target,
                    std::span<const AmplitudePair> spins, const ReflectionPair& r,
                    FidelityNormalization normalization) {
  const RunResult run = run_netlist(circuit, gate_input_state(circuit, spins), r);
  const SpinState ideal = target.apply(SpinState::product(spins));

  double reached = 0.0;
  double incoherent = 0.0;
  Complex coherent{0.0, 0.0};
  for (const auto& o : run.outcomes) {
    const Complex a = overlap(ideal, o.branch);
    reached += o.branch.norm_squared();
    incoherent += std::norm(a);
    coherent += a;
  }
  Evaluation ev{std::nullopt, run.pre_detection_norm2};
  if (reached <= kProbabilityFloor) return ev;
  switch (normalization) {
    case FidelityNormalization::kPostselected:
      ev.fidelity = incoherent / reached;
      break;
    case FidelityNormalization::kUnnormalized:
      ev.fidelity = incoherent;
      break;
    case FidelityNormalization::kCoherentOutcomeSum:
      ev.fidelity = std::norm(coherent) / (static_cast<double>(run.outcomes.size()) * reached);
      break;
  }
  return ev;
}

}  // namespace

double fidelity_closed_form(GateKind gate, double r_mag) {
  require_magnitude(r_mag);
  return fidelity_closed_form_t<double>(gate, r_mag);
}

double efficiency_closed_form(GateKind gate, double r_mag) {
  require_magnitude(r_mag);
  return efficiency_closed_form_t<double>(gate, r_mag);
}

std::optional<double> fidelity_simulated(GateKind gate, const ReflectionPair& r,
                                         const InputSpec& input,
                                         FidelityNormalization normalization) {
  const Netlist circuit = build_gate_circuit(gate);
  const TargetGate target = ideal_gate_unitary(gate);
  double sum = 0.0;
  int defined = 0;
  for (const auto& spins : input_samples(gate, input)) {
    const auto ev = evaluate(circuit, target, spins, r, normalization);
    if (ev.fidelity) {
      sum += *ev.fidelity;
      ++defined;
    }
  }
  if (defined == 0) return std::nullopt;
  return sum / defined;
}

double efficiency_simulated(GateKind gate, const ReflectionPair& r, const InputSpec& input) {
  const Netlist circuit = build_gate_circuit(gate);
  const auto samples = input_samples(gate, input);
  double sum = 0.0;
  for (const auto& spins : samples) {
    sum += propagate(circuit, gate_input_state(circuit, spins), r).norm_squared();
  }
  return sum / static_cast<double>(samples.size());
}

namespace {

SweepRecord make_record(GateKind gate, double ratio, const ReflectionPair& pair,
                        const InputSpec& input) {
  SweepRecord rec;
  rec.coupling_ratio = ratio;
  rec.r_magnitude = std::min(1.0, std::abs(pair.hot));
  rec.gate = gate;
  rec.fidelity_closed = fidelity_closed_form(gate, rec.r_magnitude);
  rec.efficiency_closed = efficiency_closed_form(gate, rec.r_magnitude);
  rec.fidelity_sim = fidelity_simulated(gate, pair, input)
                         .value_or(std::numeric_limits<double>::quiet_NaN());
  rec.efficiency_sim = efficiency_simulated(gate, pair, input);
  return rec;
}

void sort_records(std::vector<SweepRecord>& records) {
  std::ranges::stable_sort(records, [](const SweepRecord& a, const SweepRecord& b) {
    if (a.coupling_ratio != b.coupling_ratio) return a.coupling_ratio < b.coupling_ratio;
    return static_cast<int>(a.gate) < static_cast<int>(b.gate);
  });
}

}  // namespace

std::vector<SweepRecord> sweep(std::span<const GateKind> gates, std::span<const double> ratios,
                               const InputSpec& input) {
  std::vector<SweepRecord> out;
  for (double x : ratios) {
    if (!(x >= 0.0)) throw ParameterError(fmt::format("coupling ratio must be >= 0, got {}", x));
    const ReflectionPair pair = resonant_reflection(x);
    for (auto g : gates) out.push_back(make_record(g, x, pair, input));
  }
  sort_records(out);
  return out;
}

std::vector<SweepRecord> sweep_reflection(std::span<const GateKind> gates,
                                          std::span<const double> r_magnitudes,
                                          const InputSpec& input) {
  std::vector<SweepRecord> out;
  for (double r : r_magnitudes) {
    require_magnitude(r);
    const ReflectionPair pair = ReflectionPair::resonant(r);
    const double ratio = coupling_ratio_for_reflection(r);
    for (auto g : gates) out.push_back(make_record(g, ratio, pair, input));
  }
  sort_records(out);
  return out;
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 2) throw ParameterError("at least two points are required");
  std::vector<double> out(steps);
  for (int i = 0; i < steps; ++i) {
    out[i] = i == steps - 1 ? hi : lo + (hi - lo) * i / (steps - 1);
  }
  return out;
}

std::string sweep_csv(std::span<const SweepRecord> records) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += fmt::format("{:.9g},{:.9g},{},{:.9g},{:.9g},{:.9g},{:.9g}\n", r.coupling_ratio,
                       r.r_magnitude, to_string(r.gate), r.fidelity_closed, r.fidelity_sim,
                       r.efficiency_closed, r.efficiency_sim);
  }
  return out;
}

ConventionReport fidelity_convention_report(int grid_points, const InputSpec& random) {
  ConventionReport report;
  report.grid = linspace(0.0, 1.0, grid_points);
  InputSpec random_spec = random;
  random_spec.convention = InputConvention::kUniformRandom;
  const std::array<InputSpec, 2> inputs{InputSpec{}, random_spec};
  const std::array<FidelityNormalization, 3> modes{FidelityNormalization::kPostselected,
                                                   FidelityNormalization::kUnnormalized,
                                                   FidelityNormalization::kCoherentOutcomeSum};

  report.best_max_residual = std::numeric_limits<double>::infinity();
  for (const auto& input : inputs) {
    for (auto mode : modes) {
      double mode_worst = 0.0;
      for (auto gate : kAllGates) {
        const Netlist circuit = build_gate_circuit(gate);
        const TargetGate target = ideal_gate_unitary(gate);
        const auto samples = input_samples(gate, input);
        ConventionResult res{mode, input.convention, gate, 0.0, 0.0, 0.0};
        for (double r : report.grid) {
          double sum = 0.0;
          int defined = 0;
          for (const auto& spins : samples) {
            const auto ev = evaluate(circuit, target, spins, ReflectionPair::resonant(r), mode);
            if (ev.fidelity) {
              sum += *ev.fidelity;
              ++defined;
            }
          }
          const double f = defined ? sum / defined : std::numeric_limits<double>::quiet_NaN();
          const double residual = std::abs(f - fidelity_closed_form(gate, r));
          if (!(residual <= res.max_residual)) {
            res.max_residual = residual;
            res.worst_r = r;
          }
          if (r == 1.0) res.value_at_one = f;
        }
        mode_worst = std::max(mode_worst, res.max_residual);
        report.results.push_back(res);
      }
      if (mode_worst < report.best_max_residual) {
        report.best_max_residual = mode_worst;
        report.best_normalization = mode;
        report.best_input = input.convention;
      }
    }
  }
  return report;
}

std::string to_markdown(const ConventionReport& report) {
  std::string out = "# Fidelity convention comparison\n\n";
  out += fmt::format(
      "Simulated fidelity against the closed-form expression on {} points of |r| in [0, 1] "
      "(r_hot = |r|, r_cold = -1).\n\n",
      report.grid.size());
  out += "| normalization | input | gate | max residual | at |r| | F_sim(|r|=1) |\n";
  out += "|---|---|---|---|---|---|\n";
  for (const auto& r : report.results) {
    out += fmt::format("| {} | {} | {} | {:.3e} | {:.2f} | {:.12f} |\n", to_string(r.normalization),
                       to_string(r.input), display_name(r.gate), r.max_residual, r.worst_r,
                       r.value_at_one);
  }
  out += fmt::format("\nBest match: {} normalization with {} inputs, max residual {:.3e} over "
                     "all gates.\n",
                     to_string(report.best_normalization), to_string(report.best_input),
                     report.best_max_residual);
  return out;
}

}  // namespace nvgates
