#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "nvgates/analysis.hpp"
#include "nvgates/errors.hpp"
#include "nvgates/gates.hpp"
#include "nvgates/netlist.hpp"

namespace nvgates::cli {
namespace {

namespace fs = std::filesystem;

constexpr double kIdealTolerance = 1e-10;

// Bad flag values detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Regime {
  bool ideal = false;
  std::optional<double> ratio;
  std::optional<double> r;

  void add_to(CLI::App& cmd) {
    auto* i = cmd.add_flag("--ideal", ideal, "Strong-coupling limit r = 1, r0 = -1 (default)");
    auto* g = cmd.add_option("--ratio", ratio, "Resonant cavity with coupling ratio g/sqrt(kappa gamma)")
                  ->check(CLI::NonNegativeNumber);
    auto* m = cmd.add_option("--r", r, "Resonant cavity with |r| given directly")->check(CLI::Range(0.0, 1.0));
    i->excludes(g)->excludes(m);
    g->excludes(m);
  }

  bool is_ideal() const { return !ratio && !r; }

  ReflectionPair pair() const {
    if (ratio) return resonant_reflection(*ratio);
    if (r) return ReflectionPair::resonant(*r);
    return ReflectionPair::ideal();
  }

  std::string describe() const {
    if (ratio) {
      return fmt::format("g/sqrt(kappa gamma) = {} (r = {:.9g})", *ratio, resonant_reflection(*ratio).hot.real());
    }
    if (r) return fmt::format("|r| = {}", *r);
    return "ideal (r = 1, r0 = -1)";
  }
};

GateKind gate_from(const std::string& name) {
  if (auto g = parse_gate_kind(name)) return *g;
  throw UsageError(fmt::format("unknown gate '{}' (expected cnot, toffoli or fredkin)", name));
}

fs::path resolve_output(const std::string& path) {
  fs::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("NVGATES_OUTPUT_DIR"); dir && *dir) p = fs::path(dir) / p;
  }
  return p;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
  file << text;
  if (!file.flush()) throw std::runtime_error(fmt::format("failed writing {}", path.string()));
}

std::string format_amplitude(Complex a) {
  if (std::abs(a.imag()) < 5e-13) return fmt::format("{:.6g}", a.real());
  if (std::abs(a.real()) < 5e-13) return fmt::format("{:.6g}i", a.imag());
  return fmt::format("({:.6g}{:+.6g}i)", a.real(), a.imag());
}

std::string format_spins(const SpinState& s) {
  const auto& v = s.amplitudes();
  std::string out;
  for (Eigen::Index c = 0; c < v.size(); ++c) {
    if (std::abs(v[c]) < 1e-12) continue;
    const bool real_negative = std::abs(v[c].imag()) < 5e-13 && v[c].real() < 0.0;
    if (!out.empty()) out += real_negative ? " - " : " + ";
    const Complex a = !out.empty() && real_negative ? -v[c] : v[c];
    out += format_amplitude(a) + SpinConfig(s.n_spins(), static_cast<std::uint32_t>(c)).ket();
  }
  return out.empty() ? "0" : out;
}

// Bare ket when the state is a basis state up to phase.
std::string format_output(const SpinState& s) {
  const auto& v = s.amplitudes();
  Eigen::Index best = 0;
  v.cwiseAbs().maxCoeff(&best);
  if (std::abs(std::abs(v[best]) - 1.0) < 1e-9) {
    return SpinConfig(s.n_spins(), static_cast<std::uint32_t>(best)).ket();
  }
  return format_spins(s);
}

AmplitudePair parse_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError(fmt::format("expected 'a,b' amplitudes, got '{}'", text));
  try {
    const double a = std::stod(text.substr(0, comma));
    const double b = std::stod(text.substr(comma + 1));
    return {Complex{a, 0.0}, Complex{b, 0.0}};
  } catch (const std::logic_error&) {
    throw UsageError(fmt::format("cannot parse amplitudes '{}'", text));
  }
}

AmplitudePair random_pair(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  const Complex a{n(rng), n(rng)};
  const Complex b{n(rng), n(rng)};
  const double norm = std::sqrt(std::norm(a) + std::norm(b));
  return {a / norm, b / norm};
}

AmplitudePair photon_from(const std::string& name) {
  if (name == "balanced") return kBalancedPair;
  if (name == "R") return {Complex{1.0, 0.0}, Complex{0.0, 0.0}};
  if (name == "L") return {Complex{0.0, 0.0}, Complex{1.0, 0.0}};
  return parse_pair(name);
}

struct Context {
  std::ostream& out;
  std::ostream& err;
};

// run ---------------------------------------------------------------------

struct RunOptions {
  std::string netlist;
  Regime regime;
  std::string input = "balanced";
  std::vector<std::string> spins;
  std::string photon = "balanced";
  std::uint64_t seed = 2024;
};

int cmd_run(const RunOptions& o, Context ctx) {
  const auto net = load_netlist(o.netlist);
  std::vector<AmplitudePair> spins;
  if (!o.spins.empty()) {
    if (static_cast<int>(o.spins.size()) != net.n_spins) {
      throw UsageError(fmt::format("netlist has {} spins, {} --spin values given", net.n_spins, o.spins.size()));
    }
    for (const auto& s : o.spins) spins.push_back(parse_pair(s));
  } else if (o.input == "random") {
    std::mt19937_64 rng(o.seed);
    for (int k = 0; k < net.n_spins; ++k) spins.push_back(random_pair(rng));
    fmt::print(ctx.out, "seed: {}\n", o.seed);
  } else if (o.input == "balanced") {
    spins.assign(static_cast<std::size_t>(net.n_spins), kBalancedPair);
  } else {
    throw UsageError(fmt::format("unknown input '{}' (expected balanced or random)", o.input));
  }

  const auto sources = net.source_modes();
  if (sources.size() != 1) {
    throw std::runtime_error(fmt::format("netlist has {} source modes, expected one", sources.size()));
  }
  const auto input = make_product_state(net.layout(), photon_from(o.photon), sources.front(), spins);
  const auto result = run_netlist(net, input, o.regime.pair());

  fmt::print(ctx.out, "netlist: {}\n", o.netlist);
  fmt::print(ctx.out, "regime: {}\n", o.regime.describe());
  fmt::print(ctx.out, "input spins: {}\n", format_spins(SpinState::product(spins)));
  fmt::print(ctx.out, "pre-detection norm^2: {:.9g}\n", result.pre_detection_norm2);
  if (result.undetected_probability > 0.0) {
    fmt::print(ctx.out, "undetected: {:.9g}\n", result.undetected_probability);
  }
  for (const auto& r : result.outcomes) {
    fmt::print(ctx.out, "{:<5} p = {:.9f}  {}\n", r.outcome.label(), r.probability,
               r.empty ? std::string("(no photon)") : format_spins(r.spins));
  }
  return kOk;
}

// verify ------------------------------------------------------------------

struct VerifyOptions {
  std::string gate;
  Regime regime;
  int trials = 200;
  std::uint64_t seed = 2024;
};

int cmd_verify(const VerifyOptions& o, Context ctx) {
  const GateKind gate = gate_from(o.gate);
  const auto circuit = build_gate_circuit(gate);
  const auto target = ideal_gate_unitary(gate);
  const auto pair = o.regime.pair();
  std::mt19937_64 rng(o.seed);

  double max_deviation = 0.0;
  double fidelity_sum = 0.0;
  double min_fidelity = 1.0;
  double efficiency_sum = 0.0;
  int defined = 0;
  for (int t = 0; t < o.trials; ++t) {
    std::vector<AmplitudePair> spins;
    for (int k = 0; k < circuit.n_spins; ++k) spins.push_back(random_pair(rng));
    const auto ideal = target.apply(SpinState::product(spins));
    const auto result = run_netlist(circuit, gate_input_state(circuit, spins), pair);
    double weighted = 0.0;
    double survived = 0.0;
    for (const auto& r : result.outcomes) {
      if (r.empty) continue;
      max_deviation = std::max(max_deviation, deviation_up_to_phase(r.spins, ideal));
      weighted += r.probability * std::norm(overlap(ideal, r.spins));
      survived += r.probability;
    }
    efficiency_sum += result.pre_detection_norm2;
    if (survived > 0.0) {
      const double f = weighted / survived;
      fidelity_sum += f;
      min_fidelity = std::min(min_fidelity, f);
      ++defined;
    }
  }

  const bool ideal = o.regime.is_ideal();
  fmt::print(ctx.out, "gate: {}\n", display_name(gate));
  fmt::print(ctx.out, "regime: {}\n", o.regime.describe());
  fmt::print(ctx.out, "seed: {}\n", o.seed);
  fmt::print(ctx.out, "trials: {}\n", o.trials);
  fmt::print(ctx.out, "outcomes per trial: {}\n", circuit.outcomes().size());
  fmt::print(ctx.out, "max deviation from ideal output: {:.3e}\n", max_deviation);
  if (defined > 0) {
    fmt::print(ctx.out, "postselected fidelity: mean {:.9f}, min {:.9f}\n", fidelity_sum / defined, min_fidelity);
  }
  fmt::print(ctx.out, "mean efficiency: {:.9f}\n", o.trials > 0 ? efficiency_sum / o.trials : 0.0);
  if (!ideal) {
    fmt::print(ctx.out, "result: realistic regime, deviation reported only\n");
    return kOk;
  }
  const bool pass = max_deviation <= kIdealTolerance;
  fmt::print(ctx.out, "result: {} (tolerance {:.0e})\n", pass ? "PASS" : "FAIL", kIdealTolerance);
  return pass ? kOk : kRuntimeError;
}

// truth-table -------------------------------------------------------------

struct TruthTableOptions {
  std::string gate;
  Regime regime;
};

int cmd_truth_table(const TruthTableOptions& o, Context ctx) {
  const GateKind gate = gate_from(o.gate);
  const auto circuit = build_gate_circuit(gate);
  const auto pair = o.regime.pair();
  const int n = circuit.n_spins;
  const auto outcomes = circuit.outcomes();

  fmt::print(ctx.out, "{} truth table, {}\n", display_name(gate), o.regime.describe());
  const std::size_t width = static_cast<std::size_t>(n) + 3;
  std::string header = fmt::format("{:<{}}  {:<{}}", "input", width, "output", width);
  for (const auto& oc : outcomes) header += fmt::format("  {:>8}", "p(" + oc.label() + ")");
  fmt::print(ctx.out, "{}\n", header);

  for (std::uint32_t c = 0; c < (1u << n); ++c) {
    std::vector<AmplitudePair> spins;
    for (int k = 0; k < n; ++k) {
      const bool minus = (c & SpinConfig::bit_mask(n, k)) != 0;
      spins.push_back(minus ? AmplitudePair{0.0, 1.0} : AmplitudePair{1.0, 0.0});
    }
    const auto result = run_netlist(circuit, gate_input_state(circuit, spins), pair);
    std::optional<SpinState> reference;
    bool agree = true;
    for (const auto& r : result.outcomes) {
      if (r.empty) continue;
      if (!reference) {
        reference = r.spins;
      } else if (deviation_up_to_phase(r.spins, *reference) > 1e-9) {
        agree = false;
      }
    }
    std::string output = !reference ? "(lost)" : agree ? format_output(*reference) : "(outcome dependent)";
    std::string row = fmt::format("{:<{}}  {:<{}}", SpinConfig(n, c).ket(), width, output, width);
    for (const auto& r : result.outcomes) row += fmt::format("  {:>8.4f}", r.probability);
    fmt::print(ctx.out, "{}\n", row);
    if (!agree) {
      for (const auto& r : result.outcomes) {
        if (!r.empty) fmt::print(ctx.out, "    {}: {}\n", r.outcome.label(), format_spins(r.spins));
      }
    }
  }
  return kOk;
}

// sweep -------------------------------------------------------------------

struct SweepOptions {
  std::vector<std::string> gates{"cnot", "toffoli", "fredkin"};
  double min = 0.5;
  double max = 10.0;
  int steps = 96;
  std::string axis = "ratio";
  std::string input = "balanced";
  int samples = 200;
  std::uint64_t seed = 2024;
  std::string out;
};

int cmd_sweep(const SweepOptions& o, Context ctx) {
  std::vector<GateKind> gates;
  for (const auto& g : o.gates) gates.push_back(gate_from(g));
  if (o.steps < 2) throw UsageError("--steps must be at least 2");
  if (o.min < 0.0) throw UsageError("--min must be >= 0");
  if (!(o.max > o.min)) throw UsageError(fmt::format("--max ({}) must exceed --min ({}) for {} steps", o.max, o.min, o.steps));
  if (o.axis != "ratio" && o.axis != "r") throw UsageError("--axis must be 'ratio' or 'r'");
  if (o.axis == "r" && o.max > 1.0) throw UsageError("--max must be <= 1 on the r axis");

  InputSpec input;
  if (o.input == "balanced") {
    input.convention = InputConvention::kBalanced;
  } else if (o.input == "random") {
    input = {InputConvention::kUniformRandom, o.samples, o.seed};
  } else {
    throw UsageError(fmt::format("unknown input '{}' (expected balanced or random)", o.input));
  }

  const auto grid = linspace(o.min, o.max, o.steps);
  const auto records = o.axis == "ratio" ? sweep(gates, grid, input) : sweep_reflection(gates, grid, input);
  const auto csv = sweep_csv(records);
  if (o.out.empty()) {
    ctx.out << csv;
    if (input.convention == InputConvention::kUniformRandom) fmt::print(ctx.err, "seed: {}\n", o.seed);
    return kOk;
  }
  const auto path = resolve_output(o.out);
  write_file(path, csv);
  fmt::print(ctx.out, "wrote {} rows to {}\n", records.size(), path.string());
  if (input.convention == InputConvention::kUniformRandom) fmt::print(ctx.out, "seed: {}\n", o.seed);
  return kOk;
}

// params ------------------------------------------------------------------

struct ParamsOptions {
  std::optional<double> ratio;
  std::optional<double> g;
  double kappa = 1.0;
  double gamma = 1.0;
  double cavity_detuning = 0.0;
  double nv_detuning = 0.0;
  std::optional<double> quality;
  double wavelength_nm = 637.0;
};

int cmd_params(const ParamsOptions& o, Context ctx) {
  if (!o.ratio && !o.g && !o.quality) throw UsageError("give --ratio, --g or --q");
  if (o.ratio || o.g) {
    const CavityParams p = o.ratio ? CavityParams::resonant(*o.ratio, 1.0, 1.0)
                                   : CavityParams{*o.g, o.kappa, o.gamma, o.cavity_detuning, o.nv_detuning};
    const auto r = reflection_coefficient(p);
    fmt::print(ctx.out, "g/sqrt(kappa gamma): {:.9g}\n", p.coupling / std::sqrt(p.kappa * p.gamma));
    fmt::print(ctx.out, "r (hot): {}\n", format_amplitude(r.hot));
    fmt::print(ctx.out, "r0 (cold): {}\n", format_amplitude(r.cold));
    fmt::print(ctx.out, "|r|: {:.9g}\n", std::abs(r.hot));
    if (std::abs(r.hot.imag()) < 1e-15 && r.hot.real() >= 0.0 && std::abs(r.cold + 1.0) < 1e-15) {
      for (auto gate : kAllGates) {
        fmt::print(ctx.out, "{:<8} F = {:.6f}  eta = {:.6f}\n", display_name(gate),
                   fidelity_closed_form(gate, r.hot.real()), efficiency_closed_form(gate, r.hot.real()));
      }
    }
  }
  if (o.quality) {
    const double lambda = o.wavelength_nm * 1e-9;
    fmt::print(ctx.out, "Q = {:g} at {:g} nm\n", *o.quality, o.wavelength_nm);
    fmt::print(ctx.out, "kappa (c / lambda Q): {:.6g} GHz\n", kappa_from_quality_factor(*o.quality, lambda) / 1e9);
    fmt::print(ctx.out, "kappa / 2pi (angular reading): {:.6g} GHz\n",
               kappa_from_quality_factor(*o.quality, lambda, LinewidthConvention::kAngular) / 1e9);
  }
  return kOk;
}

// report ------------------------------------------------------------------

struct ReportOptions {
  int grid = 101;
  int samples = 64;
  std::uint64_t seed = 2024;
  std::string out;
};

int cmd_report(const ReportOptions& o, Context ctx) {
  if (o.grid < 2) throw UsageError("--grid must be at least 2");
  const auto report = fidelity_convention_report(o.grid, {InputConvention::kUniformRandom, o.samples, o.seed});
  const auto text = to_markdown(report);
  if (o.out.empty()) {
    ctx.out << text;
    return kOk;
  }
  const auto path = resolve_output(o.out);
  write_file(path, text);
  fmt::print(ctx.out, "wrote {}\n", path.string());
  fmt::print(ctx.out, "seed: {}\n", o.seed);
  fmt::print(ctx.out, "best match: {} normalization, {} inputs, max residual {:.3g}\n",
             to_string(report.best_normalization), to_string(report.best_input), report.best_max_residual);
  return kOk;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate NV-center CNOT, Toffoli and Fredkin gates", "nvgate"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Propagate a netlist and list detector outcomes");
  run_cmd->add_option("netlist", run.netlist, "Path to a .nv netlist")->required();
  run.regime.add_to(*run_cmd);
  run_cmd->add_option("--input", run.input, "balanced or random product spin input");
  run_cmd->add_option("--spin", run.spins, "Real amplitudes 'a,b' of one spin, once per spin");
  run_cmd->add_option("--photon", run.photon, "balanced, R, L or 'a,b'");
  run_cmd->add_option("--seed", run.seed, "Seed for --input random");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check a gate against its ideal permutation on random inputs");
  verify_cmd->add_option("gate", verify.gate, "cnot, toffoli or fredkin")->required();
  verify.regime.add_to(*verify_cmd);
  verify_cmd->add_option("--trials", verify.trials, "Random product inputs")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify.seed, "Random seed");

  TruthTableOptions table;
  auto* table_cmd = app.add_subcommand("truth-table", "Basis-state inputs and outputs with outcome probabilities");
  table_cmd->add_option("gate", table.gate, "cnot, toffoli or fredkin")->required();
  table.regime.add_to(*table_cmd);

  SweepOptions sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Write fidelity and efficiency CSV over a parameter grid");
  sweep_cmd->add_option("--gates", sw.gates, "Gates to include")->delimiter(',');
  sweep_cmd->add_option("--min", sw.min, "First grid value");
  sweep_cmd->add_option("--max", sw.max, "Last grid value");
  sweep_cmd->add_option("--steps", sw.steps, "Grid points, endpoints included");
  sweep_cmd->add_option("--axis", sw.axis, "ratio (g/sqrt(kappa gamma)) or r (|r| directly)");
  sweep_cmd->add_option("--input", sw.input, "balanced or random");
  sweep_cmd->add_option("--samples", sw.samples, "Random inputs per point")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", sw.seed, "Seed for --input random");
  sweep_cmd->add_option("-o,--out", sw.out, "CSV path (stdout when omitted)");

  ParamsOptions params;
  auto* params_cmd = app.add_subcommand("params", "Reflection coefficients and cavity linewidths");
  auto* ratio_opt = params_cmd->add_option("--ratio", params.ratio, "Resonant g/sqrt(kappa gamma)")
                        ->check(CLI::NonNegativeNumber);
  auto* g_opt = params_cmd->add_option("--g", params.g, "Coupling strength g")->check(CLI::NonNegativeNumber);
  ratio_opt->excludes(g_opt);
  params_cmd->add_option("--kappa", params.kappa, "Cavity damping rate");
  params_cmd->add_option("--gamma", params.gamma, "NV decay rate");
  params_cmd->add_option("--cavity-detuning", params.cavity_detuning, "omega_c - omega_p");
  params_cmd->add_option("--nv-detuning", params.nv_detuning, "omega_0 - omega_p");
  params_cmd->add_option("--q", params.quality, "Cavity quality factor");
  params_cmd->add_option("--wavelength", params.wavelength_nm, "Wavelength in nm");

  ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "Compare simulated fidelity conventions with the closed form");
  report_cmd->add_option("--grid", report.grid, "Points on |r| in [0, 1]");
  report_cmd->add_option("--samples", report.samples, "Random inputs per point")->check(CLI::PositiveNumber);
  report_cmd->add_option("--seed", report.seed, "Seed for random inputs");
  report_cmd->add_option("-o,--out", report.out, "Markdown path (stdout when omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  const Context ctx{out, err};
  try {
    if (*run_cmd) return cmd_run(run, ctx);
    if (*verify_cmd) return cmd_verify(verify, ctx);
    if (*table_cmd) return cmd_truth_table(table, ctx);
    if (*sweep_cmd) return cmd_sweep(sw, ctx);
    if (*params_cmd) return cmd_params(params, ctx);
    if (*report_cmd) return cmd_report(report, ctx);
  } catch (const UsageError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsageError;
  } catch (const ParameterError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsageError;
  } catch (const NormalizationError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace nvgates::cli
