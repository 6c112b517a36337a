#include "nvgates/gates.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "nvgates/errors.hpp"

namespace nvgates {

std::string_view to_string(GateKind gate) {
  switch (gate) {
    case GateKind::kCnot: return "cnot";
    case GateKind::kToffoli: return "toffoli";
    case GateKind::kFredkin: return "fredkin";
  }
  return "?";
}

std::string_view display_name(GateKind gate) {
  switch (gate) {
    case GateKind::kCnot: return "CNOT";
    case GateKind::kToffoli: return "Toffoli";
    case GateKind::kFredkin: return "Fredkin";
  }
  return "?";
}

std::optional<GateKind> parse_gate_kind(std::string_view name) {
  std::string lower(name);
  std::ranges::transform(lower, lower.begin(),
                         [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto g : kAllGates) {
    if (lower == to_string(g)) return g;
  }
  return std::nullopt;
}

int gate_spin_count(GateKind gate) { return gate == GateKind::kCnot ? 2 : 3; }

std::uint32_t gate_permutation(GateKind gate, std::uint32_t config) {
  switch (gate) {
    case GateKind::kCnot:
      return (config & 0b10u) ? config ^ 0b01u : config;
    case GateKind::kToffoli:
      return (config & 0b110u) == 0b110u ? config ^ 0b001u : config;
    case GateKind::kFredkin: {
      if (!(config & 0b100u)) return config;
      const std::uint32_t t1 = (config >> 1) & 1u;
      const std::uint32_t t2 = config & 1u;
      return 0b100u | (t2 << 1) | t1;
    }
  }
  return config;
}

SpinState TargetGate::apply(const SpinState& input) const {
  if (input.n_spins() != gate_spin_count(gate)) {
    throw DimensionError("spin count does not match the gate");
  }
  return SpinState(input.n_spins(), unitary * input.amplitudes());
}

TargetGate ideal_gate_unitary(GateKind gate) {
  const auto dim = std::size_t{1} << gate_spin_count(gate);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::uint32_t c = 0; c < dim; ++c) u(gate_permutation(gate, c), c) = 1.0;
  return {gate, std::move(u)};
}

double deviation_up_to_phase(const SpinState& a, const SpinState& b) {
  if (a.n_spins() != b.n_spins()) throw DimensionError("spin counts differ");
  const Complex ov = overlap(b, a);
  const Complex phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : Complex{1.0, 0.0};
  return (a.amplitudes() - phase * b.amplitudes()).norm();
}

namespace {

// Fragment labels used to evaluate blocks in isolation.
constexpr ModeLabel kBlockIn = 0;
constexpr ModeLabel kBlockArmR = 1;
constexpr ModeLabel kBlockArmL = 2;
constexpr ModeLabel kBlockMid = 3;
constexpr ModeLabel kBlockNvOut = 4;
constexpr ModeLabel kBlockOut = 5;
constexpr ModeLabel kBlockDump = 6;

template <int Dim>
Eigen::Matrix<Complex, Dim, Dim> block_matrix(int n_spins, Polarization routed,
                                              std::span<const int> spins,
                                              std::span<const ReflectionPair> rs) {
  const StateLayout layout(n_spins, {kBlockIn, kBlockArmR, kBlockArmL, kBlockMid, kBlockNvOut,
                                     kBlockOut, kBlockDump});
  const std::uint32_t spin_dim = 1u << n_spins;
  Eigen::Matrix<Complex, Dim, Dim> m = Eigen::Matrix<Complex, Dim, Dim>::Zero();
  const std::array<ModeLabel, 1> in{kBlockIn};
  const std::array<ModeLabel, 2> split{kBlockArmR, kBlockArmL};
  for (int pol = 0; pol < 2; ++pol) {
    for (std::uint32_t c = 0; c < spin_dim; ++c) {
      HybridState s = HybridState::zero(layout);
      Eigen::VectorXcd v = s.amplitudes();
      v[layout.index(static_cast<Polarization>(pol), layout.mode_index(kBlockIn), c)] = 1.0;
      s = HybridState(layout, std::move(v));

      s = apply_pbs_rl(s, in, split);
      ModeLabel arm = routed == Polarization::kR ? kBlockArmR : kBlockArmL;
      const std::array<ModeLabel, 2> nv_outs{kBlockMid, kBlockNvOut};
      for (std::size_t k = 0; k < spins.size(); ++k) {
        const ModeLabel next = nv_outs[spins.size() - 1 - k];
        s = scatter(s, spins[k], arm, next, rs[k]);
        arm = next;
      }
      const std::array<ModeLabel, 2> merge =
          routed == Polarization::kR ? std::array<ModeLabel, 2>{arm, kBlockArmL}
                                     : std::array<ModeLabel, 2>{kBlockArmR, arm};
      const std::array<ModeLabel, 2> outs{kBlockOut, kBlockDump};
      s = apply_pbs_rl(s, merge, outs);

      const int col = pol * static_cast<int>(spin_dim) + static_cast<int>(c);
      for (int opol = 0; opol < 2; ++opol) {
        for (std::uint32_t oc = 0; oc < spin_dim; ++oc) {
          m(opol * static_cast<int>(spin_dim) + static_cast<int>(oc), col) =
              s.amplitude(static_cast<Polarization>(opol), kBlockOut, oc);
        }
      }
    }
  }
  return m;
}

}  // namespace

Eigen::Matrix4cd build_mz_block(Polarization routed, const ReflectionPair& r) {
  const std::array<int, 1> spins{0};
  const std::array<ReflectionPair, 1> rs{r};
  return block_matrix<4>(1, routed, spins, rs);
}

Eigen::Matrix<Complex, 8, 8> build_two_nv_mz_block(TwoNvOrder order, Polarization routed,
                                                   const ReflectionPair& r2,
                                                   const ReflectionPair& r3) {
  std::array<int, 2> spins{0, 1};
  std::array<ReflectionPair, 2> rs{r2, r3};
  if (order == TwoNvOrder::kNv3ThenNv2) {
    spins = {1, 0};
    rs = {r3, r2};
  }
  return block_matrix<8>(2, routed, spins, rs);
}

namespace {

// Appends PBS -> NV chain on the routed arm -> PBS. `arms` lists the
// transmitted arm, the reflected arm, then the output of each NV.
void append_mz(std::vector<Element>& out, ModeLabel in, ModeLabel exit, ModeLabel dump,
               Polarization routed, std::initializer_list<int> spins,
               std::initializer_list<ModeLabel> arms) {
  const std::vector<ModeLabel> a(arms);
  out.push_back(Element::pbs_rl({in}, {a[0], a[1]}));
  ModeLabel arm = routed == Polarization::kR ? a[0] : a[1];
  std::size_t k = 2;
  for (int spin : spins) {
    out.push_back(Element::nv_scatter(arm, a[k], spin));
    arm = a[k++];
  }
  if (routed == Polarization::kR) {
    out.push_back(Element::pbs_rl({arm, a[1]}, {exit, dump}));
  } else {
    out.push_back(Element::pbs_rl({a[0], arm}, {exit, dump}));
  }
}

std::vector<ModeLabel> used_modes(const std::vector<Element>& elements) {
  std::vector<ModeLabel> modes;
  for (const auto& e : elements) {
    for (auto m : e.in_modes) modes.push_back(m);
    for (auto m : e.out_modes) modes.push_back(m);
  }
  std::ranges::sort(modes);
  modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
  return modes;
}

constexpr auto kR = Polarization::kR;
constexpr auto kL = Polarization::kL;

std::vector<Element> cnot_elements() {
  std::vector<Element> e;
  append_mz(e, 0, 4, 90, kL, {0}, {1, 2, 3});
  e.push_back(Element::hwp(4, 5));
  e.push_back(Element::spin_hadamard(1));
  append_mz(e, 5, 9, 91, kR, {1}, {7, 6, 8});
  e.push_back(Element::spin_hadamard(1));
  return e;
}

// Both share the first stage: MZ on NV1, HWP, split into two F/S-style arms.
void three_spin_front(std::vector<Element>& e) {
  append_mz(e, 0, 1, 90, kL, {0}, {20, 21, 22});
  e.push_back(Element::hwp(1, 2));
  e.push_back(Element::pbs_rl({2}, {3, 4}));
  e.push_back(Element::hwp(3, 5));
  e.push_back(Element::hwp(4, 6));
}

std::vector<Element> toffoli_elements() {
  std::vector<Element> e;
  three_spin_front(e);
  append_mz(e, 5, 7, 91, kR, {1}, {23, 24, 25});
  append_mz(e, 6, 8, 92, kL, {1}, {26, 27, 28});
  e.push_back(Element::hwp(7, 9));
  e.push_back(Element::hwp(8, 10));
  e.push_back(Element::spin_hadamard(2));
  append_mz(e, 9, 11, 93, kL, {2}, {29, 30, 31});
  e.push_back(Element::spin_hadamard(2));
  e.push_back(Element::beam_splitter({10, 11}, {12, 13}));
  return e;
}

std::vector<Element> fredkin_elements() {
  std::vector<Element> e;
  three_spin_front(e);
  append_mz(e, 5, 7, 91, kR, {1, 2}, {23, 24, 25, 26});
  append_mz(e, 6, 8, 92, kR, {1, 2}, {27, 28, 29, 30});
  e.push_back(Element::hwp(7, 9));
  e.push_back(Element::hwp(8, 10));
  e.push_back(Element::spin_hadamard(1));
  e.push_back(Element::spin_hadamard(2));
  append_mz(e, 9, 11, 93, kL, {2, 1}, {31, 32, 33, 34});
  e.push_back(Element::spin_hadamard(1));
  e.push_back(Element::spin_hadamard(2));
  e.push_back(Element::beam_splitter({10, 11}, {12, 13}));
  return e;
}

}  // namespace

FeedforwardTable gate_feedforward(GateKind gate) {
  using enum PauliOp;
  constexpr auto F = FsOutcome::kF;
  constexpr auto S = FsOutcome::kS;
  FeedforwardTable t;
  auto rule = [&](FsOutcome o, ModeLabel m, std::initializer_list<PauliOp> ops) {
    std::vector<SpinCorrection> fixes;
    int k = 0;
    for (auto op : ops) fixes.push_back({k++, op});
    t.rules[{o, m}] = std::move(fixes);
  };
  switch (gate) {
    case GateKind::kCnot:
      rule(F, 9, {kI, kI});
      rule(S, 9, {kMinusZ, kI});
      break;
    case GateKind::kToffoli:
      rule(F, 12, {kI, kI, kI});
      rule(S, 12, {kI, kZ, kI});
      rule(F, 13, {kMinusZ, kI, kI});
      rule(S, 13, {kMinusZ, kZ, kI});
      break;
    case GateKind::kFredkin:
      rule(F, 12, {kI, kZ, kZ});
      rule(S, 12, {kMinusZ, kI, kI});
      rule(F, 13, {kMinusZ, kZ, kZ});
      rule(S, 13, {kI, kI, kI});
      break;
  }
  return t;
}

Netlist build_gate_circuit(GateKind gate) {
  Netlist n;
  n.n_spins = gate_spin_count(gate);
  switch (gate) {
    case GateKind::kCnot:
      n.elements = cnot_elements();
      n.detectors = {{9}};
      break;
    case GateKind::kToffoli:
      n.elements = toffoli_elements();
      n.detectors = {{12}, {13}};
      break;
    case GateKind::kFredkin:
      n.elements = fredkin_elements();
      n.detectors = {{12}, {13}};
      break;
  }
  n.modes = used_modes(n.elements);
  n.feedforward = gate_feedforward(gate);
  validate_netlist(n);
  return n;
}

HybridState gate_input_state(const Netlist& circuit, std::span<const AmplitudePair> spins,
                             const AmplitudePair& photon) {
  if (static_cast<int>(spins.size()) != circuit.n_spins) {
    throw DimensionError("one amplitude pair per spin is required");
  }
  const auto sources = circuit.source_modes();
  if (sources.size() != 1) throw WiringError("circuit must have exactly one input mode");
  return make_product_state(circuit.layout(), photon, sources.front(), spins);
}

}  // namespace nvgates
