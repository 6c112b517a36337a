#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include <Eigen/Dense>

#include "nvgates/cavity.hpp"
#include "nvgates/netlist.hpp"
#include "nvgates/state.hpp"

namespace nvgates {

enum class GateKind { kCnot, kToffoli, kFredkin };

inline constexpr std::array<GateKind, 3> kAllGates{GateKind::kCnot, GateKind::kToffoli,
                                                   GateKind::kFredkin};

std::string_view to_string(GateKind gate);      // "cnot", "toffoli", "fredkin"
std::string_view display_name(GateKind gate);   // "CNOT", "Toffoli", "Fredkin"
// Case-insensitive.
std::optional<GateKind> parse_gate_kind(std::string_view name);
int gate_spin_count(GateKind gate);

/// Classical action on basis configurations (|-> is logical 1, spin 0 is the
/// first control). CNOT flips the target when the control is |->; Toffoli
/// flips it when both controls are |->; Fredkin swaps the two targets when
/// the control is |->.
std::uint32_t gate_permutation(GateKind gate, std::uint32_t config);

struct TargetGate {
  GateKind gate;
  Eigen::MatrixXcd unitary;

  SpinState apply(const SpinState& input) const;
};

TargetGate ideal_gate_unitary(GateKind gate);

// min over phi of |a - e^{i phi} b|.
double deviation_up_to_phase(const SpinState& a, const SpinState& b);

/// Mach-Zehnder block around one NV: a PBS splits R and L, the `routed` arm
/// reflects off the NV, a second PBS recombines. Matrix in the basis
/// {R+, R-, L+, L-}.
Eigen::Matrix4cd build_mz_block(Polarization routed,
                                const ReflectionPair& r = ReflectionPair::ideal());

enum class TwoNvOrder { kNv2ThenNv3, kNv3ThenNv2 };

/// Same with two NVs in sequence on the routed arm. Basis
/// {R++, R+-, R-+, R--, L++, L+-, L-+, L--} with NV2 as the first spin.
Eigen::Matrix<Complex, 8, 8> build_two_nv_mz_block(
    TwoNvOrder order, Polarization routed, const ReflectionPair& r2 = ReflectionPair::ideal(),
    const ReflectionPair& r3 = ReflectionPair::ideal());

/// Full gate circuit with its detectors and feedforward table. The photon
/// enters on mode kGateInputMode; modes 90 and up collect light that leaves
/// through unused PBS ports.
Netlist build_gate_circuit(GateKind gate);
FeedforwardTable gate_feedforward(GateKind gate);

inline constexpr ModeLabel kGateInputMode = 0;

// Photon in (|R> + |L>)/sqrt2.
inline constexpr AmplitudePair kBalancedPair{Complex{0.70710678118654752, 0.0},
                                             Complex{0.70710678118654752, 0.0}};

HybridState gate_input_state(const Netlist& circuit, std::span<const AmplitudePair> spins,
                             const AmplitudePair& photon = kBalancedPair);

}  // namespace nvgates
