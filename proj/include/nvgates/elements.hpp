#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nvgates/cavity.hpp"
#include "nvgates/state.hpp"

namespace nvgates {

enum class ElementKind {
  kPbsRL,          // transmits |R>, reflects |L>
  kPbsFS,          // transmits |F>, reflects |S>
  kHwp,            // half-wave plate at 22.5 deg (photon Hadamard)
  kBeamSplitter,   // 50:50, polarization independent
  kNvScatter,      // reflection off an NV-cavity block
  kSpinHadamard,   // electron-spin Hadamard
  kSpinPauli,      // I, sigma_z or -sigma_z on one spin
};

enum class PauliOp { kI, kZ, kMinusZ };

std::string_view to_string(ElementKind kind);
std::string_view to_string(PauliOp op);

/// One optical or spin component, wired to spatial modes by label.
struct Element {
  ElementKind kind = ElementKind::kHwp;
  std::vector<ModeLabel> in_modes;
  std::vector<ModeLabel> out_modes;
  std::optional<int> spin;   // 0-based
  std::optional<PauliOp> pauli;

  static Element pbs_rl(std::vector<ModeLabel> in, std::vector<ModeLabel> out);
  static Element pbs_fs(ModeLabel in, ModeLabel out_f, ModeLabel out_s);
  static Element hwp(ModeLabel in, ModeLabel out);
  static Element hwp(ModeLabel mode) { return hwp(mode, mode); }
  static Element beam_splitter(std::vector<ModeLabel> in, std::vector<ModeLabel> out);
  static Element nv_scatter(ModeLabel in, ModeLabel out, int spin);
  static Element spin_hadamard(int spin);
  static Element spin_pauli(int spin, PauliOp op);

  bool operator==(const Element&) const = default;
};

// Port-count invariants per kind; throws WiringError when violated.
void check_arity(const Element& element);

/// PBS in the R/L basis. |R> on in[k] leaves on out[k]; |L> on in[k] leaves
/// on out[1-k]. A single input means the second input port is vacuum.
HybridState apply_pbs_rl(const HybridState& state, std::span<const ModeLabel> in_modes,
                         std::span<const ModeLabel> out_modes);

/// PBS in the F/S basis: the |F> component leaves on out_f (as |F>), the |S>
/// component on out_s (as |S>).
HybridState apply_pbs_fs(const HybridState& state, ModeLabel in_mode, ModeLabel out_f,
                         ModeLabel out_s);

/// |R> -> (|R>+|L>)/sqrt2, |L> -> (|R>-|L>)/sqrt2.
HybridState apply_hwp(const HybridState& state, ModeLabel in_mode, ModeLabel out_mode);
HybridState apply_hwp(const HybridState& state, ModeLabel mode);

/// 50:50 BS: in[1] -> (out[0] + out[1])/sqrt2, in[0] -> (out[0] - out[1])/sqrt2.
HybridState apply_bs(const HybridState& state, std::span<const ModeLabel> in_modes,
                     std::span<const ModeLabel> out_modes);

/// |+> -> (|+>+|->)/sqrt2, |-> -> (|+>-|->)/sqrt2 on one spin.
HybridState apply_spin_hadamard(const HybridState& state, int spin);

HybridState apply_spin_pauli(const HybridState& state, int spin, PauliOp op);
SpinState apply_spin_pauli(const SpinState& state, int spin, PauliOp op);

HybridState apply_element(const HybridState& state, const Element& element,
                          const ReflectionPair& r = ReflectionPair::ideal());

}  // namespace nvgates
