#include "nvgates/elements.hpp"

#include <algorithm>
#include <array>

#include <fmt/format.h>

#include "nvgates/errors.hpp"
#include "routing.hpp"

namespace nvgates {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr auto R = Polarization::kR;
constexpr auto L = Polarization::kL;

bool has_duplicates(std::span<const ModeLabel> modes) {
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (std::size_t j = i + 1; j < modes.size(); ++j) {
      if (modes[i] == modes[j]) return true;
    }
  }
  return false;
}

void require_spin(const StateLayout& layout, int spin) {
  if (spin < 0 || spin >= layout.n_spins()) {
    throw ParameterError(fmt::format("spin index {} outside 0..{}", spin, layout.n_spins() - 1));
  }
}

void require_ports(std::span<const ModeLabel> modes, std::size_t lo, std::size_t hi,
                   const char* what) {
  if (modes.size() < lo || modes.size() > hi) {
    throw WiringError(fmt::format("{} takes {}..{} ports, got {}", what, lo, hi, modes.size()));
  }
}

}  // namespace

namespace detail {

void require_empty_targets(const HybridState& state, std::span<const ModeLabel> in_modes,
                           std::span<const ModeLabel> out_modes) {
  if (has_duplicates(in_modes)) throw WiringError("repeated input port");
  if (has_duplicates(out_modes)) throw WiringError("repeated output port");
  for (auto out : out_modes) {
    if (std::find(in_modes.begin(), in_modes.end(), out) != in_modes.end()) continue;
    if (state.mode_occupation(out) > kProbabilityFloor) {
      throw WiringError(fmt::format("output mode {} is already occupied", out));
    }
  }
}

HybridState route(const HybridState& state, std::span<const ModeLabel> in_modes,
                  std::span<const ModeLabel> out_modes, std::span<const Transfer> transfers) {
  const auto& layout = state.layout();
  std::vector<std::size_t> in_idx;
  std::vector<std::size_t> out_idx;
  for (auto m : in_modes) in_idx.push_back(layout.mode_index(m));
  for (auto m : out_modes) out_idx.push_back(layout.mode_index(m));
  require_empty_targets(state, in_modes, out_modes);

  const auto spin_dim = static_cast<Eigen::Index>(layout.spin_dim());
  const auto& src = state.amplitudes();
  Eigen::VectorXcd amps = src;
  for (auto m : in_idx) {
    for (auto pol : {R, L}) {
      amps.segment(static_cast<Eigen::Index>(layout.index(pol, m, 0)), spin_dim).setZero();
    }
  }
  for (const auto& t : transfers) {
    const auto from = static_cast<Eigen::Index>(layout.index(t.in_pol, in_idx.at(t.in_port), 0));
    const auto to = static_cast<Eigen::Index>(layout.index(t.out_pol, out_idx.at(t.out_port), 0));
    amps.segment(to, spin_dim) += t.coefficient * src.segment(from, spin_dim);
  }
  return HybridState(layout, std::move(amps));
}

}  // namespace detail

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::kPbsRL: return "pbs";
    case ElementKind::kPbsFS: return "pbsfs";
    case ElementKind::kHwp: return "hwp";
    case ElementKind::kBeamSplitter: return "bs";
    case ElementKind::kNvScatter: return "nv";
    case ElementKind::kSpinHadamard: return "spinh";
    case ElementKind::kSpinPauli: return "pauli";
  }
  return "?";
}

std::string_view to_string(PauliOp op) {
  switch (op) {
    case PauliOp::kI: return "I";
    case PauliOp::kZ: return "Z";
    case PauliOp::kMinusZ: return "-Z";
  }
  return "?";
}

Element Element::pbs_rl(std::vector<ModeLabel> in, std::vector<ModeLabel> out) {
  return Element{ElementKind::kPbsRL, std::move(in), std::move(out), std::nullopt, std::nullopt};
}

Element Element::pbs_fs(ModeLabel in, ModeLabel out_f, ModeLabel out_s) {
  return Element{ElementKind::kPbsFS, {in}, {out_f, out_s}, std::nullopt, std::nullopt};
}

Element Element::hwp(ModeLabel in, ModeLabel out) {
  return Element{ElementKind::kHwp, {in}, {out}, std::nullopt, std::nullopt};
}

Element Element::beam_splitter(std::vector<ModeLabel> in, std::vector<ModeLabel> out) {
  return Element{ElementKind::kBeamSplitter, std::move(in), std::move(out), std::nullopt,
                 std::nullopt};
}

Element Element::nv_scatter(ModeLabel in, ModeLabel out, int spin) {
  return Element{ElementKind::kNvScatter, {in}, {out}, spin, std::nullopt};
}

Element Element::spin_hadamard(int spin) {
  return Element{ElementKind::kSpinHadamard, {}, {}, spin, std::nullopt};
}

Element Element::spin_pauli(int spin, PauliOp op) {
  return Element{ElementKind::kSpinPauli, {}, {}, spin, op};
}

void check_arity(const Element& e) {
  const auto kind = to_string(e.kind);
  auto ports = [&](std::size_t in_lo, std::size_t in_hi, std::size_t out_n) {
    if (e.in_modes.size() < in_lo || e.in_modes.size() > in_hi || e.out_modes.size() != out_n) {
      throw WiringError(fmt::format("{} takes {}..{} inputs and {} outputs", kind, in_lo, in_hi,
                                    out_n));
    }
  };
  switch (e.kind) {
    case ElementKind::kPbsRL: ports(1, 2, 2); break;
    case ElementKind::kPbsFS: ports(1, 1, 2); break;
    case ElementKind::kHwp: ports(1, 1, 1); break;
    case ElementKind::kBeamSplitter: ports(2, 2, 2); break;
    case ElementKind::kNvScatter: ports(1, 1, 1); break;
    case ElementKind::kSpinHadamard:
    case ElementKind::kSpinPauli: ports(0, 0, 0); break;
  }
  const bool needs_spin = e.kind == ElementKind::kNvScatter ||
                          e.kind == ElementKind::kSpinHadamard ||
                          e.kind == ElementKind::kSpinPauli;
  if (needs_spin != e.spin.has_value()) {
    throw WiringError(fmt::format("{} {} a spin target", kind, needs_spin ? "needs" : "takes no"));
  }
  if ((e.kind == ElementKind::kSpinPauli) != e.pauli.has_value()) {
    throw WiringError(fmt::format("{} has an inconsistent Pauli operator", kind));
  }
}

HybridState apply_pbs_rl(const HybridState& state, std::span<const ModeLabel> in_modes,
                         std::span<const ModeLabel> out_modes) {
  require_ports(in_modes, 1, 2, "pbs inputs");
  require_ports(out_modes, 2, 2, "pbs outputs");
  std::vector<detail::Transfer> t;
  for (std::size_t k = 0; k < in_modes.size(); ++k) {
    t.push_back({k, R, k, R, 1.0});
    t.push_back({k, L, 1 - k, L, 1.0});
  }
  return detail::route(state, in_modes, out_modes, t);
}

HybridState apply_pbs_fs(const HybridState& state, ModeLabel in_mode, ModeLabel out_f,
                         ModeLabel out_s) {
  const std::array<ModeLabel, 1> in{in_mode};
  const std::array<ModeLabel, 2> out{out_f, out_s};
  // F = (R+L)/sqrt2 keeps its polarization on port 0; S = (R-L)/sqrt2 on port 1.
  const std::array<detail::Transfer, 8> t{{
      {0, R, 0, R, 0.5}, {0, R, 0, L, 0.5}, {0, L, 0, R, 0.5}, {0, L, 0, L, 0.5},
      {0, R, 1, R, 0.5}, {0, R, 1, L, -0.5}, {0, L, 1, R, -0.5}, {0, L, 1, L, 0.5},
  }};
  return detail::route(state, in, out, t);
}

HybridState apply_hwp(const HybridState& state, ModeLabel in_mode, ModeLabel out_mode) {
  const std::array<ModeLabel, 1> in{in_mode};
  const std::array<ModeLabel, 1> out{out_mode};
  const std::array<detail::Transfer, 4> t{{
      {0, R, 0, R, kInvSqrt2},
      {0, R, 0, L, kInvSqrt2},
      {0, L, 0, R, kInvSqrt2},
      {0, L, 0, L, -kInvSqrt2},
  }};
  return detail::route(state, in, out, t);
}

HybridState apply_hwp(const HybridState& state, ModeLabel mode) {
  return apply_hwp(state, mode, mode);
}

HybridState apply_bs(const HybridState& state, std::span<const ModeLabel> in_modes,
                     std::span<const ModeLabel> out_modes) {
  require_ports(in_modes, 2, 2, "bs inputs");
  require_ports(out_modes, 2, 2, "bs outputs");
  std::vector<detail::Transfer> t;
  for (auto pol : {R, L}) {
    t.push_back({1, pol, 0, pol, kInvSqrt2});
    t.push_back({1, pol, 1, pol, kInvSqrt2});
    t.push_back({0, pol, 0, pol, kInvSqrt2});
    t.push_back({0, pol, 1, pol, -kInvSqrt2});
  }
  return detail::route(state, in_modes, out_modes, t);
}

HybridState apply_spin_hadamard(const HybridState& state, int spin) {
  const auto& layout = state.layout();
  require_spin(layout, spin);
  const auto mask = SpinConfig::bit_mask(layout.n_spins(), spin);
  const auto& src = state.amplitudes();
  Eigen::VectorXcd amps(src.size());
  const auto spin_dim = static_cast<Eigen::Index>(layout.spin_dim());
  for (Eigen::Index block = 0; block < src.size(); block += spin_dim) {
    for (std::uint32_t c = 0; c < layout.spin_dim(); ++c) {
      if (c & mask) continue;
      const Complex plus = src[block + c];
      const Complex minus = src[block + (c | mask)];
      amps[block + c] = kInvSqrt2 * (plus + minus);
      amps[block + (c | mask)] = kInvSqrt2 * (plus - minus);
    }
  }
  return HybridState(layout, std::move(amps));
}

namespace {

// Multiplies amplitudes by the diagonal of the Pauli operator on one spin.
void pauli_in_place(Eigen::VectorXcd& amps, std::size_t spin_dim, std::uint32_t mask, PauliOp op) {
  if (op == PauliOp::kI) return;
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    const bool minus = (static_cast<std::uint32_t>(i % static_cast<Eigen::Index>(spin_dim)) & mask) != 0;
    // Z: |+> -> |+>, |-> -> -|->;  -Z: |+> -> -|+>, |-> -> |->.
    const bool negate = (op == PauliOp::kZ) ? minus : !minus;
    if (negate) amps[i] = -amps[i];
  }
}

}  // namespace

HybridState apply_spin_pauli(const HybridState& state, int spin, PauliOp op) {
  const auto& layout = state.layout();
  require_spin(layout, spin);
  Eigen::VectorXcd amps = state.amplitudes();
  pauli_in_place(amps, layout.spin_dim(), SpinConfig::bit_mask(layout.n_spins(), spin), op);
  return HybridState(layout, std::move(amps));
}

SpinState apply_spin_pauli(const SpinState& state, int spin, PauliOp op) {
  if (spin < 0 || spin >= state.n_spins()) {
    throw ParameterError(fmt::format("spin index {} outside 0..{}", spin, state.n_spins() - 1));
  }
  Eigen::VectorXcd amps = state.amplitudes();
  pauli_in_place(amps, std::size_t{1} << state.n_spins(),
                 SpinConfig::bit_mask(state.n_spins(), spin), op);
  return SpinState(state.n_spins(), std::move(amps));
}

HybridState apply_element(const HybridState& state, const Element& e, const ReflectionPair& r) {
  check_arity(e);
  switch (e.kind) {
    case ElementKind::kPbsRL: return apply_pbs_rl(state, e.in_modes, e.out_modes);
    case ElementKind::kPbsFS:
      return apply_pbs_fs(state, e.in_modes[0], e.out_modes[0], e.out_modes[1]);
    case ElementKind::kHwp: return apply_hwp(state, e.in_modes[0], e.out_modes[0]);
    case ElementKind::kBeamSplitter: return apply_bs(state, e.in_modes, e.out_modes);
    case ElementKind::kNvScatter:
      return scatter(state, *e.spin, e.in_modes[0], e.out_modes[0], r);
    case ElementKind::kSpinHadamard: return apply_spin_hadamard(state, *e.spin);
    case ElementKind::kSpinPauli: return apply_spin_pauli(state, *e.spin, *e.pauli);
  }
  throw WiringError("unknown element kind");
}

}  // namespace nvgates
