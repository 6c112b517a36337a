#pragma once

#include <span>
#include <vector>

#include "nvgates/state.hpp"

namespace nvgates::detail {

// One term of a passive photon map: input port/polarization goes to output
// port/polarization with the given amplitude.
struct Transfer {
  std::size_t in_port;
  Polarization in_pol;
  std::size_t out_port;
  Polarization out_pol;
  Complex coefficient;
};

// Throws WiringError for repeated ports, or for an output port (not also an
// input port) that already carries amplitude.
void require_empty_targets(const HybridState& state, std::span<const ModeLabel> in_modes,
                           std::span<const ModeLabel> out_modes);

// Applies a linear map acting only on the listed input modes. Input-mode
// amplitudes are removed and redistributed per `transfers`; every other mode
// is copied through.
HybridState route(const HybridState& state, std::span<const ModeLabel> in_modes,
                  std::span<const ModeLabel> out_modes, std::span<const Transfer> transfers);

}  // namespace nvgates::detail
