#include "nvgates/cavity.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "nvgates/errors.hpp"
#include "routing.hpp"

namespace nvgates {

CavityParams CavityParams::resonant(double coupling, double kappa, double gamma) {
  return CavityParams{coupling, kappa, gamma, 0.0, 0.0};
}

CavityParams CavityParams::from_frequencies(double coupling, double kappa, double gamma,
                                            double omega_c, double omega_0, double omega_p) {
  return CavityParams{coupling, kappa, gamma, omega_c - omega_p, omega_0 - omega_p};
}

void CavityParams::validate() const {
  const bool finite = std::isfinite(coupling) && std::isfinite(kappa) && std::isfinite(gamma) &&
                      std::isfinite(cavity_detuning) && std::isfinite(nv_detuning);
  if (!finite) throw ParameterError("cavity parameters must be finite");
  if (coupling < 0.0) throw ParameterError(fmt::format("coupling g = {} must be >= 0", coupling));
  if (kappa <= 0.0) throw ParameterError(fmt::format("kappa = {} must be > 0", kappa));
  if (gamma <= 0.0) throw ParameterError(fmt::format("gamma = {} must be > 0", gamma));
}

namespace {

Complex reflection(const CavityParams& p, double g) {
  const Complex i{0.0, 1.0};
  const Complex nv = i * p.nv_detuning + p.gamma / 2.0;
  const Complex num = (i * p.cavity_detuning - p.kappa / 2.0) * nv + g * g;
  const Complex den = (i * p.cavity_detuning + p.kappa / 2.0) * nv + g * g;
  // num * conj(den) / |den|^2 keeps purely real inputs purely real.
  return num * std::conj(den) / std::norm(den);
}

}  // namespace

ReflectionPair reflection_coefficient(const CavityParams& params) {
  params.validate();
  return ReflectionPair{reflection(params, params.coupling), reflection(params, 0.0)};
}

ReflectionPair resonant_reflection(double coupling_ratio) {
  if (!(coupling_ratio >= 0.0) || !std::isfinite(coupling_ratio)) {
    throw ParameterError(fmt::format("coupling ratio {} must be finite and >= 0", coupling_ratio));
  }
  return reflection_coefficient(CavityParams::resonant(coupling_ratio, 1.0, 1.0));
}

double coupling_ratio_for_reflection(double r_hot) {
  if (!(r_hot >= 0.0 && r_hot <= 1.0)) {
    throw ParameterError(fmt::format("reflection {} outside [0, 1]", r_hot));
  }
  if (r_hot == 1.0) return std::numeric_limits<double>::infinity();
  return 0.5 * std::sqrt((1.0 + r_hot) / (1.0 - r_hot));
}

double kappa_from_quality_factor(double quality_factor, double wavelength_m,
                                 LinewidthConvention convention) {
  if (!(quality_factor > 0.0) || !(wavelength_m > 0.0) || !std::isfinite(quality_factor) ||
      !std::isfinite(wavelength_m)) {
    throw ParameterError("quality factor and wavelength must be positive");
  }
  const double rate = kSpeedOfLight / (wavelength_m * quality_factor);
  return convention == LinewidthConvention::kOrdinary ? rate : rate / (2.0 * std::numbers::pi);
}

HybridState scatter(const HybridState& state, int spin, ModeLabel in_mode, ModeLabel out_mode,
                    const ReflectionPair& r) {
  const auto& layout = state.layout();
  if (spin < 0 || spin >= layout.n_spins()) {
    throw ParameterError(fmt::format("spin index {} outside 0..{}", spin, layout.n_spins() - 1));
  }
  const auto in = layout.mode_index(in_mode);
  const auto out = layout.mode_index(out_mode);
  detail::require_empty_targets(state, std::span<const ModeLabel>(&in_mode, 1),
                                std::span<const ModeLabel>(&out_mode, 1));

  Eigen::VectorXcd amps = state.amplitudes();
  const auto n = layout.n_spins();
  for (auto pol : {Polarization::kR, Polarization::kL}) {
    for (std::uint32_t c = 0; c < layout.spin_dim(); ++c) {
      const bool minus = (c & SpinConfig::bit_mask(n, spin)) != 0;
      const bool hot = (pol == Polarization::kR) != minus;  // (R,+) or (L,-)
      const auto src = static_cast<Eigen::Index>(layout.index(pol, in, c));
      const auto dst = static_cast<Eigen::Index>(layout.index(pol, out, c));
      const Complex a = amps[src];
      amps[src] = 0.0;
      amps[dst] = a * (hot ? r.hot : r.cold);
    }
  }
  return HybridState(layout, std::move(amps));
}

HybridState scatter(const HybridState& state, int spin, ModeLabel mode, const ReflectionPair& r) {
  return scatter(state, spin, mode, mode, r);
}

}  // namespace nvgates
