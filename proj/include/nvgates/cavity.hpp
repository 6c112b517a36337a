#pragma once

#include "nvgates/state.hpp"

namespace nvgates {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// One NV-cavity block. Rates and detunings share one (arbitrary) frequency
/// unit; only ratios enter the reflection coefficient. Detunings are stored
/// relative to the photon frequency.
struct CavityParams {
  double coupling = 0.0;         // g
  double kappa = 1.0;            // cavity damping rate
  double gamma = 1.0;            // NV decay rate
  double cavity_detuning = 0.0;  // omega_c - omega_p
  double nv_detuning = 0.0;      // omega_0 - omega_p

  static CavityParams resonant(double coupling, double kappa, double gamma);
  static CavityParams from_frequencies(double coupling, double kappa, double gamma,
                                       double omega_c, double omega_0, double omega_p);

  // Throws ParameterError unless g >= 0, kappa > 0, gamma > 0 (all finite).
  void validate() const;
};

/// Reflection amplitudes for the coupled (hot) and empty (cold) cavity.
struct ReflectionPair {
  Complex hot;
  Complex cold;

  // Strong-coupling idealization: r = 1, r0 = -1.
  static ReflectionPair ideal() { return {Complex{1.0, 0.0}, Complex{-1.0, 0.0}}; }
  // Resonant pair with a real hot-cavity amplitude and r0 = -1.
  static ReflectionPair resonant(double r_hot) { return {Complex{r_hot, 0.0}, Complex{-1.0, 0.0}}; }

  bool operator==(const ReflectionPair&) const = default;
};

/// Steady-state reflection coefficient of a single-sided cavity with an NV
/// in the weak-excitation limit:
///
///   r = ([i dc - k/2][i d0 + y/2] + g^2) / ([i dc + k/2][i d0 + y/2] + g^2)
///
/// with dc = omega_c - omega_p, d0 = omega_0 - omega_p. `cold` is the same
/// expression at g = 0, which is exactly -1 on resonance.
ReflectionPair reflection_coefficient(const CavityParams& params);

/// Resonant reflection pair as a function of g / sqrt(kappa gamma):
/// r = (x^2 - 1/4) / (x^2 + 1/4), r0 = -1.
ReflectionPair resonant_reflection(double coupling_ratio);

/// Inverse of the resonant map for r in [0, 1); returns +inf at r = 1.
double coupling_ratio_for_reflection(double r_hot);

enum class LinewidthConvention {
  // kappa = c / (lambda Q), read as an ordinary frequency (Hz).
  kOrdinary,
  // c / (lambda Q) read as an angular rate; returns kappa / 2pi in Hz.
  kAngular,
};

/// Cavity damping from its quality factor, Q = c / (lambda kappa). The two
/// conventions differ by 2pi: Q = 1e5 at 637 nm gives 4.71 GHz (ordinary) or
/// 0.749 GHz (angular).
double kappa_from_quality_factor(double quality_factor, double wavelength_m,
                                 LinewidthConvention convention = LinewidthConvention::kOrdinary);

/// Photon-spin scattering on NV `spin` for the photon in `in_mode`, leaving it
/// in `out_mode`. (R,+) and (L,-) pick up r_hot; (R,-) and (L,+) pick up
/// r_cold. Amplitudes in other modes are untouched.
HybridState scatter(const HybridState& state, int spin, ModeLabel in_mode, ModeLabel out_mode,
                    const ReflectionPair& r);
HybridState scatter(const HybridState& state, int spin, ModeLabel mode, const ReflectionPair& r);

}  // namespace nvgates
