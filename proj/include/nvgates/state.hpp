#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nvgates {

using Complex = std::complex<double>;

enum class Polarization : std::uint8_t { kR = 0, kL = 1 };

// Electron-spin qubit levels: kPlus is |m_s=+1>, kMinus is |m_s=-1>.
enum class Spin : std::uint8_t { kPlus = 0, kMinus = 1 };

// Photon detection basis outcome: |F> = (|R>+|L>)/sqrt2, |S> = (|R>-|L>)/sqrt2.
enum class FsOutcome : std::uint8_t { kF = 0, kS = 1 };

// Spatial-mode labels follow the wire numbering of the circuit drawings.
using ModeLabel = int;

// (first, second) amplitudes of a two-level system: (R, L) for the photon,
// (+, -) for a spin.
using AmplitudePair = std::array<Complex, 2>;

inline constexpr double kNormalizationTolerance = 1e-12;

/// Configuration of N spins packed into an integer. Spin 0 occupies the most
/// significant bit so that integer order matches kets read left to right
/// (|++>, |+->, |-+>, |-->).
class SpinConfig {
 public:
  SpinConfig(int n_spins, std::uint32_t bits);

  int size() const { return n_spins_; }
  std::uint32_t bits() const { return bits_; }
  Spin at(int spin) const;
  SpinConfig with(int spin, Spin value) const;
  SpinConfig flipped(int spin) const;
  std::string ket() const;

  static std::uint32_t bit_mask(int n_spins, int spin) {
    return 1u << (n_spins - 1 - spin);
  }

  bool operator==(const SpinConfig&) const = default;

 private:
  int n_spins_;
  std::uint32_t bits_;
};

/// Shape of a hybrid photon-spin state: the declared mode labels and the
/// number of spins. Amplitude index = ((pol * M + mode_index) << N) | config.
class StateLayout {
 public:
  StateLayout(int n_spins, std::vector<ModeLabel> modes);

  int n_spins() const { return n_spins_; }
  std::size_t n_modes() const { return modes_.size(); }
  std::span<const ModeLabel> modes() const { return modes_; }
  std::size_t spin_dim() const { return std::size_t{1} << n_spins_; }
  std::size_t dim() const { return 2 * modes_.size() * spin_dim(); }

  bool has_mode(ModeLabel mode) const;
  // Throws ModeError for undeclared labels.
  std::size_t mode_index(ModeLabel mode) const;

  std::size_t index(Polarization pol, std::size_t mode_index, std::uint32_t config) const {
    return ((static_cast<std::size_t>(pol) * modes_.size() + mode_index) << n_spins_) | config;
  }

  bool operator==(const StateLayout&) const = default;

 private:
  int n_spins_;
  std::vector<ModeLabel> modes_;
};

/// Subnormalized amplitude vector over (polarization x mode x spin configs).
/// The missing norm 1 - |psi|^2 is the probability that the photon was lost.
class HybridState {
 public:
  HybridState(StateLayout layout, Eigen::VectorXcd amplitudes);

  static HybridState zero(StateLayout layout);

  const StateLayout& layout() const { return layout_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }

  Complex amplitude(Polarization pol, ModeLabel mode, std::uint32_t config) const;
  double norm_squared() const { return amplitudes_.squaredNorm(); }
  // Probability of finding the photon in the given mode.
  double mode_occupation(ModeLabel mode) const;

 private:
  StateLayout layout_;
  Eigen::VectorXcd amplitudes_;
};

/// Spin-only state over 2^N configurations (photon traced out or detected).
class SpinState {
 public:
  SpinState(int n_spins, Eigen::VectorXcd amplitudes);

  static SpinState product(std::span<const AmplitudePair> spins);
  static SpinState basis(int n_spins, std::uint32_t config);

  int n_spins() const { return n_spins_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::uint32_t config) const { return amplitudes_[config]; }
  double norm_squared() const { return amplitudes_.squaredNorm(); }
  SpinState normalized() const;
  std::string to_string(double threshold = 1e-12) const;

 private:
  int n_spins_;
  Eigen::VectorXcd amplitudes_;
};

// Throws NormalizationError unless |a|^2 + |b|^2 = 1 within 1e-12.
void require_normalized(const AmplitudePair& pair, const char* what);

/// |photon> (x) |spin_0> (x) ... with the photon in `photon_mode`.
HybridState make_product_state(const StateLayout& layout, const AmplitudePair& photon,
                               ModeLabel photon_mode, std::span<const AmplitudePair> spins);

// <a|b>, conjugate-linear in a.
Complex overlap(const HybridState& a, const HybridState& b);
Complex overlap(const SpinState& a, const SpinState& b);

/// Unnormalized spin state left after projecting the photon in `mode` onto
/// |F> or |S>. Its squared norm is the outcome probability.
SpinState project_photon(const HybridState& state, FsOutcome outcome, ModeLabel mode);

struct Collapse {
  double probability = 0.0;
  SpinState spins;   // renormalized; all zero when `empty`
  bool empty = true;
};

// Probabilities at or below this are treated as "photon never arrived".
inline constexpr double kProbabilityFloor = 1e-28;

Collapse partial_trace_photon_collapse(const HybridState& state, FsOutcome outcome,
                                       ModeLabel mode);

}  // namespace nvgates
