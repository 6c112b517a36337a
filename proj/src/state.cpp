#include "nvgates/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "nvgates/errors.hpp"

namespace nvgates {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

SpinConfig::SpinConfig(int n_spins, std::uint32_t bits) : n_spins_(n_spins), bits_(bits) {
  if (n_spins < 1 || n_spins > 16) {
    throw ParameterError(fmt::format("spin count {} outside 1..16", n_spins));
  }
  if (bits >= (1u << n_spins)) {
    throw ParameterError(fmt::format("spin configuration {} out of range", bits));
  }
}

Spin SpinConfig::at(int spin) const {
  return (bits_ & bit_mask(n_spins_, spin)) ? Spin::kMinus : Spin::kPlus;
}

SpinConfig SpinConfig::with(int spin, Spin value) const {
  const auto mask = bit_mask(n_spins_, spin);
  return SpinConfig(n_spins_, value == Spin::kMinus ? (bits_ | mask) : (bits_ & ~mask));
}

SpinConfig SpinConfig::flipped(int spin) const {
  return SpinConfig(n_spins_, bits_ ^ bit_mask(n_spins_, spin));
}

std::string SpinConfig::ket() const {
  std::string out = "|";
  for (int k = 0; k < n_spins_; ++k) out += at(k) == Spin::kPlus ? '+' : '-';
  out += '>';
  return out;
}

StateLayout::StateLayout(int n_spins, std::vector<ModeLabel> modes)
    : n_spins_(n_spins), modes_(std::move(modes)) {
  if (n_spins < 1 || n_spins > 10) {
    throw ParameterError(fmt::format("spin count {} outside 1..10", n_spins));
  }
  if (modes_.empty()) throw ParameterError("state layout needs at least one mode");
  auto sorted = modes_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ParameterError("duplicate mode label in state layout");
  }
}

bool StateLayout::has_mode(ModeLabel mode) const {
  return std::find(modes_.begin(), modes_.end(), mode) != modes_.end();
}

std::size_t StateLayout::mode_index(ModeLabel mode) const {
  auto it = std::find(modes_.begin(), modes_.end(), mode);
  if (it == modes_.end()) throw ModeError(fmt::format("unknown mode {}", mode));
  return static_cast<std::size_t>(it - modes_.begin());
}

HybridState::HybridState(StateLayout layout, Eigen::VectorXcd amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != layout_.dim()) {
    throw DimensionError(fmt::format("amplitude vector has {} entries, layout needs {}",
                                     amplitudes_.size(), layout_.dim()));
  }
}

HybridState HybridState::zero(StateLayout layout) {
  const auto dim = static_cast<Eigen::Index>(layout.dim());
  return HybridState(std::move(layout), Eigen::VectorXcd::Zero(dim));
}

Complex HybridState::amplitude(Polarization pol, ModeLabel mode, std::uint32_t config) const {
  return amplitudes_[static_cast<Eigen::Index>(
      layout_.index(pol, layout_.mode_index(mode), config))];
}

double HybridState::mode_occupation(ModeLabel mode) const {
  const auto m = layout_.mode_index(mode);
  double total = 0.0;
  for (auto pol : {Polarization::kR, Polarization::kL}) {
    const auto base = static_cast<Eigen::Index>(layout_.index(pol, m, 0));
    total += amplitudes_.segment(base, static_cast<Eigen::Index>(layout_.spin_dim())).squaredNorm();
  }
  return total;
}

SpinState::SpinState(int n_spins, Eigen::VectorXcd amplitudes)
    : n_spins_(n_spins), amplitudes_(std::move(amplitudes)) {
  if (n_spins < 1 || n_spins > 16) {
    throw ParameterError(fmt::format("spin count {} outside 1..16", n_spins));
  }
  if (amplitudes_.size() != (Eigen::Index{1} << n_spins)) {
    throw DimensionError(fmt::format("spin state of {} spins needs {} amplitudes, got {}",
                                     n_spins, 1 << n_spins, amplitudes_.size()));
  }
}

SpinState SpinState::product(std::span<const AmplitudePair> spins) {
  const int n = static_cast<int>(spins.size());
  Eigen::VectorXcd amps(Eigen::Index{1} << n);
  for (Eigen::Index c = 0; c < amps.size(); ++c) {
    Complex a{1.0, 0.0};
    for (int k = 0; k < n; ++k) {
      const bool minus = (static_cast<std::uint32_t>(c) & SpinConfig::bit_mask(n, k)) != 0;
      a *= spins[static_cast<std::size_t>(k)][minus ? 1 : 0];
    }
    amps[c] = a;
  }
  return SpinState(n, std::move(amps));
}

SpinState SpinState::basis(int n_spins, std::uint32_t config) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_spins);
  amps[config] = 1.0;
  return SpinState(n_spins, std::move(amps));
}

SpinState SpinState::normalized() const {
  const double n2 = norm_squared();
  if (n2 <= kProbabilityFloor) return SpinState(n_spins_, Eigen::VectorXcd::Zero(amplitudes_.size()));
  return SpinState(n_spins_, amplitudes_ / std::sqrt(n2));
}

std::string SpinState::to_string(double threshold) const {
  std::ostringstream out;
  bool first = true;
  for (Eigen::Index c = 0; c < amplitudes_.size(); ++c) {
    const Complex a = amplitudes_[c];
    if (std::abs(a) <= threshold) continue;
    if (!first) out << " + ";
    first = false;
    if (std::abs(a.imag()) <= threshold) {
      out << fmt::format("{:.6g}", a.real());
    } else {
      out << fmt::format("({:.6g}{:+.6g}i)", a.real(), a.imag());
    }
    out << SpinConfig(n_spins_, static_cast<std::uint32_t>(c)).ket();
  }
  if (first) out << "0";
  return out.str();
}

void require_normalized(const AmplitudePair& pair, const char* what) {
  const double n2 = std::norm(pair[0]) + std::norm(pair[1]);
  if (std::abs(n2 - 1.0) > kNormalizationTolerance) {
    throw NormalizationError(fmt::format("{} amplitudes have squared norm {:.15g}, expected 1",
                                         what, n2));
  }
}

HybridState make_product_state(const StateLayout& layout, const AmplitudePair& photon,
                               ModeLabel photon_mode, std::span<const AmplitudePair> spins) {
  require_normalized(photon, "photon");
  for (const auto& s : spins) require_normalized(s, "spin");
  if (static_cast<int>(spins.size()) != layout.n_spins()) {
    throw DimensionError(fmt::format("layout has {} spins, {} amplitude pairs given",
                                     layout.n_spins(), spins.size()));
  }
  const auto m = layout.mode_index(photon_mode);
  const SpinState spin_part = SpinState::product(spins);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dim()));
  const auto spin_dim = static_cast<Eigen::Index>(layout.spin_dim());
  amps.segment(static_cast<Eigen::Index>(layout.index(Polarization::kR, m, 0)), spin_dim) =
      photon[0] * spin_part.amplitudes();
  amps.segment(static_cast<Eigen::Index>(layout.index(Polarization::kL, m, 0)), spin_dim) =
      photon[1] * spin_part.amplitudes();
  return HybridState(layout, std::move(amps));
}

Complex overlap(const HybridState& a, const HybridState& b) {
  if (a.layout() != b.layout()) throw DimensionError("overlap of states with different layouts");
  return a.amplitudes().dot(b.amplitudes());
}

Complex overlap(const SpinState& a, const SpinState& b) {
  if (a.n_spins() != b.n_spins()) throw DimensionError("overlap of spin states of different size");
  return a.amplitudes().dot(b.amplitudes());
}

SpinState project_photon(const HybridState& state, FsOutcome outcome, ModeLabel mode) {
  const auto& layout = state.layout();
  const auto m = layout.mode_index(mode);
  const auto spin_dim = static_cast<Eigen::Index>(layout.spin_dim());
  const auto r = state.amplitudes().segment(
      static_cast<Eigen::Index>(layout.index(Polarization::kR, m, 0)), spin_dim);
  const auto l = state.amplitudes().segment(
      static_cast<Eigen::Index>(layout.index(Polarization::kL, m, 0)), spin_dim);
  Eigen::VectorXcd projected =
      outcome == FsOutcome::kF ? Eigen::VectorXcd((r + l) * kInvSqrt2)
                               : Eigen::VectorXcd((r - l) * kInvSqrt2);
  return SpinState(layout.n_spins(), std::move(projected));
}

Collapse partial_trace_photon_collapse(const HybridState& state, FsOutcome outcome,
                                       ModeLabel mode) {
  SpinState branch = project_photon(state, outcome, mode);
  const double p = branch.norm_squared();
  if (p <= kProbabilityFloor) {
    return Collapse{0.0, SpinState(branch.n_spins(), Eigen::VectorXcd::Zero(branch.amplitudes().size())),
                    true};
  }
  return Collapse{p, branch.normalized(), false};
}

}  // namespace nvgates
