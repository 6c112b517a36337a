#pragma once

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nvgates/state.hpp"

namespace nvgates::testing {

inline AmplitudePair random_pair(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Complex a{n(rng), n(rng)};
  Complex b{n(rng), n(rng)};
  const double norm = std::sqrt(std::norm(a) + std::norm(b));
  return {a / norm, b / norm};
}

inline std::vector<AmplitudePair> random_spins(std::mt19937_64& rng, int n) {
  std::vector<AmplitudePair> out;
  for (int k = 0; k < n; ++k) out.push_back(random_pair(rng));
  return out;
}

// Random subnormalized state with the given squared norm.
inline HybridState random_state(std::mt19937_64& rng, const StateLayout& layout, double norm2 = 1.0) {
  std::normal_distribution<double> n;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(layout.dim()));
  for (auto& a : v) a = Complex{n(rng), n(rng)};
  v *= std::sqrt(norm2) / v.norm();
  return HybridState(layout, std::move(v));
}

struct Term {
  Polarization pol;
  ModeLabel mode;
  std::uint32_t config;
  Complex amplitude;
};

// Sum of |pol>_mode |config> terms; repeated kets accumulate.
inline HybridState state_from_terms(const StateLayout& layout, std::span<const Term> terms) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dim()));
  for (const auto& t : terms) v[layout.index(t.pol, layout.mode_index(t.mode), t.config)] += t.amplitude;
  return HybridState(layout, std::move(v));
}

inline double max_abs_diff(const HybridState& a, const HybridState& b) {
  return (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Dense operators on (polarization x spins), polarization as the leading
// factor and spin 0 next. Independent of the mode-routing code.
namespace dense {

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Eigen::MatrixXcd identity(Eigen::Index n) { return Eigen::MatrixXcd::Identity(n, n); }

inline Eigen::MatrixXcd hadamard() {
  Eigen::MatrixXcd h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

// Operator `op` on factor `k` of `n` two-level factors.
inline Eigen::MatrixXcd on_factor(const Eigen::MatrixXcd& op, int k, int n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, i == k ? op : identity(2));
  return out;
}

}  // namespace dense

}  // namespace nvgates::testing
