#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nvgates/elements.hpp"
#include "nvgates/state.hpp"

namespace nvgates {

/// A detector click: F or S on a given mode ("F12", "S9").
struct Outcome {
  FsOutcome result = FsOutcome::kF;
  ModeLabel mode = 0;

  std::string label() const;
  static std::optional<Outcome> parse(std::string_view text);

  auto operator<=>(const Outcome&) const = default;
};

struct SpinCorrection {
  int spin = 0;  // 0-based
  PauliOp op = PauliOp::kI;

  bool operator==(const SpinCorrection&) const = default;
};

/// Outcome-conditioned single-spin corrections applied after detection.
struct FeedforwardTable {
  std::map<Outcome, std::vector<SpinCorrection>> rules;

  bool covers(const Outcome& outcome) const { return rules.contains(outcome); }
  // Outcomes without a rule are left untouched.
  SpinState apply(const Outcome& outcome, const SpinState& spins) const;

  bool operator==(const FeedforwardTable&) const = default;
};

}  // namespace nvgates
