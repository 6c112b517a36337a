#include "nvgates/feedforward.hpp"

#include <charconv>

#include <fmt/format.h>

namespace nvgates {

std::string Outcome::label() const {
  return fmt::format("{}{}", result == FsOutcome::kF ? 'F' : 'S', mode);
}

std::optional<Outcome> Outcome::parse(std::string_view text) {
  if (text.size() < 2) return std::nullopt;
  FsOutcome result;
  if (text[0] == 'F') {
    result = FsOutcome::kF;
  } else if (text[0] == 'S') {
    result = FsOutcome::kS;
  } else {
    return std::nullopt;
  }
  ModeLabel mode = 0;
  const auto* first = text.data() + 1;
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, mode);
  if (ec != std::errc{} || ptr != last || mode < 0) return std::nullopt;
  return Outcome{result, mode};
}

SpinState FeedforwardTable::apply(const Outcome& outcome, const SpinState& spins) const {
  auto it = rules.find(outcome);
  if (it == rules.end()) return spins;
  SpinState out = spins;
  for (const auto& fix : it->second) out = apply_spin_pauli(out, fix.spin, fix.op);
  return out;
}

}  // namespace nvgates
