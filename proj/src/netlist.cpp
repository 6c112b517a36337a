#include "nvgates/netlist.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

#include "nvgates/errors.hpp"
#include "netlist_validation.hpp"

namespace nvgates {

NetlistError::NetlistError(DiagnosticKind kind, int line, int column, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("line {}, column {}: {} ({})", line, column,
                                                message, to_string(kind))
                                  : fmt::format("{} ({})", message, to_string(kind))),
      kind_(kind),
      line_(line),
      column_(column) {}

std::string_view to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::kSyntax: return "syntax";
    case DiagnosticKind::kUnknownDirective: return "unknown-directive";
    case DiagnosticKind::kUndeclaredMode: return "undeclared-mode";
    case DiagnosticKind::kArityMismatch: return "arity-mismatch";
    case DiagnosticKind::kNonTopologicalOrder: return "non-topological-order";
    case DiagnosticKind::kSpinOutOfRange: return "spin-out-of-range";
    case DiagnosticKind::kWiring: return "wiring";
    case DiagnosticKind::kDuplicateDeclaration: return "duplicate-declaration";
    case DiagnosticKind::kMissingDeclaration: return "missing-declaration";
    case DiagnosticKind::kUnknownOutcome: return "unknown-outcome";
    case DiagnosticKind::kIncompleteFeedforward: return "incomplete-feedforward";
  }
  return "?";
}

std::vector<Outcome> Netlist::outcomes() const {
  std::vector<Outcome> out;
  for (const auto& d : detectors) {
    out.push_back({FsOutcome::kF, d.mode});
    out.push_back({FsOutcome::kS, d.mode});
  }
  return out;
}

namespace {

bool contains(const std::vector<ModeLabel>& v, ModeLabel m) {
  return std::find(v.begin(), v.end(), m) != v.end();
}

// Outputs an element creates rather than transforms in place.
std::vector<ModeLabel> fresh_outputs(const Element& e) {
  std::vector<ModeLabel> out;
  for (auto m : e.out_modes) {
    if (!contains(e.in_modes, m)) out.push_back(m);
  }
  return out;
}

}  // namespace

std::vector<ModeLabel> Netlist::source_modes() const {
  std::set<ModeLabel> produced;
  for (const auto& e : elements) {
    for (auto m : fresh_outputs(e)) produced.insert(m);
  }
  std::vector<ModeLabel> sources;
  for (auto m : modes) {
    if (!produced.contains(m)) sources.push_back(m);
  }
  return sources;
}

namespace detail {

void validate(const Netlist& net, const NetlistSource* src) {
  auto fail = [](DiagnosticKind kind, TokenPos pos, const std::string& msg) {
    throw NetlistError(kind, pos.line, pos.column, msg);
  };
  auto element_pos = [&](std::size_t i) {
    return src && i < src->elements.size() ? src->elements[i].directive : TokenPos{};
  };
  auto in_pos = [&](std::size_t i, std::size_t k) {
    if (src && i < src->elements.size() && k < src->elements[i].in_modes.size()) {
      return src->elements[i].in_modes[k];
    }
    return element_pos(i);
  };
  auto out_pos = [&](std::size_t i, std::size_t k) {
    if (src && i < src->elements.size() && k < src->elements[i].out_modes.size()) {
      return src->elements[i].out_modes[k];
    }
    return element_pos(i);
  };
  const TokenPos end_pos{src ? src->last_line : 0, 1};

  if (net.n_spins < 1 || net.n_spins > 10) {
    fail(DiagnosticKind::kMissingDeclaration, end_pos, "missing or invalid 'spins' declaration");
  }
  if (net.modes.empty()) {
    fail(DiagnosticKind::kMissingDeclaration, end_pos, "missing 'modes' declaration");
  }
  {
    std::set<ModeLabel> seen;
    for (std::size_t k = 0; k < net.modes.size(); ++k) {
      if (!seen.insert(net.modes[k]).second) {
        const TokenPos pos = src && k < src->modes.size() ? src->modes[k] : TokenPos{};
        fail(DiagnosticKind::kDuplicateDeclaration, pos,
             fmt::format("mode {} declared twice", net.modes[k]));
      }
    }
  }
  const std::set<ModeLabel> declared(net.modes.begin(), net.modes.end());

  for (std::size_t i = 0; i < net.elements.size(); ++i) {
    const auto& e = net.elements[i];
    try {
      check_arity(e);
    } catch (const WiringError& err) {
      fail(DiagnosticKind::kArityMismatch, element_pos(i), err.what());
    }
    for (std::size_t k = 0; k < e.in_modes.size(); ++k) {
      if (!declared.contains(e.in_modes[k])) {
        fail(DiagnosticKind::kUndeclaredMode, in_pos(i, k),
             fmt::format("mode {} is not declared", e.in_modes[k]));
      }
    }
    for (std::size_t k = 0; k < e.out_modes.size(); ++k) {
      if (!declared.contains(e.out_modes[k])) {
        fail(DiagnosticKind::kUndeclaredMode, out_pos(i, k),
             fmt::format("mode {} is not declared", e.out_modes[k]));
      }
    }
    if (e.spin && (*e.spin < 0 || *e.spin >= net.n_spins)) {
      const TokenPos pos = src && i < src->elements.size() ? src->elements[i].spin : TokenPos{};
      fail(DiagnosticKind::kSpinOutOfRange, pos,
           fmt::format("spin_{} outside spin_1..spin_{}", *e.spin + 1, net.n_spins));
    }
    for (std::size_t a = 0; a < e.in_modes.size(); ++a) {
      for (std::size_t b = a + 1; b < e.in_modes.size(); ++b) {
        if (e.in_modes[a] == e.in_modes[b]) {
          fail(DiagnosticKind::kWiring, in_pos(i, b),
               fmt::format("input mode {} used twice", e.in_modes[b]));
        }
      }
    }
    for (std::size_t a = 0; a < e.out_modes.size(); ++a) {
      for (std::size_t b = a + 1; b < e.out_modes.size(); ++b) {
        if (e.out_modes[a] == e.out_modes[b]) {
          fail(DiagnosticKind::kWiring, out_pos(i, b),
               fmt::format("output mode {} used twice", e.out_modes[b]));
        }
      }
    }
  }

  // Forward pass: a mode is defined once it is a source or has been written;
  // a mode is live while it may carry the photon.
  std::map<ModeLabel, std::size_t> first_writer;
  for (std::size_t i = 0; i < net.elements.size(); ++i) {
    for (auto m : fresh_outputs(net.elements[i])) first_writer.try_emplace(m, i);
  }
  std::set<ModeLabel> defined;
  for (auto m : net.modes) {
    if (!first_writer.contains(m)) defined.insert(m);
  }
  std::set<ModeLabel> live = defined;
  for (std::size_t i = 0; i < net.elements.size(); ++i) {
    const auto& e = net.elements[i];
    for (std::size_t k = 0; k < e.in_modes.size(); ++k) {
      const auto m = e.in_modes[k];
      if (!defined.contains(m)) {
        const auto writer = first_writer.at(m);
        const TokenPos wpos = element_pos(writer);
        fail(DiagnosticKind::kNonTopologicalOrder, in_pos(i, k),
             wpos.line > 0
                 ? fmt::format("mode {} is read before it is produced on line {}", m, wpos.line)
                 : fmt::format("mode {} is read before it is produced by element {}", m, writer));
      }
    }
    for (std::size_t k = 0; k < e.out_modes.size(); ++k) {
      const auto m = e.out_modes[k];
      if (!contains(e.in_modes, m) && live.contains(m)) {
        fail(DiagnosticKind::kWiring, out_pos(i, k),
             fmt::format("output mode {} would merge into a mode that may already carry the photon",
                         m));
      }
    }
    for (auto m : e.in_modes) live.erase(m);
    for (auto m : e.out_modes) {
      live.insert(m);
      defined.insert(m);
    }
  }

  std::set<ModeLabel> detector_modes;
  for (std::size_t k = 0; k < net.detectors.size(); ++k) {
    const auto m = net.detectors[k].mode;
    const TokenPos pos = src && k < src->detectors.size() ? src->detectors[k] : TokenPos{};
    if (!declared.contains(m)) {
      fail(DiagnosticKind::kUndeclaredMode, pos, fmt::format("mode {} is not declared", m));
    }
    if (!detector_modes.insert(m).second) {
      fail(DiagnosticKind::kDuplicateDeclaration, pos,
           fmt::format("detector on mode {} declared twice", m));
    }
  }

  if (net.feedforward) {
    TokenPos first_rule{};
    for (const auto& [outcome, fixes] : net.feedforward->rules) {
      TokenPos pos{};
      if (src) {
        auto it = src->feedforward.find(outcome);
        if (it != src->feedforward.end()) pos = it->second;
      }
      if (first_rule.line == 0 || (pos.line > 0 && pos.line < first_rule.line)) first_rule = pos;
      if (!detector_modes.contains(outcome.mode)) {
        fail(DiagnosticKind::kUnknownOutcome, pos,
             fmt::format("outcome {} refers to a mode without a detector", outcome.label()));
      }
      for (const auto& fix : fixes) {
        if (fix.spin < 0 || fix.spin >= net.n_spins) {
          fail(DiagnosticKind::kSpinOutOfRange, pos,
               fmt::format("spin_{} outside spin_1..spin_{}", fix.spin + 1, net.n_spins));
        }
      }
    }
    for (const auto& outcome : net.outcomes()) {
      if (!net.feedforward->covers(outcome)) {
        fail(DiagnosticKind::kIncompleteFeedforward, first_rule,
             fmt::format("feedforward table has no rule for outcome {}", outcome.label()));
      }
    }
  }
}

}  // namespace detail

void validate_netlist(const Netlist& netlist) { detail::validate(netlist, nullptr); }

int max_nv_interactions(const Netlist& net) {
  std::map<ModeLabel, int> depth;
  for (auto m : net.modes) depth[m] = 0;
  for (const auto& e : net.elements) {
    if (e.in_modes.empty()) continue;
    int d = 0;
    for (auto m : e.in_modes) d = std::max(d, depth[m]);
    if (e.kind == ElementKind::kNvScatter) ++d;
    for (auto m : e.out_modes) depth[m] = d;
  }
  int best = 0;
  if (net.detectors.empty()) {
    for (const auto& [m, d] : depth) best = std::max(best, d);
  } else {
    for (const auto& det : net.detectors) best = std::max(best, depth[det.mode]);
  }
  return best;
}

namespace {

std::string join_modes(const std::vector<ModeLabel>& modes) {
  return fmt::format("{}", fmt::join(modes, " "));
}

std::string element_line(const Element& e) {
  switch (e.kind) {
    case ElementKind::kPbsRL:
    case ElementKind::kBeamSplitter:
    case ElementKind::kPbsFS:
      return fmt::format("{} {} -> {}", to_string(e.kind), join_modes(e.in_modes),
                         join_modes(e.out_modes));
    case ElementKind::kHwp:
      if (e.in_modes == e.out_modes) return fmt::format("hwp {}", e.in_modes[0]);
      return fmt::format("hwp {} -> {}", e.in_modes[0], e.out_modes[0]);
    case ElementKind::kNvScatter:
      if (e.in_modes == e.out_modes) return fmt::format("nv {} spin_{}", e.in_modes[0], *e.spin + 1);
      return fmt::format("nv {} -> {} spin_{}", e.in_modes[0], e.out_modes[0], *e.spin + 1);
    case ElementKind::kSpinHadamard: return fmt::format("spinh {}", *e.spin + 1);
    case ElementKind::kSpinPauli:
      return fmt::format("pauli {} {}", *e.spin + 1, to_string(*e.pauli));
  }
  return {};
}

}  // namespace

std::string serialize_netlist(const Netlist& net) {
  std::string out;
  out += fmt::format("spins {}\n", net.n_spins);
  out += fmt::format("modes {}\n", join_modes(net.modes));
  for (const auto& e : net.elements) {
    out += element_line(e);
    out += '\n';
  }
  for (const auto& d : net.detectors) out += fmt::format("detect {}\n", d.mode);
  if (net.feedforward) {
    for (const auto& [outcome, fixes] : net.feedforward->rules) {
      out += fmt::format("feedforward {}:", outcome.label());
      for (const auto& fix : fixes) out += fmt::format(" spin_{} {}", fix.spin + 1, to_string(fix.op));
      out += '\n';
    }
  }
  return out;
}

HybridState propagate(const Netlist& net, const HybridState& input, const ReflectionPair& r) {
  if (input.layout() != net.layout()) {
    throw DimensionError("input state layout does not match the netlist");
  }
  HybridState state = input;
  for (const auto& e : net.elements) state = apply_element(state, e, r);
  return state;
}

std::vector<HybridState> trace_netlist(const Netlist& net, const HybridState& input,
                                       const ReflectionPair& r) {
  if (input.layout() != net.layout()) {
    throw DimensionError("input state layout does not match the netlist");
  }
  std::vector<HybridState> states;
  states.reserve(net.elements.size());
  HybridState state = input;
  for (const auto& e : net.elements) {
    state = apply_element(state, e, r);
    states.push_back(state);
  }
  return states;
}

RunResult detect(const Netlist& net, const HybridState& pre) {
  if (pre.layout() != net.layout()) {
    throw DimensionError("state layout does not match the netlist");
  }
  RunResult result{pre, pre.norm_squared(), 0.0, {}};
  double detected = 0.0;
  for (const auto& d : net.detectors) detected += pre.mode_occupation(d.mode);
  result.undetected_probability = std::max(0.0, result.pre_detection_norm2 - detected);

  for (const auto& outcome : net.outcomes()) {
    SpinState branch = project_photon(pre, outcome.result, outcome.mode);
    if (net.feedforward) branch = net.feedforward->apply(outcome, branch);
    const double p = branch.norm_squared();
    const bool empty = p <= kProbabilityFloor;
    SpinState spins = branch.normalized();
    result.outcomes.push_back(
        OutcomeResult{outcome, empty ? 0.0 : p, std::move(branch), std::move(spins), empty});
  }
  return result;
}

RunResult run_netlist(const Netlist& net, const HybridState& input, const ReflectionPair& r) {
  return detect(net, propagate(net, input, r));
}

}  // namespace nvgates
