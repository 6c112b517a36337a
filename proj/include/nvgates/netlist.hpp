#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nvgates/cavity.hpp"
#include "nvgates/elements.hpp"
#include "nvgates/feedforward.hpp"
#include "nvgates/state.hpp"

namespace nvgates {

// Photon detector measuring its mode in the F/S basis.
struct Detector {
  ModeLabel mode = 0;

  bool operator==(const Detector&) const = default;
};

/// A mode-wired optical/spin circuit. Elements execute in order; a static
/// check guarantees no element reads a mode that only a later element writes.
struct Netlist {
  int n_spins = 0;
  std::vector<ModeLabel> modes;
  std::vector<Element> elements;
  std::vector<Detector> detectors;
  std::optional<FeedforwardTable> feedforward;

  StateLayout layout() const { return StateLayout(n_spins, modes); }
  // Detector outcomes in enumeration order: F then S for each detector.
  std::vector<Outcome> outcomes() const;
  // Modes no element produces as a fresh output; the photon enters here.
  std::vector<ModeLabel> source_modes() const;

  bool operator==(const Netlist&) const = default;
};

enum class DiagnosticKind {
  kSyntax,
  kUnknownDirective,
  kUndeclaredMode,
  kArityMismatch,
  kNonTopologicalOrder,
  kSpinOutOfRange,
  kWiring,
  kDuplicateDeclaration,
  kMissingDeclaration,
  kUnknownOutcome,
  kIncompleteFeedforward,
};

std::string_view to_string(DiagnosticKind kind);

/// Parse or validation failure. `line` and `column` are 1-based; 0 when the
/// netlist was built in code rather than parsed.
class NetlistError : public std::runtime_error {
 public:
  NetlistError(DiagnosticKind kind, int line, int column, const std::string& message);

  DiagnosticKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  DiagnosticKind kind_;
  int line_;
  int column_;
};

/// Parses the line-oriented `.nv` format:
///
///   spins N
///   modes m1 m2 ...
///   pbs in1 [in2] -> out1 out2
///   pbsfs in -> outF outS
///   hwp m            | hwp in -> out
///   bs in1 in2 -> out1 out2
///   nv m spin_k      | nv in -> out spin_k
///   spinh k
///   pauli k OP                      (OP is I, Z or -Z)
///   detect m
///   feedforward OUTCOME: spin_k OP ...   (OUTCOME is F<m> or S<m>)
///
/// `#` starts a comment. Spin labels are 1-based (spin_1 is the first NV).
Netlist parse_netlist(std::string_view text);
Netlist load_netlist(const std::filesystem::path& path);

// Canonical text form; parse_netlist(serialize_netlist(n)) == n.
std::string serialize_netlist(const Netlist& netlist);

// Static checks shared by the parser and in-code construction.
void validate_netlist(const Netlist& netlist);

/// Longest chain of NV interactions along any photon path.
int max_nv_interactions(const Netlist& netlist);

struct OutcomeResult {
  Outcome outcome;
  double probability = 0.0;
  SpinState branch;  // post-feedforward, unnormalized (norm^2 = probability)
  SpinState spins;   // post-feedforward, renormalized; zero when `empty`
  bool empty = true;
};

struct RunResult {
  HybridState pre_detection;
  double pre_detection_norm2 = 0.0;
  // Photon probability left in modes without a detector.
  double undetected_probability = 0.0;
  std::vector<OutcomeResult> outcomes;
};

// Applies all elements in order.
HybridState propagate(const Netlist& netlist, const HybridState& input,
                      const ReflectionPair& r = ReflectionPair::ideal());
// State after each element (size == elements.size()).
std::vector<HybridState> trace_netlist(const Netlist& netlist, const HybridState& input,
                                       const ReflectionPair& r = ReflectionPair::ideal());

// Enumerates detector outcomes of an already-propagated state and applies
// the feedforward table.
RunResult detect(const Netlist& netlist, const HybridState& pre_detection);

RunResult run_netlist(const Netlist& netlist, const HybridState& input,
                      const ReflectionPair& r = ReflectionPair::ideal());

}  // namespace nvgates
