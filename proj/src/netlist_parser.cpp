#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "nvgates/netlist.hpp"
#include "netlist_validation.hpp"

namespace nvgates {

namespace {

using detail::ElementSource;
using detail::NetlistSource;
using detail::TokenPos;

struct Token {
  std::string text;
  TokenPos pos;
};

[[noreturn]] void fail(DiagnosticKind kind, TokenPos pos, const std::string& msg) {
  throw NetlistError(kind, pos.line, pos.column, msg);
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f'; }

std::vector<Token> tokenize(std::string_view line, int line_no) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (static_cast<unsigned char>(c) >= 0x80) {
      fail(DiagnosticKind::kSyntax, {line_no, static_cast<int>(i) + 1},
           "non-ASCII character outside a comment");
    }
    const TokenPos pos{line_no, static_cast<int>(i) + 1};
    if (line.substr(i, 2) == "->") {
      tokens.push_back({"->", pos});
      i += 2;
      continue;
    }
    if (c == ':') {
      tokens.push_back({":", pos});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j]) && line[j] != '#' && line[j] != ':' &&
           line.substr(j, 2) != "->") {
      ++j;
    }
    tokens.push_back({std::string(line.substr(i, j - i)), pos});
    i = j;
  }
  return tokens;
}

std::optional<int> to_int(std::string_view s) {
  int value = 0;
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), last, value);
  if (s.empty() || ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

class Parser {
 public:
  Netlist run(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto end = text.find('\n', start);
      std::string_view line = text.substr(start, end == std::string_view::npos ? text.npos
                                                                                : end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no;
      auto tokens = tokenize(line, line_no);
      if (!tokens.empty()) handle(tokens);
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
    src_.last_line = line_no;
    if (!have_spins_) {
      fail(DiagnosticKind::kMissingDeclaration, {line_no, 1}, "missing 'spins' declaration");
    }
    if (!have_modes_) {
      fail(DiagnosticKind::kMissingDeclaration, {line_no, 1}, "missing 'modes' declaration");
    }
    detail::validate(net_, &src_);
    return std::move(net_);
  }

 private:
  void handle(const std::vector<Token>& t) {
    const auto& d = t[0].text;
    if (d == "spins") return parse_spins(t);
    if (d == "modes") return parse_modes(t);
    if (d == "detect") return parse_detect(t);
    if (d == "feedforward") return parse_feedforward(t);
    if (d == "pbs" || d == "pbsfs" || d == "hwp" || d == "bs" || d == "nv" || d == "spinh" ||
        d == "pauli") {
      require_header(t[0]);
      return parse_element(t);
    }
    fail(DiagnosticKind::kUnknownDirective, t[0].pos, fmt::format("unknown directive '{}'", d));
  }

  void require_header(const Token& at) {
    if (!have_spins_ || !have_modes_) {
      fail(DiagnosticKind::kMissingDeclaration, at.pos,
           fmt::format("'{}' before 'spins' and 'modes' are declared", at.text));
    }
  }

  int integer(const Token& t, std::string_view what) {
    auto v = to_int(t.text);
    if (!v) fail(DiagnosticKind::kSyntax, t.pos, fmt::format("expected {}, got '{}'", what, t.text));
    return *v;
  }

  ModeLabel mode(const Token& t) {
    const int m = integer(t, "a mode label");
    if (!declared_.contains(m)) {
      fail(DiagnosticKind::kUndeclaredMode, t.pos, fmt::format("mode {} is not declared", m));
    }
    return m;
  }

  int spin_index(const Token& t, bool require_prefix) {
    std::string_view s = t.text;
    const bool prefixed = s.starts_with("spin_");
    if (prefixed) s.remove_prefix(5);
    if (require_prefix && !prefixed) {
      fail(DiagnosticKind::kSyntax, t.pos, fmt::format("expected spin_k, got '{}'", t.text));
    }
    auto k = to_int(s);
    if (!k) fail(DiagnosticKind::kSyntax, t.pos, fmt::format("expected a spin label, got '{}'", t.text));
    if (*k < 1 || *k > net_.n_spins) {
      fail(DiagnosticKind::kSpinOutOfRange, t.pos,
           fmt::format("spin_{} outside spin_1..spin_{}", *k, net_.n_spins));
    }
    return *k - 1;
  }

  static PauliOp pauli_op(const Token& t) {
    if (t.text == "I") return PauliOp::kI;
    if (t.text == "Z") return PauliOp::kZ;
    if (t.text == "-Z") return PauliOp::kMinusZ;
    fail(DiagnosticKind::kSyntax, t.pos, fmt::format("expected I, Z or -Z, got '{}'", t.text));
  }

  void parse_spins(const std::vector<Token>& t) {
    if (have_spins_) fail(DiagnosticKind::kDuplicateDeclaration, t[0].pos, "'spins' declared twice");
    if (t.size() != 2) fail(DiagnosticKind::kArityMismatch, t[0].pos, "'spins' takes one count");
    const int n = integer(t[1], "a spin count");
    if (n < 1 || n > 10) fail(DiagnosticKind::kSyntax, t[1].pos, "spin count must be 1..10");
    net_.n_spins = n;
    src_.spins = t[0].pos;
    have_spins_ = true;
  }

  void parse_modes(const std::vector<Token>& t) {
    if (have_modes_) fail(DiagnosticKind::kDuplicateDeclaration, t[0].pos, "'modes' declared twice");
    if (t.size() < 2) fail(DiagnosticKind::kArityMismatch, t[0].pos, "'modes' needs at least one label");
    for (std::size_t k = 1; k < t.size(); ++k) {
      const int m = integer(t[k], "a mode label");
      if (m < 0) fail(DiagnosticKind::kSyntax, t[k].pos, "mode labels must be non-negative");
      if (!declared_.insert(m).second) {
        fail(DiagnosticKind::kDuplicateDeclaration, t[k].pos, fmt::format("mode {} declared twice", m));
      }
      net_.modes.push_back(m);
      src_.modes.push_back(t[k].pos);
    }
    have_modes_ = true;
  }

  // Splits `a b -> c d` into the two port lists.
  struct Ports {
    std::vector<Token> in;
    std::vector<Token> out;
    bool arrow = false;
  };

  static Ports split_ports(const std::vector<Token>& t, std::size_t first, std::size_t last) {
    Ports p;
    for (std::size_t k = first; k < last; ++k) {
      if (t[k].text == "->") {
        if (p.arrow) fail(DiagnosticKind::kSyntax, t[k].pos, "more than one '->'");
        p.arrow = true;
      } else if (t[k].text == ":") {
        fail(DiagnosticKind::kSyntax, t[k].pos, "unexpected ':'");
      } else {
        (p.arrow ? p.out : p.in).push_back(t[k]);
      }
    }
    return p;
  }

  void arity(const Token& at, bool ok, std::string_view form) {
    if (!ok) fail(DiagnosticKind::kArityMismatch, at.pos, fmt::format("expected '{}'", form));
  }

  void parse_element(const std::vector<Token>& t) {
    const auto& d = t[0].text;
    ElementSource es;
    es.directive = t[0].pos;
    Element e;

    auto take_ports = [&](const Ports& p) {
      for (const auto& tok : p.in) {
        e.in_modes.push_back(mode(tok));
        es.in_modes.push_back(tok.pos);
      }
      for (const auto& tok : p.out) {
        e.out_modes.push_back(mode(tok));
        es.out_modes.push_back(tok.pos);
      }
    };

    if (d == "pbs" || d == "pbsfs" || d == "bs") {
      const auto p = split_ports(t, 1, t.size());
      if (!p.arrow) fail(DiagnosticKind::kSyntax, t[0].pos, fmt::format("'{}' needs '->'", d));
      if (d == "pbs") {
        arity(t[0], (p.in.size() == 1 || p.in.size() == 2) && p.out.size() == 2,
              "pbs in1 [in2] -> out1 out2");
        e.kind = ElementKind::kPbsRL;
      } else if (d == "pbsfs") {
        arity(t[0], p.in.size() == 1 && p.out.size() == 2, "pbsfs in -> outF outS");
        e.kind = ElementKind::kPbsFS;
      } else {
        arity(t[0], p.in.size() == 2 && p.out.size() == 2, "bs in1 in2 -> out1 out2");
        e.kind = ElementKind::kBeamSplitter;
      }
      take_ports(p);
    } else if (d == "hwp") {
      auto p = split_ports(t, 1, t.size());
      if (!p.arrow && p.in.size() == 1) p.out = p.in;
      arity(t[0], p.in.size() == 1 && p.out.size() == 1, "hwp m' or 'hwp in -> out");
      e.kind = ElementKind::kHwp;
      take_ports(p);
    } else if (d == "nv") {
      arity(t[0], t.size() >= 3, "nv m spin_k' or 'nv in -> out spin_k");
      auto p = split_ports(t, 1, t.size() - 1);
      if (!p.arrow && p.in.size() == 1) p.out = p.in;
      arity(t[0], p.in.size() == 1 && p.out.size() == 1, "nv m spin_k' or 'nv in -> out spin_k");
      e.kind = ElementKind::kNvScatter;
      take_ports(p);
      e.spin = spin_index(t.back(), true);
      es.spin = t.back().pos;
    } else if (d == "spinh") {
      arity(t[0], t.size() == 2, "spinh k");
      e.kind = ElementKind::kSpinHadamard;
      e.spin = spin_index(t[1], false);
      es.spin = t[1].pos;
    } else {
      arity(t[0], t.size() == 3, "pauli k OP");
      e.kind = ElementKind::kSpinPauli;
      e.spin = spin_index(t[1], false);
      e.pauli = pauli_op(t[2]);
      es.spin = t[1].pos;
    }
    net_.elements.push_back(std::move(e));
    src_.elements.push_back(std::move(es));
  }

  void parse_detect(const std::vector<Token>& t) {
    require_header(t[0]);
    arity(t[0], t.size() == 2, "detect m");
    net_.detectors.push_back({mode(t[1])});
    src_.detectors.push_back(t[1].pos);
  }

  void parse_feedforward(const std::vector<Token>& t) {
    require_header(t[0]);
    if (t.size() < 3 || t[2].text != ":") {
      fail(DiagnosticKind::kSyntax, t[0].pos, "expected 'feedforward OUTCOME: spin_k OP ...'");
    }
    auto outcome = Outcome::parse(t[1].text);
    if (!outcome) {
      fail(DiagnosticKind::kSyntax, t[1].pos,
           fmt::format("expected an outcome like F3 or S3, got '{}'", t[1].text));
    }
    if ((t.size() - 3) % 2 != 0) {
      fail(DiagnosticKind::kArityMismatch, t.back().pos, "corrections come in 'spin_k OP' pairs");
    }
    std::vector<SpinCorrection> fixes;
    for (std::size_t k = 3; k < t.size(); k += 2) {
      fixes.push_back({spin_index(t[k], true), pauli_op(t[k + 1])});
    }
    if (!net_.feedforward) net_.feedforward.emplace();
    if (!net_.feedforward->rules.emplace(*outcome, std::move(fixes)).second) {
      fail(DiagnosticKind::kDuplicateDeclaration, t[1].pos,
           fmt::format("feedforward for {} given twice", outcome->label()));
    }
    src_.feedforward[*outcome] = t[1].pos;
  }

  Netlist net_;
  NetlistSource src_;
  std::set<ModeLabel> declared_;
  bool have_spins_ = false;
  bool have_modes_ = false;
};

}  // namespace

Netlist parse_netlist(std::string_view text) { return Parser{}.run(text); }

Netlist load_netlist(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open netlist '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_netlist(buf.str());
}

}  // namespace nvgates
