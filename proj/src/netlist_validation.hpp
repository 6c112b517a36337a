#pragma once

#include <map>
#include <vector>

#include "nvgates/netlist.hpp"

namespace nvgates::detail {

struct TokenPos {
  int line = 0;
  int column = 0;
};

// Where each parsed item came from, so validation can point at it.
struct ElementSource {
  TokenPos directive;
  std::vector<TokenPos> in_modes;
  std::vector<TokenPos> out_modes;
  TokenPos spin;
};

struct NetlistSource {
  std::vector<ElementSource> elements;
  std::vector<TokenPos> detectors;
  std::map<Outcome, TokenPos> feedforward;
  std::vector<TokenPos> modes;
  TokenPos spins;
  int last_line = 0;
};

// Throws NetlistError; positions come from `source` when given.
void validate(const Netlist& netlist, const NetlistSource* source);

}  // namespace nvgates::detail
