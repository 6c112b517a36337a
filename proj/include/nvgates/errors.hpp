#pragma once

#include <stdexcept>

namespace nvgates {

// Amplitude pairs that are not unit-normalized.
class NormalizationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// States or operators whose layouts do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A spatial-mode label that is not part of the state layout.
class ModeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Physical or numerical parameters outside their domain.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Element ports that would merge occupied modes or repeat a port.
class WiringError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace nvgates
