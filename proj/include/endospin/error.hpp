#pragma once

#include <stdexcept>
#include <string>

namespace endospin {

enum class Errc {
  invalid_argument,
  incompatible_units,
  config,
  no_crossing,
  ambiguous_branches,
  no_resonance,
  non_selective_sweep,
  unsupported_crossing,
  non_convergence,
  unsupported_state,
};

inline const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::incompatible_units: return "incompatible units";
    case Errc::config: return "configuration error";
    case Errc::no_crossing: return "no crossing";
    case Errc::ambiguous_branches: return "ambiguous branches";
    case Errc::no_resonance: return "no resonant transition";
    case Errc::non_selective_sweep: return "non-selective sweep";
    case Errc::unsupported_crossing: return "probability model not implemented";
    case Errc::non_convergence: return "non-convergence";
    case Errc::unsupported_state: return "unsupported state";
  }
  return "unknown error";
}

/// Raised for physics and validation failures (bad parameters, impossible
/// crossings, non-selective gates). The CLI maps these to exit code 2.
class PhysicsError : public std::runtime_error {
 public:
  PhysicsError(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace endospin
