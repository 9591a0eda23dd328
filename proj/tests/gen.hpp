#pragma once

// Hand-rolled random generators for property tests. Seeds are fixed so every
// run sees the same cases.

#include <random>
#include <string>

#include "endospin/hamiltonian.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& r, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(r); }
inline int integer(Rng& r, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(r); }

inline endospin::StateLabel state(Rng& r) {
  return {endospin::HalfInt::from_twice(2 * integer(r, 0, 3) - 3), endospin::HalfInt(integer(r, -10, 10))};
}

/// Physically sensible parameters in the region the model is meant for.
inline endospin::SystemParams params(Rng& r) {
  endospin::SystemParams p;
  p.d_axial = uniform(r, 0.05, 0.6);
  p.j_eff = uniform(r, 0.002, 0.04);
  p.g1 = uniform(r, 1.9, 2.1);
  p.g2 = uniform(r, 1.9, 2.1);
  p.e_transverse = uniform(r, 0.0, 0.08);
  return p;
}

inline std::string random_bytes(Rng& r, int max_len) {
  std::string s(integer(r, 0, max_len), '\0');
  for (auto& c : s) c = static_cast<char>(integer(r, 0, 255));
  return s;
}

/// Random text built from pulse-language fragments, mostly almost-valid.
inline std::string random_program_text(Rng& r) {
  static const char* pieces[] = {"init ", "set ", "bz ", "pulse ", "sweep ", "wait ", "measure ", "fe8", "|3/2,-10>",
                                 "|1/2,7>", "+", "-", "*", "0.5", "1e-3", "1e400", "abc", "freq=", "rabi=", "angle=",
                                 "phase=", "mode=", "ideal", "detuned", "from=", "to=", "rate=", "gap=", "T", "mT",
                                 "MHz", "GHz", "pi", "ns", "us", "s", "T/s", "K", "#", "\n", "\r\n", " ", "\t", "=",
                                 "|", ",", ">", "<", "3/2", "-10", "\xff", "\0"};
  std::string s;
  const int n = integer(r, 0, 40);
  for (int i = 0; i < n; ++i) s += pieces[integer(r, 0, static_cast<int>(std::size(pieces)) - 1)];
  return s;
}

/// A syntactically valid program with random numbers.
inline std::string valid_program(Rng& r) {
  std::string s;
  if (integer(r, 0, 1)) {
    s += "init " + std::to_string(uniform(r, 0.1, 2.0)) + "|3/2," + std::to_string(integer(r, -10, 10)) + ">";
    if (integer(r, 0, 1)) s += " - 0.25|-1/2," + std::to_string(integer(r, -10, 10)) + ">";
    s += "\n";
  }
  const int n = integer(r, 0, 8);
  for (int i = 0; i < n; ++i) {
    switch (integer(r, 0, 4)) {
      case 0: s += "set bz " + std::to_string(uniform(r, -50, 50)) + "mT\n"; break;
      case 1:
        s += "pulse freq=" + std::to_string(uniform(r, 1, 4000)) + "MHz rabi=" + std::to_string(uniform(r, 1, 100)) +
             "MHz angle=" + std::to_string(uniform(r, 0.1, 2)) + "pi";
        if (integer(r, 0, 1)) s += " phase=0.5pi";
        if (integer(r, 0, 1)) s += " mode=detuned";
        s += "\n";
        break;
      case 2:
        s += "sweep bz from=" + std::to_string(uniform(r, 0, 0.05)) + "T to=" + std::to_string(uniform(r, 0, 0.05)) +
             "T rate=" + std::to_string(uniform(r, 1e-4, 1e-2)) + "T/s";
        if (integer(r, 0, 1)) s += " gap=1e-7K";
        s += "\n";
        break;
      case 3: s += "wait " + std::to_string(integer(r, 1, 1000)) + "ns\n"; break;
      default: s += "measure fe8   # read\n"; break;
    }
  }
  return s;
}

}  // namespace gen
