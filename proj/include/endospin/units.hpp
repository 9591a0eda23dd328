#pragma once

// Physical constants and unit conversions. Energies are carried internally in
// kelvin (E / k_B); everything else converts at the I/O boundary.

#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "endospin/error.hpp"

namespace endospin::units {

// CODATA 2018 (k_B and h are exact in the revised SI).
inline constexpr double kBoltzmannOverPlanckHz = 2.083661912e10;   // Hz / K
inline constexpr double kBohrOverBoltzmann = 0.67171381563;        // K / T
inline constexpr double kBohrOverPlanckHz = 1.39962449361e10;      // Hz / T
inline constexpr double kBoltzmannOverPlanckMHz = kBoltzmannOverPlanckHz * 1e-6;
/// k_B / hbar in rad s^-1 K^-1; converts an energy in kelvin to an angular frequency.
inline constexpr double kBoltzmannOverHbar = 2.0 * std::numbers::pi * kBoltzmannOverPlanckHz;

enum class Unit { kelvin, megahertz, tesla, millitesla, second, nanosecond, dimensionless };

enum class Dimension { energy, field, time, none };

inline Dimension dimension_of(Unit u) {
  switch (u) {
    case Unit::kelvin:
    case Unit::megahertz: return Dimension::energy;
    case Unit::tesla:
    case Unit::millitesla: return Dimension::field;
    case Unit::second:
    case Unit::nanosecond: return Dimension::time;
    case Unit::dimensionless: return Dimension::none;
  }
  return Dimension::none;
}

inline std::string_view symbol(Unit u) {
  switch (u) {
    case Unit::kelvin: return "K";
    case Unit::megahertz: return "MHz";
    case Unit::tesla: return "T";
    case Unit::millitesla: return "mT";
    case Unit::second: return "s";
    case Unit::nanosecond: return "ns";
    case Unit::dimensionless: return "1";
  }
  return "?";
}

/// Accepts the symbol or the long name, case-insensitively ("mT" and
/// "millitesla" both work). Returns nullopt for anything else.
inline std::optional<Unit> parse_unit(std::string_view text) {
  std::string s;
  for (char c : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "k" || s == "kelvin") return Unit::kelvin;
  if (s == "mhz" || s == "megahertz") return Unit::megahertz;
  if (s == "t" || s == "tesla") return Unit::tesla;
  if (s == "mt" || s == "millitesla") return Unit::millitesla;
  if (s == "s" || s == "second" || s == "seconds") return Unit::second;
  if (s == "ns" || s == "nanosecond" || s == "nanoseconds") return Unit::nanosecond;
  if (s == "1" || s == "dimensionless") return Unit::dimensionless;
  return std::nullopt;
}

struct PhysQuantity {
  double value = 0.0;
  Unit unit = Unit::dimensionless;
};

inline double kelvin_to_mhz(double kelvin) { return kelvin * kBoltzmannOverPlanckMHz; }
inline double mhz_to_kelvin(double mhz) { return mhz / kBoltzmannOverPlanckMHz; }

/// Zeeman energy g mu_B B in kelvin.
inline double field_to_zeeman(double tesla, double g) {
  if (!(g > 0.0)) throw PhysicsError(Errc::invalid_argument, "g-factor must be positive");
  return g * kBohrOverBoltzmann * tesla;
}

inline double zeeman_to_field(double kelvin, double g) {
  if (!(g > 0.0)) throw PhysicsError(Errc::invalid_argument, "g-factor must be positive");
  return kelvin / (g * kBohrOverBoltzmann);
}

/// Angular frequency (rad/s) of an energy given in kelvin.
inline double kelvin_to_angular(double kelvin) { return kelvin * kBoltzmannOverHbar; }

namespace detail {

// Canonical representative of each dimension: K, T, s.
inline double to_canonical(double v, Unit u) {
  switch (u) {
    case Unit::megahertz: return mhz_to_kelvin(v);
    case Unit::millitesla: return v * 1e-3;
    case Unit::nanosecond: return v * 1e-9;
    default: return v;
  }
}

inline double from_canonical(double v, Unit u) {
  switch (u) {
    case Unit::megahertz: return kelvin_to_mhz(v);
    case Unit::millitesla: return v * 1e3;
    case Unit::nanosecond: return v * 1e9;
    default: return v;
  }
}

}  // namespace detail

/// Converts between compatible units. Field and energy are bridged by the
/// Zeeman energy g mu_B B, so `g` only matters for that pair.
inline PhysQuantity convert(PhysQuantity q, Unit to, double g = 2.0) {
  const Dimension from_dim = dimension_of(q.unit);
  const Dimension to_dim = dimension_of(to);
  double canonical = detail::to_canonical(q.value, q.unit);
  if (from_dim != to_dim) {
    if (from_dim == Dimension::field && to_dim == Dimension::energy) {
      canonical = field_to_zeeman(canonical, g);
    } else if (from_dim == Dimension::energy && to_dim == Dimension::field) {
      canonical = zeeman_to_field(canonical, g);
    } else {
      throw PhysicsError(Errc::incompatible_units, std::string(symbol(q.unit)) + " -> " +
                                                       std::string(symbol(to)));
    }
  }
  return {detail::from_canonical(canonical, to), to};
}

}  // namespace endospin::units
