#pragma once

// Model Hamiltonians for an endohedral spin-3/2 coupled to an Fe8 spin-10.
// All energies are in kelvin; the product basis is |n, m> with n = 3/2..-3/2
// (fullerene) outermost and m = 10..-10 (Fe8) innermost.

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>

#include "json.hpp"

#include "endospin/error.hpp"
#include "endospin/spinops.hpp"
#include "endospin/units.hpp"

namespace endospin {

inline constexpr HalfInt kFullereneSpin = HalfInt::from_twice(3);
inline constexpr HalfInt kFe8Spin = HalfInt(10);
inline constexpr int kFullereneDim = 4;
inline constexpr int kFe8Dim = 21;
inline constexpr int kProductDim = kFullereneDim * kFe8Dim;

/// A product basis state |n, m>.
struct StateLabel {
  HalfInt n;
  HalfInt m;

  std::string str() const { return "|" + n.str() + "," + m.str() + ">"; }
  BasisLabel basis_label() const { return {{n, m}}; }
  auto operator<=>(const StateLabel&) const = default;
};

inline bool valid_fullerene_projection(HalfInt n) {
  return !n.is_integer() && std::abs(n.twice()) <= kFullereneSpin.twice();
}
inline bool valid_fe8_projection(HalfInt m) {
  return m.is_integer() && std::abs(m.twice()) <= kFe8Spin.twice();
}

inline void require_valid(const StateLabel& s) {
  if (!valid_fullerene_projection(s.n) || !valid_fe8_projection(s.m)) {
    throw PhysicsError(Errc::invalid_argument, "state out of range: " + s.str());
  }
}

inline Eigen::Index product_index(const StateLabel& s) {
  require_valid(s);
  const int ni = (kFullereneSpin.twice() - s.n.twice()) / 2;
  const int mi = (kFe8Spin.twice() - s.m.twice()) / 2;
  return ni * kFe8Dim + mi;
}

inline StateLabel product_label(Eigen::Index index) {
  const int ni = static_cast<int>(index) / kFe8Dim;
  const int mi = static_cast<int>(index) % kFe8Dim;
  return {HalfInt::from_twice(kFullereneSpin.twice() - 2 * ni), HalfInt::from_twice(kFe8Spin.twice() - 2 * mi)};
}

inline std::vector<BasisLabel> product_basis() {
  std::vector<BasisLabel> basis;
  basis.reserve(kProductDim);
  for (Eigen::Index i = 0; i < kProductDim; ++i) basis.push_back(product_label(i).basis_label());
  return basis;
}

inline QuantumState product_state(const StateLabel& s) {
  return QuantumState::basis_state(product_basis(), s.basis_label());
}

struct SystemParams {
  double g1 = 2.0;
  double g2 = 2.0;
  double d_axial = 0.275;           // K
  std::optional<double> j0;         // K, bare dipolar strength
  double j_eff = 0.0175;            // K, J0 (1 - 3 cos^2 theta)
  double theta = std::numbers::pi / 2;
  double phi = 0.0;
  double e_transverse = 0.046;      // K
  double rabi = 2.0 * std::numbers::pi * 30e6;  // rad/s
  double linewidth = 22.4;          // MHz

  static double angular_factor(double theta) {
    const double c = std::cos(theta);
    return 1.0 - 3.0 * c * c;
  }

  /// J0; derived from j_eff and theta when not given explicitly.
  double bare_coupling() const {
    if (j0) return *j0;
    const double f = angular_factor(theta);
    if (std::abs(f) < 1e-12) {
      if (j_eff == 0.0) return 0.0;
      throw PhysicsError(Errc::config, "j0 is undetermined at the magic angle; set j0_kelvin");
    }
    return j_eff / f;
  }

  double omega1(double bz) const { return units::field_to_zeeman(bz, g1); }
  double omega2(double bz) const { return units::field_to_zeeman(bz, g2); }

  void validate() const {
    if (!(g1 > 0.0) || !(g2 > 0.0)) throw PhysicsError(Errc::config, "g-factors must be positive");
    if (!(d_axial > 0.0)) throw PhysicsError(Errc::config, "d_kelvin must be positive");
    if (!(e_transverse >= 0.0)) throw PhysicsError(Errc::config, "e_transverse_kelvin must be non-negative");
    if (!(rabi > 0.0)) throw PhysicsError(Errc::config, "rabi_rad_per_s must be positive");
    if (!(linewidth > 0.0)) throw PhysicsError(Errc::config, "linewidth_mhz must be positive");
    if (!std::isfinite(j_eff) || !std::isfinite(theta) || !std::isfinite(phi)) {
      throw PhysicsError(Errc::config, "non-finite coupling parameters");
    }
    if (j0 && std::abs(*j0 * angular_factor(theta) - j_eff) > 1e-12) {
      throw PhysicsError(Errc::config, "j_eff_kelvin inconsistent with j0_kelvin (1 - 3 cos^2 theta)");
    }
  }
};

/// Reads parameters from a JSON object. Missing keys keep their defaults;
/// unknown keys are rejected.
inline SystemParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw PhysicsError(Errc::config, "parameter file must hold a JSON object");
  SystemParams p;
  bool have_j_eff = false;
  auto number = [](const nlohmann::json& v, const std::string& key) {
    if (!v.is_number()) throw PhysicsError(Errc::config, key + " must be a number");
    return v.get<double>();
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "g1") p.g1 = number(value, key);
    else if (key == "g2") p.g2 = number(value, key);
    else if (key == "d_kelvin") p.d_axial = number(value, key);
    else if (key == "j0_kelvin") p.j0 = number(value, key);
    else if (key == "j_eff_kelvin") { p.j_eff = number(value, key); have_j_eff = true; }
    else if (key == "theta_rad") p.theta = number(value, key);
    else if (key == "phi_rad") p.phi = number(value, key);
    else if (key == "e_transverse_kelvin") p.e_transverse = number(value, key);
    else if (key == "rabi_rad_per_s") p.rabi = number(value, key);
    else if (key == "linewidth_mhz") p.linewidth = number(value, key);
    else throw PhysicsError(Errc::config, "unknown parameter key '" + key + "'");
  }
  if (p.j0 && !have_j_eff) p.j_eff = *p.j0 * SystemParams::angular_factor(p.theta);
  p.validate();
  return p;
}

inline nlohmann::json params_to_json(const SystemParams& p) {
  nlohmann::json j;
  j["g1"] = p.g1;
  j["g2"] = p.g2;
  j["d_kelvin"] = p.d_axial;
  if (p.j0) j["j0_kelvin"] = *p.j0;
  j["j_eff_kelvin"] = p.j_eff;
  j["theta_rad"] = p.theta;
  j["phi_rad"] = p.phi;
  j["e_transverse_kelvin"] = p.e_transverse;
  j["rabi_rad_per_s"] = p.rabi;
  j["linewidth_mhz"] = p.linewidth;
  return j;
}

inline SystemParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PhysicsError(Errc::config, "cannot open parameter file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw PhysicsError(Errc::config, std::string("malformed parameter file: ") + e.what());
  }
  return params_from_json(j);
}

namespace detail {

struct ProductOperators {
  SpinOperators s1;
  SpinOperators s2;
  SpinMatrix id1;
  SpinMatrix id2;
};

inline const ProductOperators& product_operators() {
  static const ProductOperators ops = [] {
    SpinOperators s1 = spin_operators(kFullereneSpin);
    SpinOperators s2 = spin_operators(kFe8Spin);
    SpinMatrix id1 = SpinMatrix::identity(s1.sz.basis());
    SpinMatrix id2 = SpinMatrix::identity(s2.sz.basis());
    return ProductOperators{std::move(s1), std::move(s2), std::move(id1), std::move(id2)};
  }();
  return ops;
}

}  // namespace detail

/// -g1 mu_B Bz S1z.
inline SpinMatrix build_h1(const SystemParams& p, double bz) {
  const auto& ops = detail::product_operators();
  return cplx(-p.omega1(bz)) * ops.s1.sz;
}

/// -D S2z^2 - g2 mu_B Bz S2z, optionally plus E (S2x^2 - S2y^2).
inline SpinMatrix build_h2(const SystemParams& p, double bz, bool include_transverse) {
  const auto& s = detail::product_operators().s2;
  SpinMatrix h = cplx(-p.d_axial) * (s.sz * s.sz) - cplx(p.omega2(bz)) * s.sz;
  if (include_transverse && p.e_transverse != 0.0) {
    h += cplx(p.e_transverse) * (s.sx * s.sx - s.sy * s.sy);
  }
  return h;
}

/// Full dipolar coupling J0 (A + B + C + E + F + G).
inline SpinMatrix build_hi_full(const SystemParams& p) {
  const auto& ops = detail::product_operators();
  const auto& s1 = ops.s1;
  const auto& s2 = ops.s2;
  const double ct = std::cos(p.theta);
  const double st = std::sin(p.theta);
  const double axial = 1.0 - 3.0 * ct * ct;
  const cplx e_mphi = std::polar(1.0, -p.phi);
  const cplx e_m2phi = std::polar(1.0, -2.0 * p.phi);

  const SpinMatrix a = cplx(axial) * tensor(s1.sz, s2.sz);
  const SpinMatrix b = cplx(-0.25 * axial) * (tensor(s1.sp, s2.sm) + tensor(s1.sm, s2.sp));
  const SpinMatrix c = (-1.5 * st * ct * e_mphi) * (tensor(s1.sz, s2.sp) + tensor(s1.sp, s2.sz));
  const SpinMatrix e = c.adjoint();
  const SpinMatrix f = (-0.75 * st * st * e_m2phi) * tensor(s1.sp, s2.sp);
  const SpinMatrix g = f.adjoint();
  return cplx(p.bare_coupling()) * (a + b + c + e + f + g);
}

/// Diagonal weak-coupling model -w(S1z + S2z) - D S2z^2 + J S1z S2z, with the
/// Zeeman term split per spin so unequal g-factors stay consistent with
/// build_total.
inline SpinMatrix build_hc(const SystemParams& p, double bz) {
  const double w1 = p.omega1(bz);
  const double w2 = p.omega2(bz);
  Matrix h = Matrix::Zero(kProductDim, kProductDim);
  for (Eigen::Index i = 0; i < kProductDim; ++i) {
    const StateLabel s = product_label(i);
    const double n = s.n.value();
    const double m = s.m.value();
    h(i, i) = -w1 * n - w2 * m - p.d_axial * m * m + p.j_eff * n * m;
  }
  return {std::move(h), product_basis()};
}

/// H1 (x) I + I (x) H2 + H_I.
inline SpinMatrix build_total(const SystemParams& p, double bz, bool include_transverse) {
  const auto& ops = detail::product_operators();
  return tensor(build_h1(p, bz), ops.id2) + tensor(ops.id1, build_h2(p, bz, include_transverse)) +
         build_hi_full(p);
}

}  // namespace endospin
