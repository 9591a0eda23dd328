#pragma once

// Gate-level readout protocol: Fe8-controlled fullerene flips (CNOT21) by
// selective ESR pulses, fullerene-controlled Fe8 flips (CNOT12) by sweeping Bz
// through a ground-doublet crossing, their SWAP composition, Fe8 preparation,
// ideal sign readout, and the decoherence timing budget.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "endospin/dynamics.hpp"

namespace endospin {

enum class Encoding { inner, outer };

inline const char* to_string(Encoding e) { return e == Encoding::inner ? "inner" : "outer"; }

/// Logical qubit inside the spin-3/2 quartet: outer |3/2>,|-3/2> or inner
/// |1/2>,|-1/2>, with the positive projection as logical 0.
struct QubitEncoding {
  Encoding kind = Encoding::outer;

  HalfInt zero() const { return HalfInt::from_twice(kind == Encoding::outer ? 3 : 1); }
  HalfInt one() const { return -zero(); }
  /// Fullerene projection whose ground-doublet crossing implements CNOT12.
  HalfInt control_n() const { return zero(); }
};

enum class Convention { paper, strict_si };

inline const char* to_string(Convention c) { return c == Convention::paper ? "paper" : "strict_si"; }

struct Budget {
  double pulse_time = 0;        // s
  double decoherence_time = 0;  // s
  double t0_max = 0;            // s
  bool feasible = false;
  bool ok = false;
};

/// Maximum tunnelling time T0 that keeps pulse time plus T0 inside the
/// linewidth-limited dephasing time. Both inputs are MHz-labelled numbers.
/// Under Convention::paper they are read as x * 1e6 rad/s and times are 2 pi / x;
/// under Convention::strict_si they are ordinary frequencies and times are 1 / x.
inline Budget timing_budget(double rabi_value, double linewidth_value, double t0, Convention convention) {
  if (!(rabi_value > 0.0) || !(linewidth_value > 0.0)) {
    throw PhysicsError(Errc::invalid_argument, "Rabi frequency and linewidth must be positive");
  }
  const double numerator = convention == Convention::paper ? 2.0 * std::numbers::pi : 1.0;
  Budget b;
  b.pulse_time = numerator / (rabi_value * 1e6);
  b.decoherence_time = numerator / (linewidth_value * 1e6);
  b.t0_max = b.decoherence_time - b.pulse_time;
  b.feasible = b.t0_max > 0.0;
  b.ok = b.feasible && t0 <= b.t0_max;
  return b;
}

struct GateRecord {
  std::string name;
  double duration = 0;  // s
  double bz_from = 0;   // T
  double bz_to = 0;     // T
  std::optional<double> flip_probability;
  std::optional<int> column;  // resonant Fe8 column for CNOT21
};

/// The eight states n in {+-1/2, +-3/2}, m = +-10, as product-space indices.
inline std::array<Eigen::Index, 8> low_lying_indices() {
  std::array<Eigen::Index, 8> out{};
  const auto states = low_lying_states();
  for (std::size_t i = 0; i < 8; ++i) out[i] = product_index(states[i]);
  return out;
}

inline double weight_outside_low_lying(const QuantumState& s) {
  double inside = 0.0;
  for (Eigen::Index i : low_lying_indices()) inside += s.population(i);
  return std::max(0.0, s.amplitudes().squaredNorm() - inside);
}

/// Restriction of an 84-dim product-space map to the low-lying subspace.
template <class Map>
Matrix restrict_to_low_lying(Map&& map) {
  const auto idx = low_lying_indices();
  Matrix u = Matrix::Zero(8, 8);
  for (std::size_t c = 0; c < 8; ++c) {
    Vector v = Vector::Zero(kProductDim);
    v(idx[c]) = 1.0;
    const QuantumState out = map(QuantumState(v, product_basis()));
    for (std::size_t r = 0; r < 8; ++r) u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = out.amplitudes()(idx[r]);
  }
  return u;
}

/// Carrier (MHz) that addresses Fe8 column m at field bz.
inline double cnot21_carrier(int control_m, const SystemParams& p, double bz) {
  return column_frequency_mhz(HalfInt(control_m), p, bz);
}

/// pi pulse on the fullerene conditioned on Fe8 being in |control_m>.
inline QuantumState cnot21(const QuantumState& state, const QubitEncoding& /*enc*/, int control_m,
                           const SystemParams& p, double bz, PulseMode mode) {
  if (control_m != 10 && control_m != -10) throw PhysicsError(Errc::invalid_argument, "control_m must be +10 or -10");
  const double carrier = cnot21_carrier(control_m, p, bz);
  if (carrier <= 0.0) throw PhysicsError(Errc::no_resonance, "transition frequency vanishes at this field");
  // resonant_column also rejects a carrier that addresses more than one column.
  if (resonant_column(p, bz, carrier) != HalfInt(control_m)) {
    throw PhysicsError(Errc::no_resonance, "carrier does not resolve the control column");
  }
  return esr_pulse(state, p, bz, carrier, std::numbers::pi, 0.0, mode);
}

inline Matrix cnot21_matrix(const QubitEncoding& enc, int control_m, const SystemParams& p, double bz,
                            PulseMode mode) {
  return restrict_to_low_lying([&](const QuantumState& s) { return cnot21(s, enc, control_m, p, bz, mode); });
}

struct Cnot12Result {
  QuantumState state;
  CrossingPoint crossing;
  SweepWindow window;
  double flip_probability = 0;
  double duration = 0;  // s
};

/// The crossing and default sweep window used by CNOT12 for this encoding.
inline std::pair<CrossingPoint, SweepWindow> cnot12_geometry(const QubitEncoding& enc, const SystemParams& p,
                                                             std::optional<SweepWindow> window = std::nullopt) {
  CrossingPoint cp = ground_doublet_crossing(enc.control_n(), p);
  const SweepWindow w = window ? *window : selective_window(cp, p);
  const auto inside = first_order_in_window(p, w.from, w.to);
  if (inside.size() != 1 || inside.front().state_a.n != cp.state_a.n) {
    throw PhysicsError(Errc::non_selective_sweep, "sweep window must contain exactly the " +
                                                      cp.state_a.str() + " / " + cp.state_b.str() + " crossing");
  }
  return {cp, w};
}

/// Sweeps Bz through the control crossing only, flipping Fe8 |-10> <-> |10>
/// when the fullerene is in the control projection.
inline Cnot12Result cnot12(const QuantumState& state, const QubitEncoding& enc, const SystemParams& p, double rate,
                           double delta, std::optional<SweepWindow> window = std::nullopt) {
  if (!(delta > 0.0)) throw PhysicsError(Errc::invalid_argument, "tunnel splitting must be positive");
  if (!(rate > 0.0)) throw PhysicsError(Errc::invalid_argument, "sweep rate must be positive");
  auto [cp, w] = cnot12_geometry(enc, p, window);
  cp.gap = delta;
  Cnot12Result r;
  r.crossing = cp;
  r.window = w;
  r.flip_probability = lz_probability(delta, rate, 20, p);
  r.duration = std::isinf(rate) ? 0.0 : std::abs(w.to - w.from) / rate;
  r.state = sweep_through_crossing(state, cp, rate, p, w);
  return r;
}

// Population-level ideal gates on the low-lying labels.
inline StateLabel ideal_cnot21(StateLabel s, int control_m) {
  if (s.m == HalfInt(control_m)) s.n = -s.n;
  return s;
}
inline StateLabel ideal_cnot12(StateLabel s, const QubitEncoding& enc) {
  if (s.n == enc.control_n()) s.m = -s.m;
  return s;
}

/// Applies a label permutation to the amplitudes (no phases).
template <class Perm>
QuantumState permute_state(const QuantumState& in, Perm&& perm) {
  Vector out = Vector::Zero(kProductDim);
  for (Eigen::Index i = 0; i < kProductDim; ++i) {
    if (in.amplitudes()(i) == cplx(0.0)) continue;
    out(product_index(perm(product_label(i)))) += in.amplitudes()(i);
  }
  return {std::move(out), in.basis()};
}

/// (sum_i sqrt(p_i q_i))^2 over basis populations.
inline double population_fidelity(const QuantumState& a, const QuantumState& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.dim(); ++i) s += std::sqrt(a.population(i) * b.population(i));
  return s * s;
}

inline double state_fidelity(const QuantumState& a, const QuantumState& b) { return std::norm(a.inner(b)); }

struct ProtocolControls {
  PulseMode mode = PulseMode::ideal;
  int control_m = 10;
  double rate = 1e-6;   // T/s
  double delta = 1e-7;  // K
  Convention convention = Convention::paper;
  std::optional<SweepWindow> window;
};

struct ProtocolReport {
  QuantumState final_state;
  QuantumState ideal_state;
  double fidelity = 0;
  double population_fidelity = 0;
  double total_duration = 0;   // s, pulse time 2 pi / Omega plus T0
  double gate_sum_duration = 0;  // s, sum over the individual gates
  double t0 = 0;               // s
  Budget budget;
  bool budget_ok = false;
  std::vector<GateRecord> gates;
  std::vector<std::string> warnings;
};

namespace detail {

inline void require_low_lying(const QuantumState& s) {
  require_product_state(s);
  if (weight_outside_low_lying(s) > 1e-9) {
    throw PhysicsError(Errc::unsupported_state, "input must lie in the n x {+-10} low-lying subspace");
  }
}

inline void finish_report(ProtocolReport& r, const SystemParams& p, const ProtocolControls& c) {
  r.fidelity = state_fidelity(r.ideal_state, r.final_state);
  r.population_fidelity = population_fidelity(r.ideal_state, r.final_state);
  r.gate_sum_duration = 0.0;
  for (const auto& g : r.gates) r.gate_sum_duration += g.duration;
  r.budget = timing_budget(rabi_mhz(p), p.linewidth, r.t0, c.convention);
  r.budget_ok = r.budget.ok;
}

}  // namespace detail

/// CNOT21 . CNOT12 . CNOT21: pulse at the low edge of the sweep window, sweep
/// up through the control crossing, pulse again at the high edge.
inline ProtocolReport swap(const QubitEncoding& enc, const QuantumState& input, const SystemParams& p,
                           const ProtocolControls& c) {
  detail::require_low_lying(input);
  const auto [cp, w] = cnot12_geometry(enc, p, c.window);
  const double pulse_time = std::numbers::pi / p.rabi;

  ProtocolReport r;
  QuantumState s = cnot21(input, enc, c.control_m, p, w.from, c.mode);
  r.gates.push_back({"cnot21", pulse_time, w.from, w.from, std::nullopt, c.control_m});
  const Cnot12Result sweep = cnot12(s, enc, p, c.rate, c.delta, w);
  s = sweep.state;
  r.gates.push_back({"cnot12", sweep.duration, w.from, w.to, sweep.flip_probability, std::nullopt});
  s = cnot21(s, enc, c.control_m, p, w.to, c.mode);
  r.gates.push_back({"cnot21", pulse_time, w.to, w.to, std::nullopt, c.control_m});

  r.final_state = s;
  r.ideal_state = permute_state(input, [&](StateLabel l) {
    return ideal_cnot21(ideal_cnot12(ideal_cnot21(l, c.control_m), enc), c.control_m);
  });
  r.t0 = sweep.duration;
  r.total_duration = 2.0 * std::numbers::pi / p.rabi + r.t0;
  detail::finish_report(r, p, c);
  return r;
}

/// A single CNOT12 that writes a polarized fullerene qubit onto a prepared Fe8.
inline ProtocolReport convert_only(const QubitEncoding& enc, const QuantumState& input, const SystemParams& p,
                                   const ProtocolControls& c) {
  detail::require_low_lying(input);
  ProtocolReport r;
  double plus = 0.0, minus = 0.0;
  for (Eigen::Index i = 0; i < kProductDim; ++i) {
    const StateLabel l = product_label(i);
    (l.m.twice() > 0 ? plus : minus) += input.population(i);
  }
  if (std::min(plus, minus) > 1e-9) {
    r.warnings.push_back("Fe8 is not in a prepared basis state (P+10 = " + std::to_string(plus) +
                         ", P-10 = " + std::to_string(minus) + "); readout fidelity is reduced");
  }
  const Cnot12Result sweep = cnot12(input, enc, p, c.rate, c.delta, c.window);
  r.gates.push_back({"cnot12", sweep.duration, sweep.window.from, sweep.window.to, sweep.flip_probability,
                     std::nullopt});
  r.final_state = sweep.state;
  r.ideal_state = permute_state(input, [&](StateLabel l) { return ideal_cnot12(l, enc); });
  r.t0 = sweep.duration;
  r.total_duration = r.t0;
  detail::finish_report(r, p, c);
  return r;
}

struct Preparation {
  double hold_time = 0;   // s
  double population = 0;  // of the target state
};

/// Dwell time at the doublet degeneracy that takes the thermal start |-10>
/// to `target`.
inline Preparation prepare_fe8(int target, double delta, const SystemParams& /*p*/) {
  if (target != 10 && target != -10) throw PhysicsError(Errc::invalid_argument, "target must be +10 or -10");
  if (!(delta > 0.0)) throw PhysicsError(Errc::invalid_argument, "tunnel splitting must be positive");
  Preparation prep;
  prep.hold_time = target == -10 ? 0.0 : std::numbers::pi / (delta * units::kBoltzmannOverHbar);
  const auto [up, down] = tunnel_oscillation(delta, prep.hold_time);
  prep.population = target == 10 ? up : down;
  return prep;
}

/// Which Fe8 sign stands for logical 0 after a transfer.
struct ReadoutMapping {
  bool plus_is_zero = true;
};

/// After SWAP the Fe8 ends in |control_m> exactly when the fullerene held logical 0.
inline ReadoutMapping swap_readout_mapping(int control_m) { return {control_m > 0}; }
/// After convert_only from Fe8 |fe8_start>, logical 0 flips it to -fe8_start.
inline ReadoutMapping convert_readout_mapping(int fe8_start) { return {fe8_start < 0}; }

struct Readout {
  double plus = 0;        // P(m > 0)
  double minus = 0;       // P(m < 0)
  double unresolved = 0;  // P(m = 0)
  double bit0 = 0;
  double bit1 = 0;
};

/// Ideal projective measurement of the Fe8 magnetization sign.
inline Readout readout_map(const QuantumState& state, ReadoutMapping mapping = {}) {
  require_product_state(state);
  Readout r;
  for (Eigen::Index i = 0; i < kProductDim; ++i) {
    const int tm = product_label(i).m.twice();
    (tm > 0 ? r.plus : tm < 0 ? r.minus : r.unresolved) += state.population(i);
  }
  r.bit0 = mapping.plus_is_zero ? r.plus : r.minus;
  r.bit1 = mapping.plus_is_zero ? r.minus : r.plus;
  return r;
}

}  // namespace endospin
