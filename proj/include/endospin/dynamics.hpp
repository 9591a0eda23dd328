#pragma once

// Time evolution in the product space: free precession, rotating-frame ESR
// pulses, Landau-Zener sweeps through ground-doublet crossings, and the
// two-level tunnel oscillation of the Fe8 doublet.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "endospin/spectrum.hpp"

namespace endospin {

enum class Model { diagonal, full };
enum class PulseMode { ideal, detuned };

inline const char* to_string(PulseMode m) { return m == PulseMode::ideal ? "ideal" : "detuned"; }

/// Populations of every basis state after one control segment.
struct SegmentRecord {
  std::string kind;
  double duration = 0;  // s
  std::vector<double> populations;
};

struct EvolutionResult {
  QuantumState final_state;
  double elapsed = 0;  // s
  std::vector<SegmentRecord> segments;
};

inline std::vector<double> populations(const QuantumState& s) {
  std::vector<double> out(static_cast<std::size_t>(s.dim()));
  for (Eigen::Index i = 0; i < s.dim(); ++i) out[static_cast<std::size_t>(i)] = s.population(i);
  return out;
}

inline void require_product_state(const QuantumState& s) {
  if (s.dim() != kProductDim) throw PhysicsError(Errc::invalid_argument, "expected a state on the 84-dim product space");
}

/// exp(-i H t) with H in kelvin converted through k_B / hbar.
inline QuantumState propagate_hold(const QuantumState& state, const SystemParams& p, double bz, double t,
                                   Model model) {
  require_product_state(state);
  if (!(t >= 0.0)) throw PhysicsError(Errc::invalid_argument, "hold time must be non-negative");
  if (t == 0.0) return state;
  const double scaled = units::kBoltzmannOverHbar * t;
  if (model == Model::diagonal) {
    const SpinMatrix h = build_hc(p, bz);
    Vector out = state.amplitudes();
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) *= std::polar(1.0, -h(i, i).real() * scaled);
    return {std::move(out), state.basis()};
  }
  return state.apply(expm_hermitian(build_total(p, bz, true), scaled));
}

/// |-w + m J| in MHz for Fe8 column m; the carrier that drives that column.
inline double column_frequency_mhz(HalfInt m, const SystemParams& p, double bz) {
  // The fullerene spin sees only its own Zeeman term, hence g1.
  return units::kelvin_to_mhz(std::abs(transition_freq(m, p.omega1(bz), p.j_eff)));
}

inline double rabi_mhz(const SystemParams& p) { return p.rabi / (2.0 * std::numbers::pi) * 1e-6; }

/// Column whose transition matches `carrier_mhz` within max(Omega/2pi, linewidth).
/// Throws no_resonance when none does, or when two columns are both inside
/// the tolerance and so cannot be addressed separately.
inline HalfInt resonant_column(const SystemParams& p, double bz, double carrier_mhz) {
  const double tol = std::max(rabi_mhz(p), p.linewidth);
  std::optional<HalfInt> found;
  double best = std::numeric_limits<double>::infinity();
  int hits = 0;
  for (int m = 10; m >= -10; --m) {
    const double miss = std::abs(column_frequency_mhz(HalfInt(m), p, bz) - carrier_mhz);
    if (miss <= tol) ++hits;
    if (miss < best) {
      best = miss;
      found = HalfInt(m);
    }
  }
  if (hits == 0) {
    throw PhysicsError(Errc::no_resonance, "carrier " + std::to_string(carrier_mhz) + " MHz matches no Fe8 column");
  }
  if (hits > 1) {
    throw PhysicsError(Errc::no_resonance, "carrier " + std::to_string(carrier_mhz) +
                                               " MHz is not resolvable: several columns lie within the linewidth");
  }
  return *found;
}

namespace detail {

// Applies a 4x4 unitary to the fullerene factor of every amplitude in column m.
inline void apply_on_column(Vector& amp, HalfInt m, const Matrix& u) {
  Vector col(kFullereneDim);
  for (int ni = 0; ni < kFullereneDim; ++ni) {
    col(ni) = amp(product_index({HalfInt::from_twice(3 - 2 * ni), m}));
  }
  col = u * col;
  for (int ni = 0; ni < kFullereneDim; ++ni) {
    amp(product_index({HalfInt::from_twice(3 - 2 * ni), m})) = col(ni);
  }
}

inline Matrix pulse_generator(double phase) {
  const auto& s1 = product_operators().s1;
  return std::cos(phase) * s1.sx.data() + std::sin(phase) * s1.sy.data();
}

}  // namespace detail

/// Resonant ESR pulse of flip angle `angle` about the in-plane axis at `phase`.
/// Ideal mode rotates only the matched column with exp(-i angle S1(phase));
/// detuned mode evolves every column under Omega S1(phase) + delta_m S1z for
/// the pulse duration angle / Omega.
inline QuantumState esr_pulse(const QuantumState& state, const SystemParams& p, double bz, double carrier_mhz,
                              double angle, double phase, PulseMode mode) {
  require_product_state(state);
  if (!(angle > 0.0)) throw PhysicsError(Errc::invalid_argument, "flip angle must be positive");
  if (!(p.rabi > 0.0)) throw PhysicsError(Errc::invalid_argument, "Rabi frequency must be positive");
  Vector amp = state.amplitudes();
  const Matrix axis = detail::pulse_generator(phase);
  const std::vector<BasisLabel> basis1 = spin_basis(kFullereneSpin);

  if (mode == PulseMode::ideal) {
    const HalfInt m = resonant_column(p, bz, carrier_mhz);
    const SpinMatrix u = expm_hermitian({axis, basis1}, angle);
    detail::apply_on_column(amp, m, u.data());
    return {std::move(amp), state.basis()};
  }

  const double duration = angle / p.rabi;
  const Matrix& sz = detail::product_operators().s1.sz.data();
  for (int mv = 10; mv >= -10; --mv) {
    const HalfInt m(mv);
    const double delta = 2.0 * std::numbers::pi * 1e6 * (carrier_mhz - column_frequency_mhz(m, p, bz));
    const SpinMatrix h{p.rabi * axis + delta * sz, basis1};
    detail::apply_on_column(amp, m, expm_hermitian(h, duration).data());
  }
  return {std::move(amp), state.basis()};
}

/// Energy sweep rate (K/s) of the diabatic splitting for a |delta_m| change
/// of Fe8 projection.
inline double diabatic_rate_kelvin(double sweep_rate, int delta_m, const SystemParams& p) {
  return p.g2 * units::kBohrOverBoltzmann * std::abs(delta_m) * sweep_rate;
}

/// Probability of following the adiabatic branch (flipping the diabatic
/// state): 1 - exp(-pi Delta^2 / (2 hbar v)).
inline double lz_probability(double gap, double sweep_rate, int delta_m, const SystemParams& p) {
  if (!(gap >= 0.0)) throw PhysicsError(Errc::invalid_argument, "gap must be non-negative");
  if (!(sweep_rate > 0.0)) throw PhysicsError(Errc::invalid_argument, "sweep rate must be positive");
  if (gap == 0.0 || std::isinf(sweep_rate)) return 0.0;
  const double v = diabatic_rate_kelvin(sweep_rate, delta_m, p);
  if (v == 0.0) return 1.0;
  const double exponent = std::numbers::pi * gap * gap * units::kBoltzmannOverHbar / (2.0 * v);
  return -std::expm1(-exponent);
}

struct LzDiagnostics {
  double probability = 0;
  int steps = 0;
  double last_change = 0;
};

/// Integrates i d/dt c = H(t) c with H = 1/2 [[v t, Delta], [Delta, -v t]]
/// over the field window centred on the crossing, starting in diabatic state 1,
/// and returns the population of diabatic state 2. Uses the fourth-order
/// Magnus propagator with step doubling until two successive results differ by
/// less than 1e-4.
inline LzDiagnostics lz_numeric_detailed(double gap, double sweep_rate, int delta_m, const SystemParams& p,
                                         double window) {
  if (!(gap >= 0.0)) throw PhysicsError(Errc::invalid_argument, "gap must be non-negative");
  if (!(sweep_rate > 0.0) || !std::isfinite(sweep_rate)) {
    throw PhysicsError(Errc::invalid_argument, "sweep rate must be positive and finite");
  }
  if (!(window > 0.0)) throw PhysicsError(Errc::invalid_argument, "window must be positive");
  const double v_k = diabatic_rate_kelvin(sweep_rate, delta_m, p);
  const double half_span_k = v_k * (0.5 * window / sweep_rate);  // |epsilon| at the window edge, K
  if (gap > 0.0 && half_span_k < 20.0 * gap) {
    throw PhysicsError(Errc::invalid_argument, "window must span at least 20 gap widths on each side");
  }
  if (gap == 0.0) return {0.0, 0, 0.0};

  // Dimensionless time tau = t sqrt(v) with v = (k_B / hbar) v_k in rad/s^2: H = 1/2 [[tau, d], [d, -tau]].
  const double v = v_k * units::kBoltzmannOverHbar;
  const double sv = std::sqrt(v);
  const double d = gap * units::kBoltzmannOverHbar / sv;
  const double tau_max = half_span_k * units::kBoltzmannOverHbar / sv;

  auto run = [&](long steps) {
    const double h = 2.0 * tau_max / static_cast<double>(steps);
    const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
    const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
    cplx a0 = 1.0, a1 = 0.0;
    for (long k = 0; k < steps; ++k) {
      const double t0 = -tau_max + h * static_cast<double>(k);
      const double e1 = t0 + c1 * h;
      const double e2 = t0 + c2 * h;
      // Omega = -i (ax sx + ay sy + az sz); commutator term from [H2, H1] = (i/2) d (e2 - e1) sy.
      const double ax = 0.5 * h * d;
      const double ay = std::sqrt(3.0) / 24.0 * h * h * d * (e2 - e1);
      const double az = 0.25 * h * (e1 + e2);
      const double len = std::sqrt(ax * ax + ay * ay + az * az);
      const double cs = std::cos(len);
      const double sn = len > 0.0 ? std::sin(len) / len : 1.0;
      // exp(-i a.sigma) = cos|a| - i sin|a| (a.sigma)/|a|
      const cplx u00(cs, -sn * az);
      const cplx u01 = cplx(0.0, -sn * ax) - sn * ay;
      const cplx u10 = cplx(0.0, -sn * ax) + sn * ay;
      const cplx u11(cs, sn * az);
      const cplx b0 = u00 * a0 + u01 * a1;
      const cplx b1 = u10 * a0 + u11 * a1;
      a0 = b0;
      a1 = b1;
    }
    return std::norm(a1);
  };

  long steps = std::max<long>(256, static_cast<long>(std::ceil(8.0 * tau_max * std::max(1.0, tau_max))));
  constexpr long kCap = 1L << 26;
  steps = std::min(steps, kCap / 2);
  double prev = run(steps);
  while (true) {
    steps *= 2;
    const double cur = run(steps);
    const double change = std::abs(cur - prev);
    if (change < 1e-4) return {cur, static_cast<int>(steps), change};
    if (steps >= kCap) {
      throw PhysicsError(Errc::non_convergence, "Landau-Zener integration did not converge: " +
                                                    std::to_string(steps) + " steps, last change " +
                                                    std::to_string(change));
    }
    prev = cur;
  }
}

inline double lz_numeric(double gap, double sweep_rate, int delta_m, const SystemParams& p, double window) {
  return lz_numeric_detailed(gap, sweep_rate, delta_m, p, window).probability;
}

namespace detail {

// Diagonal-model dynamical phase over a linear ramp: E is linear in bz, so
// the integral is the duration times the midpoint energy.
inline void ramp_phases(Vector& amp, const SystemParams& p, double from, double to, double duration) {
  if (duration == 0.0) return;
  const double mid = 0.5 * (from + to);
  const double scaled = units::kBoltzmannOverHbar * duration;
  for (Eigen::Index i = 0; i < amp.size(); ++i) {
    amp(i) *= std::polar(1.0, -energy_diag(product_label(i), p, mid) * scaled);
  }
}

}  // namespace detail

/// Sweeps Bz across `window` at `rate`. Amplitudes on the crossing pair are
/// mixed at the crossing by a real rotation with flip probability from
/// lz_probability (zero Stokes phase); every component accrues its
/// diagonal-model dynamical phase along the ramp.
inline QuantumState sweep_through_crossing(const QuantumState& state, const CrossingPoint& crossing, double rate,
                                           const SystemParams& p, std::optional<SweepWindow> window = std::nullopt) {
  require_product_state(state);
  if (crossing.order != CrossingOrder::first_order) {
    throw PhysicsError(Errc::unsupported_crossing, "higher-order crossing " + crossing.state_a.str() + " / " +
                                                       crossing.state_b.str());
  }
  if (!(rate > 0.0)) throw PhysicsError(Errc::invalid_argument, "sweep rate must be positive");
  const SweepWindow w = window ? *window : selective_window(crossing, p);
  const double lo = std::min(w.from, w.to);
  const double hi = std::max(w.from, w.to);
  const bool crosses = crossing.bz_star >= lo && crossing.bz_star <= hi;
  const double pivot = crosses ? crossing.bz_star : w.to;
  auto time_for = [&](double a, double b) { return std::isinf(rate) ? 0.0 : std::abs(b - a) / rate; };

  Vector amp = state.amplitudes();
  detail::ramp_phases(amp, p, w.from, pivot, time_for(w.from, pivot));
  if (crosses) {
    const int dm = static_cast<int>(std::abs(crossing.state_a.m.twice() - crossing.state_b.m.twice()) / 2);
    const double pf = lz_probability(crossing.gap, rate, dm, p);
    const double c = std::sqrt(1.0 - pf);
    const double s = std::sqrt(pf);
    const Eigen::Index ia = product_index(crossing.state_a);
    const Eigen::Index ib = product_index(crossing.state_b);
    const cplx xa = amp(ia);
    const cplx xb = amp(ib);
    amp(ia) = c * xa - s * xb;
    amp(ib) = s * xa + c * xb;
  }
  detail::ramp_phases(amp, p, pivot, w.to, time_for(pivot, w.to));
  return {std::move(amp), state.basis()};
}

/// Populations (P_+10, P_-10) at time t of a degenerate doublet split by
/// `delta`, starting from |-10>.
inline std::pair<double, double> tunnel_oscillation(double delta, double t) {
  if (!(delta > 0.0)) throw PhysicsError(Errc::invalid_argument, "tunnel splitting must be positive");
  if (!(t >= 0.0)) throw PhysicsError(Errc::invalid_argument, "time must be non-negative");
  const double s = std::sin(0.5 * delta * units::kBoltzmannOverHbar * t);
  const double up = s * s;
  return {up, 1.0 - up};
}

}  // namespace endospin
