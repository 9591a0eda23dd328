#pragma once

// Closed-form diagonal-model energies, degenerate transition frequencies,
// level crossings versus Bz, and avoided-crossing gaps of the full model.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "endospin/hamiltonian.hpp"

namespace endospin {

struct EnergyLevel {
  StateLabel state;   // dominant product-basis state
  double energy = 0;  // K
  double bz = 0;      // T
  double weight = 1;  // |<state|eigenvector>|^2
};

enum class CrossingOrder { first_order, higher_order };

inline const char* to_string(CrossingOrder o) {
  return o == CrossingOrder::first_order ? "first_order" : "higher_order";
}

/// Field at which two diagonal-model levels are degenerate. `gap` is zero for
/// the diagonal model and is filled in by avoided_gap or by the caller.
struct CrossingPoint {
  StateLabel state_a;
  StateLabel state_b;
  double bz_star = 0;     // T
  double omega_star = 0;  // K, Zeeman energy g2 mu_B bz_star
  double gap = 0;         // K
  CrossingOrder order = CrossingOrder::first_order;
  bool negative_field = false;
};

inline void require_fullerene(HalfInt n) {
  if (!valid_fullerene_projection(n)) throw PhysicsError(Errc::invalid_argument, "n must be one of +-1/2, +-3/2");
}
inline void require_fe8(HalfInt m) {
  if (!valid_fe8_projection(m)) throw PhysicsError(Errc::invalid_argument, "m must be an integer in -10..10");
}

/// -w(n + m) - D m^2 + J n m.
inline double energy_diag(HalfInt n, HalfInt m, double omega, double d, double j) {
  require_fullerene(n);
  require_fe8(m);
  const double nv = n.value();
  const double mv = m.value();
  return -omega * (nv + mv) - d * mv * mv + j * nv * mv;
}

/// Diagonal-model energy at field bz with per-spin g-factors.
inline double energy_diag(const StateLabel& s, const SystemParams& p, double bz) {
  require_valid(s);
  const double n = s.n.value();
  const double m = s.m.value();
  return -p.omega1(bz) * n - p.omega2(bz) * m - p.d_axial * m * m + p.j_eff * n * m;
}

/// E(n, m) - E(n - 1, m) = -w + m J, the same for every adjacent n pair.
inline double transition_freq(HalfInt m, double omega, double j) {
  require_fe8(m);
  return -omega + m.value() * j;
}

/// The eight states n in {+-1/2, +-3/2} x m in {10, -10}.
inline std::vector<StateLabel> low_lying_states() {
  std::vector<StateLabel> out;
  for (int tn = 3; tn >= -3; tn -= 2)
    for (int m : {10, -10}) out.push_back({HalfInt::from_twice(tn), HalfInt(m)});
  return out;
}

inline CrossingPoint find_crossing(const StateLabel& a, const StateLabel& b, const SystemParams& p) {
  require_valid(a);
  require_valid(b);
  if (a == b) throw PhysicsError(Errc::no_crossing, "identical states " + a.str());
  const double na = a.n.value(), ma = a.m.value();
  const double nb = b.n.value(), mb = b.m.value();
  // E_a - E_b = -bz mu (g1 dn + g2 dm) - D (ma^2 - mb^2) + J (na ma - nb mb)
  const double slope = units::kBohrOverBoltzmann * (p.g1 * (na - nb) + p.g2 * (ma - mb));
  if (std::abs(slope) < 1e-15) throw PhysicsError(Errc::no_crossing, "parallel levels " + a.str() + " and " + b.str());
  const double offset = p.j_eff * (na * ma - nb * mb) - p.d_axial * (ma * ma - mb * mb);
  CrossingPoint cp;
  cp.state_a = a;
  cp.state_b = b;
  cp.bz_star = offset / slope;
  if (cp.bz_star == 0.0) cp.bz_star = 0.0;  // drop a signed zero
  cp.omega_star = p.g2 * units::kBohrOverBoltzmann * cp.bz_star;
  cp.order = a.n == b.n ? CrossingOrder::first_order : CrossingOrder::higher_order;
  cp.negative_field = cp.bz_star < 0.0;
  return cp;
}

/// All pairwise crossings among `states` with bz_star in [bz_lo, bz_hi],
/// sorted by field. Parallel pairs are skipped.
inline std::vector<CrossingPoint> enumerate_crossings(const SystemParams& p, double bz_lo, double bz_hi,
                                                      const std::vector<StateLabel>& states = low_lying_states(),
                                                      bool first_order_only = false) {
  if (!(bz_lo <= bz_hi)) throw PhysicsError(Errc::invalid_argument, "field range must be ordered");
  std::vector<CrossingPoint> out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t k = i + 1; k < states.size(); ++k) {
      if (first_order_only && states[i].n != states[k].n) continue;
      try {
        CrossingPoint cp = find_crossing(states[i], states[k], p);
        if (cp.bz_star >= bz_lo && cp.bz_star <= bz_hi) out.push_back(cp);
      } catch (const PhysicsError& e) {
        if (e.code() != Errc::no_crossing) throw;
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const CrossingPoint& x, const CrossingPoint& y) {
    if (x.bz_star != y.bz_star) return x.bz_star < y.bz_star;
    if (x.order != y.order) return x.order == CrossingOrder::first_order;
    return std::tie(x.state_a, x.state_b) > std::tie(y.state_a, y.state_b);
  });
  return out;
}

/// The first-order (same n, m = +-10) crossing for fullerene projection n.
inline CrossingPoint ground_doublet_crossing(HalfInt n, const SystemParams& p) {
  return find_crossing({n, HalfInt(-10)}, {n, HalfInt(10)}, p);
}

struct SweepWindow {
  double from = 0;  // T
  double to = 0;    // T
};

/// Symmetric field window around a first-order crossing that stays clear of
/// every other first-order ground-doublet crossing: the half-width is
/// `fraction` of the distance to the nearest one.
inline SweepWindow selective_window(const CrossingPoint& cp, const SystemParams& p, double fraction = 0.4) {
  double nearest = std::numeric_limits<double>::infinity();
  for (int tn = 3; tn >= -3; tn -= 2) {
    const HalfInt n = HalfInt::from_twice(tn);
    if (n == cp.state_a.n) continue;
    try {
      nearest = std::min(nearest, std::abs(ground_doublet_crossing(n, p).bz_star - cp.bz_star));
    } catch (const PhysicsError&) {
    }
  }
  if (!std::isfinite(nearest) || nearest <= 0.0) {
    throw PhysicsError(Errc::non_selective_sweep, "crossings coincide; no selective window exists");
  }
  const double half = fraction * nearest;
  return {cp.bz_star - half, cp.bz_star + half};
}

/// First-order ground-doublet crossings (other than `skip_n`'s) inside [lo, hi].
inline std::vector<CrossingPoint> first_order_in_window(const SystemParams& p, double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  std::vector<CrossingPoint> out;
  for (int tn = 3; tn >= -3; tn -= 2) {
    CrossingPoint cp = ground_doublet_crossing(HalfInt::from_twice(tn), p);
    if (cp.bz_star >= lo && cp.bz_star <= hi) out.push_back(cp);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.bz_star < y.bz_star; });
  return out;
}

/// Sorted eigenvalues of build_total, each labelled by its dominant basis state.
inline std::vector<EnergyLevel> full_spectrum(const SystemParams& p, double bz, bool include_transverse) {
  const SpinMatrix h = build_total(p, bz, include_transverse);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.data());
  std::vector<EnergyLevel> levels;
  levels.reserve(kProductDim);
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    Eigen::Index dominant = 0;
    const double w = es.eigenvectors().col(k).cwiseAbs2().maxCoeff(&dominant);
    levels.push_back({product_label(dominant), es.eigenvalues()(k), bz, w});
  }
  return levels;
}

namespace detail {

struct BranchPair {
  double lower = 0;
  double upper = 0;
};

// The two eigenstates with the largest combined weight on {a, b}.
inline BranchPair identify_branches(const SystemParams& p, double bz, Eigen::Index ia, Eigen::Index ib) {
  const SpinMatrix h = build_total(p, bz, true);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.data());
  const Matrix& v = es.eigenvectors();
  std::array<Eigen::Index, 2> best{-1, -1};
  std::array<double, 2> best_w{-1.0, -1.0};
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    const double w = std::norm(v(ia, k)) + std::norm(v(ib, k));
    if (w > best_w[0]) {
      best_w[1] = best_w[0];
      best[1] = best[0];
      best_w[0] = w;
      best[0] = k;
    } else if (w > best_w[1]) {
      best_w[1] = w;
      best[1] = k;
    }
  }
  if (best_w[1] < 0.5) {
    throw PhysicsError(Errc::ambiguous_branches, "crossing pair mixes more than 50% with other states");
  }
  const double e0 = es.eigenvalues()(best[0]);
  const double e1 = es.eigenvalues()(best[1]);
  return {std::min(e0, e1), std::max(e0, e1)};
}

}  // namespace detail

/// Minimum separation of the two adiabatic branches that carry the pair (a, b)
/// in the full model with the transverse term, searched over a shrinking field
/// window around the diagonal-model crossing.
inline double avoided_gap(const StateLabel& a, const StateLabel& b, const SystemParams& p) {
  const CrossingPoint cp = find_crossing(a, b, p);
  const Eigen::Index ia = product_index(a);
  const Eigen::Index ib = product_index(b);
  auto separation = [&](double bz) {
    const auto br = detail::identify_branches(p, bz, ia, ib);
    return br.upper - br.lower;
  };

  constexpr int kGrid = 24;
  double centre = cp.bz_star;
  double half = std::max(2e-3, 0.1 * std::abs(cp.bz_star));
  double previous = std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 80; ++iter) {
    double best_bz = centre;
    best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kGrid; ++i) {
      const double bz = centre - half + 2.0 * half * i / kGrid;
      const double g = separation(bz);
      if (g < best) {
        best = g;
        best_bz = bz;
      }
    }
    const double change = std::abs(best - previous);
    const bool converged = change <= 1e-3 * best || change < 1e-13;
    if (converged && half < 1e-9 * std::max(1e-3, std::abs(centre))) break;
    previous = best;
    centre = best_bz;
    half *= 4.0 / kGrid;
  }
  return best;
}

struct WeakCouplingReport {
  std::vector<double> full;      // eigenvalues of build_total, paired order
  std::vector<double> diagonal;  // matching build_hc entries
  double max_deviation = 0;
  double delta_min = 0;  // smallest unperturbed spacing between dipolar-connected states
  double bound = 0;      // 10 J^2 / delta_min
  bool sector_matched = true;
  bool ok() const { return max_deviation < bound; }
};

/// Compares the full model (transverse off) against the diagonal model.
/// Eigenvalues are paired in sorted order inside each n-sector, the sector of
/// a full-model eigenvector being that of its dominant basis state.
inline WeakCouplingReport weak_coupling_check(const SystemParams& p, double bz) {
  const SpinMatrix hc = build_hc(p, bz);
  const SpinMatrix hi = build_hi_full(p);
  WeakCouplingReport r;

  r.delta_min = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < kProductDim; ++i)
    for (Eigen::Index k = 0; k < kProductDim; ++k) {
      if (i == k || std::abs(hi(i, k)) < 1e-15) continue;
      const double spacing = std::abs(hc(i, i).real() - hc(k, k).real());
      if (spacing > 0.0) r.delta_min = std::min(r.delta_min, spacing);
    }
  r.bound = 10.0 * p.j_eff * p.j_eff / r.delta_min;

  const SpinMatrix h = build_total(p, bz, false);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.data());
  std::array<std::vector<double>, kFullereneDim> full_by_sector;
  std::array<std::vector<double>, kFullereneDim> diag_by_sector;
  for (Eigen::Index k = 0; k < kProductDim; ++k) {
    Eigen::Index dominant = 0;
    es.eigenvectors().col(k).cwiseAbs2().maxCoeff(&dominant);
    full_by_sector[static_cast<std::size_t>(dominant / kFe8Dim)].push_back(es.eigenvalues()(k));
    diag_by_sector[static_cast<std::size_t>(k / kFe8Dim)].push_back(hc(k, k).real());
  }
  for (std::size_t s = 0; s < kFullereneDim; ++s) {
    if (full_by_sector[s].size() != diag_by_sector[s].size()) r.sector_matched = false;
  }
  auto pair_up = [&](std::vector<double> f, std::vector<double> d) {
    std::sort(f.begin(), f.end());
    std::sort(d.begin(), d.end());
    for (std::size_t i = 0; i < f.size(); ++i) {
      r.full.push_back(f[i]);
      r.diagonal.push_back(d[i]);
      r.max_deviation = std::max(r.max_deviation, std::abs(f[i] - d[i]));
    }
  };
  if (r.sector_matched) {
    for (std::size_t s = 0; s < kFullereneDim; ++s) pair_up(full_by_sector[s], diag_by_sector[s]);
  } else {
    std::vector<double> f(es.eigenvalues().data(), es.eigenvalues().data() + kProductDim);
    std::vector<double> d;
    for (Eigen::Index k = 0; k < kProductDim; ++k) d.push_back(hc(k, k).real());
    pair_up(std::move(f), std::move(d));
  }
  return r;
}

}  // namespace endospin
