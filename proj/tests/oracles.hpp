#pragma once

// Reference implementations used only by the tests. None of these call into
// the library's physics; they are written from the closed forms directly.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline constexpr double kB_over_h = 2.083661912e10;   // Hz/K
inline constexpr double muB_over_kB = 0.67171381563;  // K/T
inline constexpr double muB_over_h = 1.39962449361e10;

inline double zeeman(double bz, double g) { return g * muB_over_kB * bz; }
inline double k_to_mhz(double k) { return k * kB_over_h / 1e6; }
inline double kB_over_hbar() { return 2.0 * std::numbers::pi * kB_over_h; }

/// Diagonal energy, literally -w(n+m) - D m^2 + J n m.
inline double energy(double n, double m, double w, double d, double j) { return -w * (n + m) - d * m * m + j * n * m; }

/// Spin matrices built entry by entry from <m'|S+|m> = sqrt(s(s+1) - m(m+1)).
struct Spin {
  Mat sx, sy, sz;
};

inline Spin spin(int twice_s) {
  const double s = 0.5 * twice_s;
  const int dim = twice_s + 1;
  Mat sp = Mat::Zero(dim, dim), sz = Mat::Zero(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const double m = s - r;
    sz(r, r) = m;
    if (r >= 1) {
      const double mlow = m;  // column r holds m, row r-1 holds m+1
      sp(r - 1, r) = std::sqrt(s * (s + 1) - mlow * (mlow + 1));
    }
  }
  Mat sm = sp.adjoint();
  return {(sp + sm) * 0.5, (sp - sm) * cplx(0, -0.5), sz};
}

/// exp(A) by scaling and squaring with a long Taylor series.
inline Mat expm(const Mat& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int k = 0;
  while (norm / std::pow(2.0, k) > 0.1) ++k;
  const Mat x = a / std::pow(2.0, k);
  Mat term = Mat::Identity(a.rows(), a.cols());
  Mat sum = term;
  for (int i = 1; i < 30; ++i) {
    term = term * x / static_cast<double>(i);
    sum += term;
  }
  for (int i = 0; i < k; ++i) sum = sum * sum;
  return sum;
}

/// Crossing of two diagonal levels by dense grid plus bisection.
inline double crossing_scan(double na, double ma, double nb, double mb, double d, double j, double g, double lo,
                            double hi, int grid = 200000) {
  auto f = [&](double bz) {
    const double w = zeeman(bz, g);
    return energy(na, ma, w, d, j) - energy(nb, mb, w, d, j);
  };
  double prev_b = lo, prev_f = f(lo);
  for (int i = 1; i <= grid; ++i) {
    const double b = lo + (hi - lo) * i / grid;
    const double fb = f(b);
    if (prev_f == 0.0) return prev_b;
    if ((prev_f < 0) != (fb < 0)) {
      double a = prev_b, c = b, fa = prev_f;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + c);
        const double fm = f(mid);
        if ((fa < 0) == (fm < 0)) {
          a = mid;
          fa = fm;
        } else {
          c = mid;
        }
      }
      return 0.5 * (a + c);
    }
    prev_b = b;
    prev_f = fb;
  }
  return std::nan("");
}

/// Landau-Zener transition probability from RK4 integration of
/// i dc/dtau = 1/2 [[tau, d], [d, -tau]] c, starting in the lower diabatic state.
/// Returns the probability of following the adiabatic branch (diabatic state flip).
inline double lz_rk4(double d, double tau_max, int steps) {
  using V = Eigen::Vector2cd;
  auto rhs = [&](double t, const V& c) {
    V out;
    out(0) = cplx(0, -0.5) * (t * c(0) + d * c(1));
    out(1) = cplx(0, -0.5) * (d * c(0) - t * c(1));
    return out;
  };
  V c(1.0, 0.0);
  const double h = 2.0 * tau_max / steps;
  double t = -tau_max;
  for (int i = 0; i < steps; ++i) {
    const V k1 = rhs(t, c);
    const V k2 = rhs(t + 0.5 * h, c + 0.5 * h * k1);
    const V k3 = rhs(t + 0.5 * h, c + 0.5 * h * k2);
    const V k4 = rhs(t + h, c + h * k3);
    c += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return std::norm(c(1));
}

/// Population of |m'> after rotating |s=3/2, m=3/2> by angle beta about an equatorial axis.
inline double rotated_population(double beta, double mprime) {
  const int k = static_cast<int>(std::lround(1.5 - mprime));
  static const int binom[4] = {1, 3, 3, 1};
  const double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta);
  return binom[k] * std::pow(c * c, 3 - k) * std::pow(s * s, k);
}

/// Spin-1/2 Rabi flip probability for drive Omega and detuning delta (rad/s).
inline double rabi_flip(double omega, double delta, double t) {
  const double eff = std::hypot(omega, delta);
  const double s = std::sin(0.5 * eff * t);
  return omega * omega / (eff * eff) * s * s;
}

}  // namespace oracle
