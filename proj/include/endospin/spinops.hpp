#pragma once

// Angular-momentum matrices, Kronecker products over the fullerene (x) Fe8
// product space, and the unitary exp(-i H t) of a Hermitian generator.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstdlib>
#include <string>
#include <vector>

#include "endospin/error.hpp"

namespace endospin {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// A spin projection or spin length stored exactly as twice its value.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(int whole) : twice_(2 * whole) {}  // NOLINT(google-explicit-constructor)

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }

  /// Rejects values that are not a multiple of 1/2.
  static HalfInt from_double(double x) {
    const double twice = 2.0 * x;
    const double rounded = std::round(twice);
    if (!std::isfinite(x) || std::abs(twice - rounded) > 1e-9 || std::abs(rounded) > 1e6) {
      throw PhysicsError(Errc::invalid_argument, "not a half-integer: " + std::to_string(x));
    }
    return from_twice(static_cast<int>(rounded));
  }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }

  std::string str() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt operator+(HalfInt o) const { return from_twice(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return from_twice(twice_ - o.twice_); }
  constexpr auto operator<=>(const HalfInt&) const = default;

 private:
  int twice_ = 0;
};

/// Projections of each tensor factor; one entry for a single spin, two for
/// the (n, m) product basis.
struct BasisLabel {
  std::vector<HalfInt> proj;

  std::string str() const {
    std::string s = "|";
    for (std::size_t i = 0; i < proj.size(); ++i) {
      if (i) s += ",";
      s += proj[i].str();
    }
    return s + ">";
  }
  bool operator==(const BasisLabel&) const = default;
};

/// Single-spin basis m = s, s-1, ..., -s.
inline std::vector<BasisLabel> spin_basis(HalfInt s) {
  std::vector<BasisLabel> basis;
  for (int tm = s.twice(); tm >= -s.twice(); tm -= 2) basis.push_back({{HalfInt::from_twice(tm)}});
  return basis;
}

/// Dense complex matrix tagged with the basis it acts on.
class SpinMatrix {
 public:
  SpinMatrix() = default;
  SpinMatrix(Matrix data, std::vector<BasisLabel> basis) : data_(std::move(data)), basis_(std::move(basis)) {
    if (data_.rows() != data_.cols() || static_cast<std::size_t>(data_.rows()) != basis_.size()) {
      throw PhysicsError(Errc::invalid_argument, "matrix shape does not match its basis");
    }
  }

  static SpinMatrix identity(std::vector<BasisLabel> basis) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    return {Matrix::Identity(n, n), std::move(basis)};
  }
  static SpinMatrix zero(std::vector<BasisLabel> basis) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    return {Matrix::Zero(n, n), std::move(basis)};
  }

  Eigen::Index dim() const { return data_.rows(); }
  const Matrix& data() const { return data_; }
  Matrix& data() { return data_; }
  const std::vector<BasisLabel>& basis() const { return basis_; }
  cplx operator()(Eigen::Index r, Eigen::Index c) const { return data_(r, c); }

  SpinMatrix adjoint() const { return {data_.adjoint(), basis_}; }

  double hermiticity_defect() const { return (data_ - data_.adjoint()).cwiseAbs().maxCoeff(); }
  double unitarity_defect() const {
    return (data_.adjoint() * data_ - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  }
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() < tol; }
  bool is_unitary(double tol = 1e-10) const { return unitarity_defect() < tol; }
  bool is_diagonal() const {
    Matrix off = data_;
    off.diagonal().setZero();
    return off.cwiseAbs().maxCoeff() == 0.0;
  }

  SpinMatrix& operator+=(const SpinMatrix& o) {
    check_same_basis(o);
    data_ += o.data_;
    return *this;
  }
  SpinMatrix& operator-=(const SpinMatrix& o) {
    check_same_basis(o);
    data_ -= o.data_;
    return *this;
  }
  SpinMatrix& operator*=(cplx s) {
    data_ *= s;
    return *this;
  }

  friend SpinMatrix operator+(SpinMatrix a, const SpinMatrix& b) { return a += b; }
  friend SpinMatrix operator-(SpinMatrix a, const SpinMatrix& b) { return a -= b; }
  friend SpinMatrix operator*(SpinMatrix a, cplx s) { return a *= s; }
  friend SpinMatrix operator*(cplx s, SpinMatrix a) { return a *= s; }
  friend SpinMatrix operator*(const SpinMatrix& a, const SpinMatrix& b) {
    a.check_same_basis(b);
    return {a.data_ * b.data_, a.basis_};
  }

 private:
  void check_same_basis(const SpinMatrix& o) const {
    if (basis_ != o.basis_) throw PhysicsError(Errc::invalid_argument, "basis mismatch");
  }

  Matrix data_;
  std::vector<BasisLabel> basis_;
};

struct SpinOperators {
  HalfInt s;
  SpinMatrix sz, sp, sm, sx, sy;
};

inline SpinOperators spin_operators(HalfInt s) {
  if (s.twice() < 0) throw PhysicsError(Errc::invalid_argument, "spin must be non-negative");
  auto basis = spin_basis(s);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Matrix sz = Matrix::Zero(dim, dim);
  Matrix sp = Matrix::Zero(dim, dim);
  const double ss1 = s.value() * (s.value() + 1.0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double m = basis[static_cast<std::size_t>(i)].proj[0].value();
    sz(i, i) = m;
    // S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>, and |m+1> sits one row above.
    if (i > 0) sp(i - 1, i) = std::sqrt(ss1 - m * (m + 1.0));
  }
  Matrix sm = sp.adjoint();
  Matrix sx = 0.5 * (sp + sm);
  Matrix sy = (sp - sm) / cplx(0.0, 2.0);
  return {s,
          {sz, basis},
          {sp, basis},
          {sm, basis},
          {sx, basis},
          {sy, basis}};
}

inline SpinOperators spin_operators(double s) { return spin_operators(HalfInt::from_double(s)); }

/// Kronecker product; the combined basis is ordered first by the left factor.
inline SpinMatrix tensor(const SpinMatrix& a, const SpinMatrix& b) {
  const Eigen::Index da = a.dim();
  const Eigen::Index db = b.dim();
  Matrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a(i, j) * b.data();

  std::vector<BasisLabel> basis;
  basis.reserve(static_cast<std::size_t>(da * db));
  for (const auto& la : a.basis())
    for (const auto& lb : b.basis()) {
      BasisLabel l = la;
      l.proj.insert(l.proj.end(), lb.proj.begin(), lb.proj.end());
      basis.push_back(std::move(l));
    }
  return {std::move(out), std::move(basis)};
}

inline void require_hermitian(const SpinMatrix& h) {
  const double scale = std::max(1.0, h.data().cwiseAbs().maxCoeff());
  if (h.hermiticity_defect() > 1e-12 * scale) {
    throw PhysicsError(Errc::invalid_argument, "generator is not Hermitian");
  }
}

/// exp(-i h t) through the eigendecomposition h = V diag(lambda) V^dagger.
inline SpinMatrix expm_hermitian(const SpinMatrix& h, double t) {
  require_hermitian(h);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.data());
  const Eigen::VectorXd& lambda = es.eigenvalues();
  Vector phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) phases(k) = std::polar(1.0, -lambda(k) * t);
  const Matrix& v = es.eigenvectors();
  return {v * phases.asDiagonal() * v.adjoint(), h.basis()};
}

/// Normalized amplitude vector over a labelled basis.
class QuantumState {
 public:
  QuantumState() = default;
  QuantumState(Vector amplitudes, std::vector<BasisLabel> basis)
      : amp_(std::move(amplitudes)), basis_(std::move(basis)) {
    if (static_cast<std::size_t>(amp_.size()) != basis_.size()) {
      throw PhysicsError(Errc::invalid_argument, "amplitude count does not match basis");
    }
  }

  static QuantumState basis_state(std::vector<BasisLabel> basis, const BasisLabel& which) {
    auto it = std::find(basis.begin(), basis.end(), which);
    if (it == basis.end()) throw PhysicsError(Errc::invalid_argument, "label not in basis: " + which.str());
    Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.size()));
    v(it - basis.begin()) = 1.0;
    return {std::move(v), std::move(basis)};
  }

  Eigen::Index dim() const { return amp_.size(); }
  const Vector& amplitudes() const { return amp_; }
  Vector& amplitudes() { return amp_; }
  const std::vector<BasisLabel>& basis() const { return basis_; }

  double norm() const { return amp_.norm(); }
  double population(Eigen::Index i) const { return std::norm(amp_(i)); }

  Eigen::Index index_of(const BasisLabel& l) const {
    auto it = std::find(basis_.begin(), basis_.end(), l);
    if (it == basis_.end()) throw PhysicsError(Errc::invalid_argument, "label not in basis: " + l.str());
    return it - basis_.begin();
  }

  QuantumState& normalize() {
    const double n = norm();
    if (!(n > 0.0)) throw PhysicsError(Errc::invalid_argument, "cannot normalize a zero state");
    amp_ /= n;
    return *this;
  }

  QuantumState apply(const SpinMatrix& op) const {
    if (op.basis() != basis_) throw PhysicsError(Errc::invalid_argument, "operator acts on a different basis");
    return {op.data() * amp_, basis_};
  }

  cplx inner(const QuantumState& o) const { return amp_.dot(o.amp_); }

 private:
  Vector amp_;
  std::vector<BasisLabel> basis_;
};

}  // namespace endospin
