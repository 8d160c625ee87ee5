#pragma once

// Operators and states on (3-level emitter) x (Fock space truncated at n_max).
//
// Basis ordering is emitter-major: index = level * (n_max + 1) + photon number,
// with levels ordered g, 1, 2.

#include <Eigen/Dense>

#include <complex>
#include <string_view>

namespace rabi {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Level : int { g = 0, one = 1, two = 2 };

/// Parses "g", "1" or "2".
Level parse_level(std::string_view label);
std::string_view level_name(Level level);

class HilbertDims {
 public:
  static constexpr int kEmitterLevels = 3;

  explicit HilbertDims(int n_max);

  int n_max() const noexcept { return n_max_; }
  int photon_states() const noexcept { return n_max_ + 1; }
  int total() const noexcept { return kEmitterLevels * (n_max_ + 1); }
  int index(Level level, int photons) const;

  friend bool operator==(const HilbertDims&, const HilbertDims&) = default;

 private:
  int n_max_;
};

/// Dense operator on the composite space.
class Operator {
 public:
  Operator(HilbertDims dims, Matrix entries);
  static Operator zero(HilbertDims dims);
  static Operator identity(HilbertDims dims);

  const HilbertDims& dims() const noexcept { return dims_; }
  const Matrix& matrix() const noexcept { return m_; }

  Operator adjoint() const { return {dims_, m_.adjoint()}; }
  /// max_ij |O_ij - conj(O_ji)|
  double hermiticity_error() const;

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(cplx s);

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Operator a, cplx s) { return a *= s; }
  friend Operator operator*(cplx s, Operator a) { return a *= s; }
  friend Operator operator*(const Operator& a, const Operator& b);

 private:
  HilbertDims dims_;
  Matrix m_;
};

Operator commutator(const Operator& a, const Operator& b);

class KetState {
 public:
  KetState(HilbertDims dims, Vector amplitudes);
  static KetState basis(HilbertDims dims, Level level, int photons);

  const HilbertDims& dims() const noexcept { return dims_; }
  const Vector& amplitudes() const noexcept { return psi_; }
  double norm() const { return psi_.norm(); }
  KetState normalized() const;

 private:
  HilbertDims dims_;
  Vector psi_;
};

/// Hermitian, unit-trace, positive semidefinite state.
///
/// The checked constructor enforces the tolerances below; `unchecked` is for
/// integrator output, whose validity is tracked as diagnostics instead.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-10;
  static constexpr double kTraceTol = 1e-8;
  static constexpr double kEigenTol = 1e-8;

  DensityMatrix(HilbertDims dims, Matrix entries);
  static DensityMatrix unchecked(HilbertDims dims, Matrix entries);
  static DensityMatrix pure(const KetState& psi);
  static DensityMatrix basis(HilbertDims dims, Level level, int photons);

  const HilbertDims& dims() const noexcept { return dims_; }
  const Matrix& matrix() const noexcept { return m_; }

  cplx trace() const { return m_.trace(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;
  double purity() const;

 private:
  struct NoCheck {};
  DensityMatrix(HilbertDims dims, Matrix entries, NoCheck);

  HilbertDims dims_;
  Matrix m_;
};

/// Cavity destruction operator on a Fock space of size n_max + 1.
Matrix annihilation_operator(int n_max);

/// |alpha><beta| on the 3-level emitter.
Matrix emitter_transition(Level alpha, Level beta);

/// emitter (x) cavity. Either factor may be the identity of the right size.
Operator tensor_embed(const Matrix& emitter_op, const Matrix& cavity_op, HilbertDims dims);
Operator embed_emitter(const Matrix& emitter_op, HilbertDims dims);
Operator embed_cavity(const Matrix& cavity_op, HilbertDims dims);

/// Tr(rho O)
cplx expectation(const DensityMatrix& rho, const Operator& op);
cplx expectation(const KetState& psi, const Operator& op);

/// Traces out the emitter; returns the (n_max+1)^2 cavity matrix.
Matrix partial_trace_emitter(const DensityMatrix& rho);

/// Total photon population in the top Fock level n = n_max.
double top_fock_population(const DensityMatrix& rho);

}  // namespace rabi
