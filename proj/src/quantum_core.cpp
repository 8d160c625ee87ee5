#include "rabi/quantum_core.hpp"

#include "rabi/errors.hpp"

#include <cmath>
#include <string>

namespace rabi {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_same_dims(const HilbertDims& a, const HilbertDims& b) {
  if (!(a == b)) {
    throw InvalidDimension("dimension mismatch: n_max " + std::to_string(a.n_max()) + " vs " +
                           std::to_string(b.n_max()));
  }
}

void require_shape(const Matrix& m, int n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    throw InvalidDimension(std::string(what) + " must be " + std::to_string(n) + "x" +
                           std::to_string(n) + ", got " + std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()));
  }
}

}  // namespace

Level parse_level(std::string_view label) {
  if (label == "g") return Level::g;
  if (label == "1") return Level::one;
  if (label == "2") return Level::two;
  throw ValidationError("unknown emitter level '" + std::string(label) + "' (expected g, 1 or 2)");
}

std::string_view level_name(Level level) {
  switch (level) {
    case Level::g: return "g";
    case Level::one: return "1";
    case Level::two: return "2";
  }
  return "?";
}

HilbertDims::HilbertDims(int n_max) : n_max_(n_max) {
  if (n_max < 1) throw InvalidDimension("n_max must be >= 1, got " + std::to_string(n_max));
}

int HilbertDims::index(Level level, int photons) const {
  if (photons < 0 || photons > n_max_) {
    throw InvalidDimension("photon number " + std::to_string(photons) + " outside [0, " +
                           std::to_string(n_max_) + "]");
  }
  return static_cast<int>(level) * photon_states() + photons;
}

// ---- Operator ----

Operator::Operator(HilbertDims dims, Matrix entries) : dims_(dims), m_(std::move(entries)) {
  require_shape(m_, dims_.total(), "operator");
}

Operator Operator::zero(HilbertDims dims) {
  return {dims, Matrix::Zero(dims.total(), dims.total())};
}

Operator Operator::identity(HilbertDims dims) {
  return {dims, Matrix::Identity(dims.total(), dims.total())};
}

double Operator::hermiticity_error() const { return max_abs(m_ - m_.adjoint()); }

Operator& Operator::operator+=(const Operator& rhs) {
  require_same_dims(dims_, rhs.dims_);
  m_ += rhs.m_;
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  require_same_dims(dims_, rhs.dims_);
  m_ -= rhs.m_;
  return *this;
}

Operator& Operator::operator*=(cplx s) {
  m_ *= s;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dims(a.dims_, b.dims_);
  return {a.dims_, a.m_ * b.m_};
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

// ---- KetState ----

KetState::KetState(HilbertDims dims, Vector amplitudes) : dims_(dims), psi_(std::move(amplitudes)) {
  if (psi_.size() != dims_.total()) {
    throw InvalidDimension("ket length " + std::to_string(psi_.size()) + " != " +
                           std::to_string(dims_.total()));
  }
}

KetState KetState::basis(HilbertDims dims, Level level, int photons) {
  Vector v = Vector::Zero(dims.total());
  v(dims.index(level, photons)) = 1.0;
  return {dims, std::move(v)};
}

KetState KetState::normalized() const {
  const double n = psi_.norm();
  if (n == 0.0) throw ValidationError("cannot normalize the zero vector");
  return {dims_, psi_ / n};
}

// ---- DensityMatrix ----

DensityMatrix::DensityMatrix(HilbertDims dims, Matrix entries, NoCheck)
    : dims_(dims), m_(std::move(entries)) {
  require_shape(m_, dims_.total(), "density matrix");
}

DensityMatrix::DensityMatrix(HilbertDims dims, Matrix entries)
    : DensityMatrix(dims, std::move(entries), NoCheck{}) {
  if (hermiticity_error() > kHermitianTol) throw ValidationError("density matrix is not Hermitian");
  if (std::abs(trace() - 1.0) > kTraceTol) throw ValidationError("density matrix trace != 1");
  if (min_eigenvalue() < -kEigenTol) throw ValidationError("density matrix is not positive");
}

DensityMatrix DensityMatrix::unchecked(HilbertDims dims, Matrix entries) {
  return {dims, std::move(entries), NoCheck{}};
}

DensityMatrix DensityMatrix::pure(const KetState& psi) {
  const Vector& v = psi.amplitudes();
  return {psi.dims(), v * v.adjoint()};
}

DensityMatrix DensityMatrix::basis(HilbertDims dims, Level level, int photons) {
  return pure(KetState::basis(dims, level, photons));
}

double DensityMatrix::hermiticity_error() const { return max_abs(m_ - m_.adjoint()); }

double DensityMatrix::min_eigenvalue() const {
  // Symmetrize so roundoff in the anti-Hermitian part cannot leak into the spectrum.
  const Matrix h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

// ---- constructors ----

Matrix annihilation_operator(int n_max) {
  if (n_max < 1) throw InvalidDimension("n_max must be >= 1, got " + std::to_string(n_max));
  Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n < n_max; ++n) a(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
  return a;
}

Matrix emitter_transition(Level alpha, Level beta) {
  Matrix s = Matrix::Zero(HilbertDims::kEmitterLevels, HilbertDims::kEmitterLevels);
  s(static_cast<int>(alpha), static_cast<int>(beta)) = 1.0;
  return s;
}

Operator tensor_embed(const Matrix& emitter_op, const Matrix& cavity_op, HilbertDims dims) {
  require_shape(emitter_op, HilbertDims::kEmitterLevels, "emitter factor");
  require_shape(cavity_op, dims.photon_states(), "cavity factor");
  const int nc = dims.photon_states();
  Matrix out = Matrix::Zero(dims.total(), dims.total());
  for (int i = 0; i < HilbertDims::kEmitterLevels; ++i) {
    for (int j = 0; j < HilbertDims::kEmitterLevels; ++j) {
      const cplx e = emitter_op(i, j);
      if (e != 0.0) out.block(i * nc, j * nc, nc, nc) = e * cavity_op;
    }
  }
  return {dims, std::move(out)};
}

Operator embed_emitter(const Matrix& emitter_op, HilbertDims dims) {
  return tensor_embed(emitter_op, Matrix::Identity(dims.photon_states(), dims.photon_states()), dims);
}

Operator embed_cavity(const Matrix& cavity_op, HilbertDims dims) {
  return tensor_embed(Matrix::Identity(3, 3), cavity_op, dims);
}

cplx expectation(const DensityMatrix& rho, const Operator& op) {
  require_same_dims(rho.dims(), op.dims());
  // Tr(rho O) = sum_ij rho_ij O_ji without forming the product.
  return (rho.matrix().transpose().cwiseProduct(op.matrix())).sum();
}

cplx expectation(const KetState& psi, const Operator& op) {
  require_same_dims(psi.dims(), op.dims());
  return psi.amplitudes().dot(op.matrix() * psi.amplitudes());
}

Matrix partial_trace_emitter(const DensityMatrix& rho) {
  const int nc = rho.dims().photon_states();
  Matrix out = Matrix::Zero(nc, nc);
  for (int e = 0; e < HilbertDims::kEmitterLevels; ++e) out += rho.matrix().block(e * nc, e * nc, nc, nc);
  return out;
}

double top_fock_population(const DensityMatrix& rho) {
  const HilbertDims& d = rho.dims();
  double p = 0.0;
  for (int e = 0; e < HilbertDims::kEmitterLevels; ++e) {
    const int i = d.index(static_cast<Level>(e), d.n_max());
    p += rho.matrix()(i, i).real();
  }
  return p;
}

}  // namespace rabi
