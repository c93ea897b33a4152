#include "ldspectra/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace ldspectra {

namespace {

constexpr Complex kI{0.0, 1.0};

double scale_of(const Matrix& m) { return std::max(1.0, max_abs(m)); }

}  // namespace

FockTruncation::FockTruncation(int n_max, int n_guard) : n_max_(n_max), n_guard_(n_guard) {
  if (n_max < 2) {
    throw std::invalid_argument("FockTruncation: n_max must be >= 2, got " + std::to_string(n_max));
  }
  if (n_guard < 0 || n_guard >= n_max) {
    throw std::invalid_argument("FockTruncation: need 0 <= n_guard < n_max, got n_guard=" +
                                std::to_string(n_guard) + ", n_max=" + std::to_string(n_max));
  }
}

void require_spin_label(int s) {
  if (s != 1 && s != -1) {
    throw std::invalid_argument("spin label must be +1 or -1, got " + std::to_string(s));
  }
}

OperatorMatrix::OperatorMatrix(Matrix entries, FockTruncation basis)
    : entries_(std::move(entries)), basis_(basis) {
  if (entries_.rows() != basis_.dim() || entries_.cols() != basis_.dim()) {
    throw std::invalid_argument("OperatorMatrix: shape does not match basis dimension " +
                                std::to_string(basis_.dim()));
  }
}

OperatorMatrix OperatorMatrix::hermitian(Matrix entries, FockTruncation basis) {
  OperatorMatrix op(std::move(entries), basis);
  const double dev = hermiticity_deviation(op.entries_);
  if (dev > kHermitianTol * scale_of(op.entries_)) {
    throw NotHermitian("max|A - A^dag| = " + std::to_string(dev));
  }
  op.hermitian_ = true;
  return op;
}

OperatorMatrix OperatorMatrix::unitary(Matrix entries, FockTruncation basis) {
  OperatorMatrix op(std::move(entries), basis);
  const double dev = unitarity_deviation(op.entries_);
  if (dev > kUnitaryTol) {
    throw TruncationError("max|A^dag A - I| = " + std::to_string(dev));
  }
  op.unitary_ = true;
  return op;
}

OperatorMatrix OperatorMatrix::adjoint() const {
  OperatorMatrix out(entries_.adjoint(), basis_);
  out.hermitian_ = hermitian_;
  out.unitary_ = unitary_;
  return out;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_deviation(const Matrix& m) { return max_abs(m - m.adjoint()); }

double unitarity_deviation(const Matrix& m) {
  return max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols()));
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix guarded_block(const Matrix& m, const FockTruncation& trunc) {
  const Index g = trunc.guarded_dim();
  return m.topLeftCorner(g, g);
}

Matrix exp_i_hermitian(const Matrix& generator, double theta) {
  if (theta == 0.0) return Matrix::Identity(generator.rows(), generator.cols());
  Eigen::SelfAdjointEigenSolver<Matrix> es(generator);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("exp_i_hermitian: eigendecomposition failed");
  }
  const Vector phases = (kI * theta * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix embed_fock(const Matrix& fock, const FockTruncation& trunc) {
  if (fock.rows() != trunc.n_max() + 1) {
    throw std::invalid_argument("embed_fock: size mismatch");
  }
  return Eigen::kroneckerProduct(fock, SpinMatrix::Identity()).eval();
}

Matrix embed_spin(const SpinMatrix& spin, const FockTruncation& trunc) {
  return Eigen::kroneckerProduct(Matrix::Identity(trunc.n_max() + 1, trunc.n_max() + 1), spin)
      .eval();
}

Matrix fock_annihilation(int n_max) {
  Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

LadderOperators build_ladder(const FockTruncation& trunc) {
  const Matrix a = embed_fock(fock_annihilation(trunc.n_max()), trunc);
  Matrix a_dag = a.adjoint();
  Matrix n_op = a_dag * a;
  return {OperatorMatrix(a, trunc), OperatorMatrix(std::move(a_dag), trunc),
          OperatorMatrix::hermitian(std::move(n_op), trunc)};
}

SpinMatrices spin_matrices() {
  SpinMatrices s;
  // index 0 = |g>, index 1 = |e>
  s.Sz << -0.5, 0.0, 0.0, 0.5;
  s.Sp << 0.0, 0.0, 1.0, 0.0;  // |e><g|
  s.Sm = s.Sp.adjoint();
  s.Sx = 0.5 * (s.Sp + s.Sm);
  s.Sy = (s.Sp - s.Sm) / (2.0 * kI);
  s.Dz = s.Sx;
  s.Dp = s.Sy + kI * s.Sz;
  s.Dm = s.Sy - kI * s.Sz;
  return s;
}

SpinOperators build_spin(const FockTruncation& trunc) {
  const SpinMatrices s = spin_matrices();
  auto herm = [&](const SpinMatrix& m) { return OperatorMatrix::hermitian(embed_spin(m, trunc), trunc); };
  auto plain = [&](const SpinMatrix& m) { return OperatorMatrix(embed_spin(m, trunc), trunc); };
  return {herm(s.Sz), plain(s.Sp), plain(s.Sm), herm(s.Sx),
          herm(s.Sy), herm(s.Dz), plain(s.Dp), plain(s.Dm)};
}

OperatorMatrix momentum_op(const FockTruncation& trunc, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("momentum_op: nu must be > 0");
  const Matrix a = embed_fock(fock_annihilation(trunc.n_max()), trunc);
  const Matrix skew = a.adjoint() - a;
  if (max_abs(skew + skew.adjoint()) > kHermitianTol) {
    throw NotHermitian("a^dag - a is not anti-Hermitian");
  }
  return OperatorMatrix::hermitian(kI * std::sqrt(nu / 2.0) * skew, trunc);
}

Eigen::Vector2cd dressed_spinor(int s) {
  require_spin_label(s);
  Eigen::Vector2cd f;
  f << double(s), 1.0;
  return f / std::sqrt(2.0);
}

SpinMatrix spin_T(double alpha) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("spin_T: alpha must be finite");
  return exp_i_hermitian(spin_matrices().Sy, alpha);
}

SpinMatrix spin_U1(double t, double omega_L) {
  return exp_i_hermitian(spin_matrices().Sz, -omega_L * t);
}

SpinMatrix spin_U() {
  const SpinMatrices s = spin_matrices();
  constexpr double half_pi = std::numbers::pi / 2.0;
  return exp_i_hermitian(s.Sy, half_pi) * exp_i_hermitian(s.Sx, half_pi);
}

OperatorMatrix unitary_T(double alpha, const FockTruncation& trunc) {
  return OperatorMatrix::unitary(embed_spin(spin_T(alpha), trunc), trunc);
}

OperatorMatrix unitary_U1(double t, double omega_L, const FockTruncation& trunc) {
  return OperatorMatrix::unitary(embed_spin(spin_U1(t, omega_L), trunc), trunc);
}

OperatorMatrix unitary_U(const FockTruncation& trunc) {
  return OperatorMatrix::unitary(embed_spin(spin_U(), trunc), trunc);
}

double boundary_leakage(const Matrix& op, const FockTruncation& trunc) {
  const Index top = 2 * Index(trunc.n_max());
  const Index g = trunc.guarded_dim();
  return op.block(top, 0, 2, g).colwise().squaredNorm().maxCoeff();
}

OperatorMatrix unitary_U2(double eta, const FockTruncation& trunc) {
  if (!(eta >= 0.0)) throw std::invalid_argument("unitary_U2: eta must be >= 0");
  const Matrix a = embed_fock(fock_annihilation(trunc.n_max()), trunc);
  const Matrix generator = (a.adjoint() + a) * embed_spin(spin_matrices().Sz, trunc);
  Matrix u2 = exp_i_hermitian(generator, eta);
  const double leak = boundary_leakage(u2, trunc);
  if (leak > kTruncationTol) {
    throw TruncationError("U2 leaks " + std::to_string(leak) +
                          " of guarded weight onto the boundary level; raise n_max or n_guard");
  }
  return OperatorMatrix::unitary(std::move(u2), trunc);
}

}  // namespace ldspectra
