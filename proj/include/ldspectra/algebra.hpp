#pragma once

// Truncated Fock space (x) spin-1/2 operator kernel.
//
// Basis ordering is Fock-major, spin-minor: flat index 2n is |n>|g>, 2n+1 is
// |n>|e>. Units are hbar = M = 1 throughout.

#include <complex>

#include <Eigen/Dense>

#include "ldspectra/errors.hpp"

namespace ldspectra {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;
using SpinMatrix = Eigen::Matrix2cd;

inline constexpr int kDefaultGuard = 10;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kTruncationTol = 1e-8;

/// Highest retained Fock level plus the number of levels below it that are
/// kept out of physics assertions. Guarded levels are n <= n_max - n_guard.
class FockTruncation {
 public:
  explicit FockTruncation(int n_max, int n_guard = kDefaultGuard);

  int n_max() const noexcept { return n_max_; }
  int n_guard() const noexcept { return n_guard_; }
  Index dim() const noexcept { return 2 * Index(n_max_ + 1); }
  int highest_guarded_level() const noexcept { return n_max_ - n_guard_; }
  Index guarded_dim() const noexcept { return 2 * Index(highest_guarded_level() + 1); }

  friend bool operator==(const FockTruncation&, const FockTruncation&) = default;

 private:
  int n_max_;
  int n_guard_;
};

/// (n, s) with s = +1 for |e> and s = -1 for |g>.
struct BasisIndex {
  int n = 0;
  int s = -1;

  Index flat() const noexcept { return 2 * Index(n) + (s == +1 ? 1 : 0); }
  static BasisIndex from_flat(Index i) noexcept {
    return {int(i / 2), (i % 2) == 1 ? +1 : -1};
  }
  friend auto operator<=>(const BasisIndex&, const BasisIndex&) = default;
};

// Throws std::invalid_argument unless s is +1 or -1.
void require_spin_label(int s);

/// Dense complex matrix over the truncated basis. The Hermitian / unitary
/// flags are only ever set after the corresponding check has passed.
class OperatorMatrix {
 public:
  OperatorMatrix(Matrix entries, FockTruncation basis);

  /// Throws NotHermitian if max|A - A^dag| > 1e-12 (relative to max(1, |A|)).
  static OperatorMatrix hermitian(Matrix entries, FockTruncation basis);
  /// Throws TruncationError if max|A^dag A - I| > 1e-10.
  static OperatorMatrix unitary(Matrix entries, FockTruncation basis);

  const Matrix& matrix() const noexcept { return entries_; }
  const FockTruncation& basis() const noexcept { return basis_; }
  Index dim() const noexcept { return entries_.rows(); }
  bool is_hermitian() const noexcept { return hermitian_; }
  bool is_unitary() const noexcept { return unitary_; }

  OperatorMatrix adjoint() const;

 private:
  Matrix entries_;
  FockTruncation basis_;
  bool hermitian_ = false;
  bool unitary_ = false;
};

double max_abs(const Matrix& m);
double hermiticity_deviation(const Matrix& m);
double unitarity_deviation(const Matrix& m);
Matrix commutator(const Matrix& a, const Matrix& b);

/// Top-left block on the guarded Fock levels.
Matrix guarded_block(const Matrix& m, const FockTruncation& trunc);

/// exp(i*theta*G) for Hermitian G, via eigendecomposition.
Matrix exp_i_hermitian(const Matrix& generator, double theta);

/// Embeddings into the product space: fock (x) 1_spin and 1_fock (x) spin.
Matrix embed_fock(const Matrix& fock, const FockTruncation& trunc);
Matrix embed_spin(const SpinMatrix& spin, const FockTruncation& trunc);

/// Fock-only annihilation operator of size (n_max + 1).
Matrix fock_annihilation(int n_max);

struct LadderOperators {
  OperatorMatrix a;
  OperatorMatrix a_dag;
  OperatorMatrix n_op;
};

LadderOperators build_ladder(const FockTruncation& trunc);

/// Spin-1/2 matrices in the (|g>, |e>) basis. D_+- = S_y +- i S_z, D_z = S_x.
struct SpinMatrices {
  SpinMatrix Sz, Sp, Sm, Sx, Sy, Dz, Dp, Dm;
};

SpinMatrices spin_matrices();

struct SpinOperators {
  OperatorMatrix Sz, Sp, Sm, Sx, Sy, Dz, Dp, Dm;
};

SpinOperators build_spin(const FockTruncation& trunc);

/// p = i sqrt(nu/2) (a^dag - a).
OperatorMatrix momentum_op(const FockTruncation& trunc, double nu);

/// Dressed spinor |f(s)> = (|e> + s|g>)/sqrt(2), so that S_x|f(s)> = s/2 |f(s)>
/// and S_z|f(s)> = 1/2 |f(-s)>.
Eigen::Vector2cd dressed_spinor(int s);

/// T = exp(i alpha S_y).
SpinMatrix spin_T(double alpha);
/// U1(t) = exp(-i omega_L t S_z).
SpinMatrix spin_U1(double t, double omega_L);
/// U = exp(i pi/2 S_y) exp(i pi/2 S_x), mapping S_sigma onto D_sigma.
SpinMatrix spin_U();

OperatorMatrix unitary_T(double alpha, const FockTruncation& trunc);
OperatorMatrix unitary_U1(double t, double omega_L, const FockTruncation& trunc);
/// U2 = exp(i eta (a^dag + a) S_z). Throws TruncationError when a guarded
/// column carries more than 1e-8 weight on the boundary Fock level.
OperatorMatrix unitary_U2(double eta, const FockTruncation& trunc);
OperatorMatrix unitary_U(const FockTruncation& trunc);

/// Weight that guarded columns of `op` place on the top Fock level, i.e. the
/// unitarity defect of `op` compressed away from the truncation boundary.
double boundary_leakage(const Matrix& op, const FockTruncation& trunc);

}  // namespace ldspectra
