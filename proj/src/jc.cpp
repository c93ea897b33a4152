#include "ldspectra/jc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ldspectra {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kAlgebraTol = 1e-10;

void require_resonance(const ModelParams& p) {
  p.validate();
  if (!p.resonant()) throw ResonanceRequired("the JC reduction assumes delta = 0");
}

// Diagonal 0/1 matrix selecting the guarded Fock levels.
Matrix guarded_projector(const FockTruncation& trunc) {
  Vector d = Vector::Zero(trunc.dim());
  d.head(trunc.guarded_dim()).setOnes();
  return d.asDiagonal();
}

AlgebraCheck check(std::string name, const Matrix& projector, const Matrix& lhs, const Matrix& rhs) {
  AlgebraCheck c;
  c.name = std::move(name);
  c.deviation = max_abs(projector * (lhs - rhs) * projector);
  c.pass = c.deviation <= kAlgebraTol;
  return c;
}

}  // namespace

bool AlgebraReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const AlgebraCheck& c) { return c.pass; });
}

JCLevels jc_eigenvalues(const ModelParams& p, int n) {
  require_resonance(p);
  if (n < 0) throw std::invalid_argument("jc_eigenvalues: n must be >= 0");
  const double shift = p.scalar_shift();
  if (n == 0) return {-p.K + shift, std::nullopt};
  const double gap = p.nu - 2.0 * p.K;
  const double g = p.jc_coupling();
  const double root = std::sqrt(0.25 * gap * gap + g * g * n);
  const double centre = p.nu * (n - 0.5) + shift;
  return {centre - root, centre + root};
}

JCBlockSet jc_blocks(const ModelParams& p, const FockTruncation& trunc) {
  require_resonance(p);
  const Matrix u = unitary_U(trunc).matrix();
  const Matrix rotated = guarded_block(u * build_H_JC(p, trunc).matrix() * u.adjoint(), trunc);

  JCBlockSet set;
  set.ground = rotated(0, 0).real();
  Matrix rest = rotated;
  rest(0, 0) = 0.0;
  const int top = trunc.highest_guarded_level();
  for (int n = 1; n <= top; ++n) {
    const Index i = 2 * Index(n) - 1;
    JCBlock b;
    b.n = n;
    b.matrix = rotated.block<2, 2>(i, i).real();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(b.matrix);
    b.eigenvalues = es.eigenvalues();
    set.blocks.push_back(b);
    rest.block<2, 2>(i, i).setZero();
  }
  // (top, e) pairs with (top + 1, g), which lies outside the guarded block.
  const Index last = rotated.rows() - 1;
  rest(last, last) = 0.0;
  set.off_block_max = max_abs(rest);
  return set;
}

AlgebraReport verify_dynamical_algebra(const ModelParams& p, const FockTruncation& trunc) {
  require_resonance(p);
  const LadderOperators lad = build_ladder(trunc);
  const SpinOperators spin = build_spin(trunc);
  const Matrix& a = lad.a.matrix();
  const Matrix& ad = lad.a_dag.matrix();
  const Matrix& Dz = spin.Dz.matrix();
  const Matrix raise = spin.Dp.matrix() * a;   // D+ a
  const Matrix lower = spin.Dm.matrix() * ad;  // D- a^dag
  const Matrix id = Matrix::Identity(trunc.dim(), trunc.dim());
  const Matrix N = lad.n_op.matrix() + Dz + 0.5 * id;
  const Matrix h_jc = build_H_JC(p, trunc).matrix();

  Eigen::SelfAdjointEigenSolver<Matrix> es(N);
  const Eigen::VectorXd lam = es.eigenvalues();
  if (lam.minCoeff() < -kAlgebraTol) {
    throw SingularCharge("N has eigenvalue " + std::to_string(lam.minCoeff()));
  }
  Eigen::VectorXd sqrt_lam(lam.size()), inv_sqrt_lam(lam.size()), positive(lam.size());
  for (Index i = 0; i < lam.size(); ++i) {
    const bool pos = lam(i) > kAlgebraTol;
    sqrt_lam(i) = pos ? std::sqrt(lam(i)) : 0.0;
    inv_sqrt_lam(i) = pos ? 1.0 / std::sqrt(lam(i)) : 0.0;
    positive(i) = pos ? 1.0 : 0.0;
  }
  const Matrix& V = es.eigenvectors();
  const Matrix sqrt_N = V * sqrt_lam.cast<Complex>().asDiagonal() * V.adjoint();
  const Matrix inv_sqrt_N = V * inv_sqrt_lam.cast<Complex>().asDiagonal() * V.adjoint();
  const Matrix pos_proj = V * positive.cast<Complex>().asDiagonal() * V.adjoint();

  const Matrix guard = guarded_projector(trunc);
  const Matrix guard_pos = guard * pos_proj;

  const Matrix Jz = Dz;
  const Matrix Jp = inv_sqrt_N * raise;
  const Matrix Jm = inv_sqrt_N * lower;
  const Matrix zero = Matrix::Zero(trunc.dim(), trunc.dim());

  Matrix h_alg = p.nu * (N - 0.5 * id) + (2.0 * p.K - p.nu) * Jz + p.jc_coupling() * sqrt_N * (Jp + Jm);
  h_alg.diagonal().array() += p.scalar_shift();

  AlgebraReport rep;
  rep.checks.push_back(check("[D+a, D-a^dag] = 2 Dz N", guard, commutator(raise, lower), 2.0 * Dz * N));
  rep.checks.push_back(check("[D+a, N] = 0", guard, commutator(raise, N), zero));
  rep.checks.push_back(check("[D-a^dag, N] = 0", guard, commutator(lower, N), zero));
  rep.checks.push_back(check("[N, H_JC] = 0", guard, commutator(N, h_jc), zero));
  rep.checks.push_back(check("[J+, J-] = 2 Jz", guard_pos, commutator(Jp, Jm), 2.0 * Jz));
  rep.checks.push_back(check("[Jz, J+] = J+", guard_pos, commutator(Jz, Jp), Jp));
  rep.checks.push_back(check("[Jz, J-] = -J-", guard_pos, commutator(Jz, Jm), -Jm));
  rep.checks.push_back(check("H_JC = nu(N-1/2) + (2K-nu)Jz + G sqrt(N)(J+ + J-)", guard, h_jc, h_alg));
  return rep;
}

ResidualDecomposition decompose_R_state(const ModelParams& p, int n, int s) {
  require_resonance(p);
  if (n < 0) throw std::invalid_argument("decompose_R_state: n must be >= 0");
  require_spin_label(s);
  const FockTruncation trunc(n + 2, 0);
  const LadderOperators lad = build_ladder(trunc);
  const SpinOperators spin = build_spin(trunc);
  const Matrix& a = lad.a.matrix();
  const Matrix& ad = lad.a_dag.matrix();
  const Matrix& Dp = spin.Dp.matrix();
  const Matrix& Dm = spin.Dm.matrix();

  auto ket = [&](int sign) {
    Vector v = Vector::Zero(trunc.dim());
    v.segment<2>(2 * Index(n)) = dressed_spinor(sign);
    return v;
  };
  const Vector same = ket(s);
  const Vector flipped = ket(-s);
  const double nu = p.nu;
  const double K = p.K;

  ResidualDecomposition r;
  r.ladder_form = (nu + 2.0 * s * K) * (ad * flipped) + (nu - 2.0 * s * K) * (a * flipped);
  r.spin_form = 2.0 * nu * ((ad + a) * spin.Sz.matrix() * same) +
                4.0 * kI * K * ((ad - a) * spin.Sy.matrix() * same);
  const Vector counter = -kI * (nu - 2.0 * K) * ((Dp * ad + Dm * a) * same);
  const Vector rotating = -kI * (nu + 2.0 * K) * ((Dp * a - Dm * ad) * same);
  r.d_form = counter + rotating;
  r.spin_form_difference = (r.ladder_form - r.spin_form).norm();
  r.d_form_difference = (r.ladder_form - r.d_form).norm();
  r.rotating_weight = rotating.squaredNorm();
  r.counter_rotating_weight = counter.squaredNorm();
  return r;
}

}  // namespace ldspectra
