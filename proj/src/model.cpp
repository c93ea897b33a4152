#include "ldspectra/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ldspectra {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

// K e^{i eta (a^dag + a)} S+ on the product space.
// The boundary check is skipped by the equivalence diagnostic, which measures
// the truncation error itself.
Matrix displaced_raising(const ModelParams& p, const FockTruncation& trunc, bool checked = true) {
  const Matrix a = fock_annihilation(trunc.n_max());
  const Matrix kick = exp_i_hermitian(a.adjoint() + a, p.eta());
  Matrix x = embed_fock(kick, trunc) * embed_spin(spin_matrices().Sp, trunc);
  const double leak = boundary_leakage(embed_fock(kick, trunc), trunc);
  if (checked && leak > kTruncationTol) {
    throw TruncationError("exp(i eta (a^dag + a)) leaks " + std::to_string(leak) +
                          " onto the boundary level");
  }
  return p.K * x;
}

}  // namespace

void ModelParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(nu) || !(nu > 0.0)) throw ConfigError("nu must be finite and > 0");
  if (!finite(K) || K < 0.0) throw ConfigError("K must be finite and >= 0");
  if (!finite(epsilon) || epsilon < 0.0) throw ConfigError("epsilon must be finite and >= 0");
  if (!finite(delta)) throw ConfigError("delta must be finite");
  if (omega_L && !finite(*omega_L)) throw ConfigError("omega_L must be finite");
}

ModelParams ModelParams::from_physical(const PhysicalInputs& in) {
  if (!(in.M > 0.0) || !(in.nu > 0.0)) throw ConfigError("physical inputs need M > 0 and nu > 0");
  ModelParams p;
  p.nu = in.nu;
  p.K = in.lambda_coupling * in.E_L;
  p.epsilon = std::sqrt(in.k_L * in.k_L / (4.0 * kPi * kPi * in.M * in.nu));
  p.delta = in.omega_L - in.omega_0;
  p.omega_L = in.omega_L;
  p.validate();
  return p;
}

double ModelParams::eta() const { return std::sqrt(2.0) * kPi * epsilon; }

double ModelParams::C() const { return std::hypot(delta, 2.0 * K); }

double ModelParams::alpha() const { return C() == 0.0 ? 0.0 : std::atan2(delta, 2.0 * K); }

double ModelParams::sin_alpha() const { return std::sin(alpha()); }

double ModelParams::cos_alpha() const { return std::cos(alpha()); }

double ModelParams::scalar_shift() const { return 0.5 * kPi * kPi * nu * epsilon * epsilon; }

std::optional<double> ModelParams::gamma() const {
  const double den = 4.0 * K * K - nu * nu;
  if (std::abs(den) < kGammaPoleTol) return std::nullopt;
  return 2.0 * kPi * kPi * nu * epsilon * epsilon * K / den;
}

double ModelParams::jc_coupling() const { return -kPi * nu * epsilon / std::sqrt(2.0); }

bool ModelParams::resonant() const { return std::abs(delta) <= 1e-12 * nu; }

OperatorMatrix build_H0(const ModelParams& p, const FockTruncation& trunc) {
  p.validate();
  const LadderOperators lad = build_ladder(trunc);
  const SpinOperators spin = build_spin(trunc);
  Matrix h = p.nu * lad.n_op.matrix() + 2.0 * p.K * spin.Sx.matrix() - p.delta * spin.Sz.matrix();
  h.diagonal().array() += p.scalar_shift();
  return OperatorMatrix::hermitian(std::move(h), trunc);
}

OperatorMatrix build_W(const ModelParams& p, const FockTruncation& trunc) {
  const LadderOperators lad = build_ladder(trunc);
  const SpinOperators spin = build_spin(trunc);
  Matrix w = kI * std::sqrt(2.0) * kPi * p.nu * (lad.a_dag.matrix() - lad.a.matrix()) * spin.Sz.matrix();
  return OperatorMatrix::hermitian(std::move(w), trunc);
}

OperatorMatrix build_H_eta(const ModelParams& p, const FockTruncation& trunc) {
  Matrix h = build_H0(p, trunc).matrix() + p.epsilon * build_W(p, trunc).matrix();
  return OperatorMatrix::hermitian(std::move(h), trunc);
}

namespace {

Matrix h2_entries(const ModelParams& p, const FockTruncation& trunc, bool checked) {
  p.validate();
  const LadderOperators lad = build_ladder(trunc);
  const SpinOperators spin = build_spin(trunc);
  const Matrix x = displaced_raising(p, trunc, checked);
  return p.nu * lad.n_op.matrix() - p.delta * spin.Sz.matrix() + x + x.adjoint();
}

}  // namespace

OperatorMatrix build_H2(const ModelParams& p, const FockTruncation& trunc) {
  return OperatorMatrix::hermitian(h2_entries(p, trunc, true), trunc);
}

LabHamiltonian::LabHamiltonian(const ModelParams& p, const FockTruncation& trunc)
    : trunc_(trunc), omega_L_(p.laser_frequency()) {
  p.validate();
  diagonal_.resize(trunc.dim());
  const double omega_0 = p.atomic_frequency();
  for (Index i = 0; i < trunc.dim(); ++i) {
    const BasisIndex b = BasisIndex::from_flat(i);
    diagonal_(i) = p.nu * b.n + 0.5 * b.s * omega_0;
  }
  coupling_ = displaced_raising(p, trunc);
  coupling_dag_ = coupling_.adjoint();
}

Matrix LabHamiltonian::at(double t) const {
  const Complex phase = std::exp(-kI * omega_L_ * t);
  Matrix h = phase * coupling_ + std::conj(phase) * coupling_dag_;
  h.diagonal() += diagonal_;
  return h;
}

void LabHamiltonian::apply(double t, const Vector& psi, Vector& out) const {
  const Complex phase = std::exp(-kI * omega_L_ * t);
  out.noalias() = phase * (coupling_ * psi);
  out.noalias() += std::conj(phase) * (coupling_dag_ * psi);
  out += diagonal_.cwiseProduct(psi);
}

OperatorMatrix build_Ht(const ModelParams& p, const FockTruncation& trunc, double t) {
  return OperatorMatrix::hermitian(LabHamiltonian(p, trunc).at(t), trunc);
}

OperatorMatrix build_H_JC(const ModelParams& p, const FockTruncation& trunc) {
  p.validate();
  if (!p.resonant()) {
    throw ResonanceRequired("H_JC needs delta = 0, got " + std::to_string(p.delta));
  }
  const LadderOperators lad = build_ladder(trunc);
  const SpinOperators spin = build_spin(trunc);
  const Matrix& a = lad.a.matrix();
  const Matrix& ad = lad.a_dag.matrix();
  Matrix h = p.nu * lad.n_op.matrix() + 2.0 * p.K * spin.Dz.matrix() +
             p.jc_coupling() * (spin.Dm.matrix() * ad + spin.Dp.matrix() * a);
  h.diagonal().array() += p.scalar_shift();
  return OperatorMatrix::hermitian(std::move(h), trunc);
}

EquivalenceReport check_equivalence(const ModelParams& p, const FockTruncation& trunc) {
  const Matrix a = embed_fock(fock_annihilation(trunc.n_max()), trunc);
  const Matrix u2 = exp_i_hermitian((a.adjoint() + a) * embed_spin(spin_matrices().Sz, trunc), p.eta());
  const Matrix h2 = h2_entries(p, trunc, false);
  const Matrix h_eta = build_H_eta(p, trunc).matrix();
  const Matrix diff = u2.adjoint() * h2 * u2 - h_eta;
  EquivalenceReport r;
  r.deviation = max_abs(guarded_block(diff, trunc));
  r.pass = r.deviation <= kTruncationTol;
  return r;
}

}  // namespace ldspectra
