#pragma once

// Model parameters and the four Hamiltonians of the trapped-ion problem:
// the lab-frame H_t(t), the rotating-frame H2, the minimal linear model
// H_eta = U2^dag H2 U2, and its rotating-wave (Jaynes-Cummings) reduction.

#include <optional>

#include "ldspectra/algebra.hpp"

namespace ldspectra {

inline constexpr double kDefaultLaserOverTrap = 20.0;
inline constexpr double kGammaPoleTol = 1e-12;

struct PhysicalInputs {
  double M = 1.0;
  double nu = 1.0;
  double k_L = 0.0;
  double lambda_coupling = 0.0;
  double E_L = 0.0;
  double omega_0 = 0.0;
  double omega_L = 0.0;
};

/// Dimensionless model parameters (hbar = M = 1).
struct ModelParams {
  double nu = 1.0;       // trap frequency
  double delta = 0.0;    // detuning omega_L - omega_0
  double K = 0.25;       // coupling energy lambda * E_L
  double epsilon = 0.0;  // confinement length over laser wavelength
  std::optional<double> omega_L;  // defaults to 20 nu when unset

  /// Throws ConfigError on nu <= 0, K < 0, epsilon < 0 or non-finite input.
  void validate() const;

  static ModelParams from_physical(const PhysicalInputs& in);

  double laser_frequency() const { return omega_L.value_or(kDefaultLaserOverTrap * nu); }
  double atomic_frequency() const { return laser_frequency() - delta; }

  /// Lamb-Dicke parameter eta = sqrt(2) pi epsilon.
  double eta() const;
  /// Dressed splitting C = sqrt(delta^2 + 4 K^2).
  double C() const;
  /// Rotation angle with sin(alpha) = delta/C, cos(alpha) = 2K/C; 0 when C = 0.
  double alpha() const;
  double sin_alpha() const;
  double cos_alpha() const;
  /// k_L^2 / 8M, carried as (pi^2/2) nu epsilon^2.
  double scalar_shift() const;
  /// gamma = 2 pi^2 nu eps^2 K / (4K^2 - nu^2); empty at the pole.
  std::optional<double> gamma() const;
  /// Jaynes-Cummings coupling -pi nu eps / sqrt(2).
  double jc_coupling() const;
  bool resonant() const;
};

/// H0 = nu n + shift + 2K Sx - delta Sz.
OperatorMatrix build_H0(const ModelParams& p, const FockTruncation& trunc);
/// W = i sqrt(2) pi nu (a^dag - a) Sz, so that H_eta = H0 + epsilon W.
OperatorMatrix build_W(const ModelParams& p, const FockTruncation& trunc);
OperatorMatrix build_H_eta(const ModelParams& p, const FockTruncation& trunc);
OperatorMatrix build_H2(const ModelParams& p, const FockTruncation& trunc);
OperatorMatrix build_Ht(const ModelParams& p, const FockTruncation& trunc, double t);
/// Throws ResonanceRequired unless delta == 0.
OperatorMatrix build_H_JC(const ModelParams& p, const FockTruncation& trunc);

/// H_t(t) = H_static + e^{-i omega_L t} X + e^{+i omega_L t} X^dag with
/// X = K e^{i eta (a^dag + a)} S+. Only the scalar phase depends on time.
class LabHamiltonian {
 public:
  LabHamiltonian(const ModelParams& p, const FockTruncation& trunc);

  Matrix at(double t) const;
  /// out = H_t(t) psi
  void apply(double t, const Vector& psi, Vector& out) const;

  const FockTruncation& basis() const noexcept { return trunc_; }
  double laser_frequency() const noexcept { return omega_L_; }

 private:
  FockTruncation trunc_;
  double omega_L_;
  Vector diagonal_;
  Matrix coupling_;
  Matrix coupling_dag_;
};

struct EquivalenceReport {
  double deviation = 0.0;  // max |U2^dag H2 U2 - H_eta| on the guarded block
  bool pass = false;       // deviation <= 1e-8
};

EquivalenceReport check_equivalence(const ModelParams& p, const FockTruncation& trunc);

}  // namespace ldspectra
