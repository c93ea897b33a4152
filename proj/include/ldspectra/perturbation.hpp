#pragma once

// Rayleigh-Schroedinger expansion of H_eta = H0 + epsilon W in closed form.
//
// The unperturbed eigenstates are |E0(n,s)> = |n> (x) chi_s with chi_s the
// eigenspinor of 2K Sx - delta Sz for eigenvalue s C/2. Perturbed states are
// stored as coefficient maps over that basis, one map per order, with the
// epsilon^k factor NOT included: |E> = sum_k epsilon^k order_k.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ldspectra/algebra.hpp"
#include "ldspectra/model.hpp"

namespace ldspectra {

inline constexpr double kSingularTol = 1e-6;  // times nu
inline constexpr double kGammaMax = 0.1;
inline constexpr double kWeakRatio = 0.2;
inline constexpr double kStrongRatio = 5.0;

using Amplitudes = std::map<BasisIndex, Complex>;

struct PerturbedState {
  BasisIndex label;
  Amplitudes order0;
  Amplitudes order1;
  Amplitudes order2;
};

struct SpectralLine {
  int n = 0;
  int s = -1;
  double E0 = 0.0;             // includes the scalar k_L^2/8M shift
  double E2_times_eps2 = 0.0;  // epsilon^2 E2
  double E_total = 0.0;        // E0 + epsilon^2 E2
  std::optional<double> E_star;  // factorized form, resonant only
};

/// How the second-order state treats the |E0(n,s)> component.
enum class SecondOrderForm {
  /// Standard RS correction including -1/2 |order1|^2 on |E0(n,s)>.
  NormPreserving,
  /// Same off-diagonal amplitudes, zero overlap with |E0(n,s)>.
  Intermediate,
  /// Closed form as printed in the original derivation (no diagonal term).
  PrintedClosedForm,
};

double unperturbed_energy(const ModelParams& p, int n, int s);

/// chi_s in the (|g>, |e>) basis.
Eigen::Vector2cd unperturbed_spinor(const ModelParams& p, int s);
Vector unperturbed_vector(const ModelParams& p, const FockTruncation& trunc, int n, int s);

PerturbedState unperturbed_state(const ModelParams& p, int n, int s);

/// Adds order1. Throws SmallDenominator when |C - nu| <= 1e-6 nu.
PerturbedState first_order_state(const ModelParams& p, int n, int s);

/// E2(n,s), the coefficient of epsilon^2.
double second_order_energy(const ModelParams& p, int n, int s);

/// Adds order1 and order2. Resonant only.
PerturbedState second_order_state(const ModelParams& p, int n, int s,
                                  SecondOrderForm form = SecondOrderForm::NormPreserving);

/// [nu(n + 1/2) + sK](1 + s gamma) - nu/2. Resonant only; algebraically equal
/// to E0 + epsilon^2 E2 (the scalar shift is absorbed into gamma).
double factorized_energy(const ModelParams& p, int n, int s);

SpectralLine spectral_line(const ModelParams& p, int n, int s);
std::vector<SpectralLine> spectral_lines(const ModelParams& p, int n_levels);

/// Expands sum_{k <= max_order} epsilon^k order_k in the bare |n>|sigma>
/// basis. Throws TruncationError if a component lies beyond n_max.
Vector to_bare(const PerturbedState& state, const ModelParams& p, const FockTruncation& trunc,
               int max_order = 2);

/// Rescales all orders so the bare-space norm at `epsilon` is one.
PerturbedState renormalized(const PerturbedState& state, const ModelParams& p,
                            const FockTruncation& trunc, int max_order = 2);

enum class Regime { Weak, IntermediateBelow, ExcludedBand, IntermediateAbove, Strong };

std::string_view to_string(Regime r);

struct Doublet {
  BasisIndex lower;
  BasisIndex upper;
  double separation = 0.0;  // E(upper) - E(lower)
};

struct RegimeReport {
  Regime regime = Regime::Weak;
  double r = 0.0;  // 2K / nu
  std::optional<double> gamma;
  bool perturbative = false;  // |gamma| <= gamma_max
  int m = 0;                  // floor(2K / nu)
  double delta_frac = 0.0;    // 2K / nu - m
  std::vector<Doublet> doublets;
  std::string notes;
};

RegimeReport classify_regime(const ModelParams& p);

/// Weak regime: (n,-1)/(n,+1). Strong regime: (n+m,-1)/(n,+1). Empty otherwise.
std::vector<Doublet> find_doublets(std::span<const SpectralLine> lines, const ModelParams& p);

}  // namespace ldspectra
