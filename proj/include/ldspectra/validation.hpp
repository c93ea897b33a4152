#pragma once

// Invariant and acceptance checks shared by the acceptance binary and the
// `validate` subcommand. Every check returns a CheckResult and never throws
// for a physics failure; library exceptions are caught and reported.

#include <string>
#include <vector>

#include "ldspectra/model.hpp"

namespace ldspectra {

struct CheckResult {
  std::string id;
  std::string description;
  bool pass = false;
  bool skipped = false;
  bool informational = false;  // reported, never gating
  std::string detail;
  double seconds = 0.0;
};

/// Identities of the operator kernel and the JC dynamical algebra on the
/// guarded subspace, tolerance 1e-10, runtime under 10 s.
CheckResult check_algebra(const FockTruncation& trunc);

/// H2 / H_eta spectral distance (guarded, <= 1e-7) and lab-frame integration
/// versus U1 U2 exp(-i H_eta t) over `periods` trap periods (>= 1 - 1e-8).
/// H2 carries exp(i eta (a^dag + a)), twice the displacement of U2, so its
/// guard must be wider than the U2 default at high n.
CheckResult check_unitary_chain(const ModelParams& p, int n_max_spectrum, int n_guard_spectrum,
                                int n_max_dynamics, double periods, double tol = 1e-12);

struct ScalingOptions {
  std::vector<double> epsilons{0.01, 0.02, 0.04, 0.08};
  int n_levels = 20;
  int n_max = 120;
  double slope0 = 2.0;
  double slope0_tol = 0.1;
  double slope2_min = 3.0;
};

/// Per-level log-log slopes of |E_exact - E0| and |E_exact - E_total| over
/// the epsilon list. Skipped (with notice) in the excluded band.
CheckResult check_scaling(const ModelParams& p, const ScalingOptions& opt);

/// <E0|W|E0> = 0 for random draws, Delta != 0 included.
CheckResult check_first_order_energy(int draws, int n_levels, unsigned seed);

/// E0 + eps^2 E2 against the factorized form on a 100-point grid.
CheckResult check_factorized_identity();

/// Classifier examples, weak doublet splitting, strong doublet slope in delta.
CheckResult check_regimes(double epsilon);

struct JCOptions {
  std::vector<double> K_values{0.25, 0.5};
  double epsilon = 0.05;
  int n_max = 60;
  int r_levels = 10;
  /// Include the D-operator form of |R(n,s)> in the verdict.
  bool gate_d_form = true;
};

/// Block / dense / closed-form agreement, [N, H_JC], linear splitting at
/// 2K = nu, and the two constructions of |R(n,s)>.
CheckResult check_jc(const JCOptions& opt);

/// Monotone spacing trends of the labelled ladders across K = nu/2.
CheckResult check_crossover(double epsilon, int n_spacings);

/// Weak-regime doublet beat at 2K within 1% and strong-regime interband beat
/// at nu delta within 5%.
CheckResult check_dynamics(double eps_weak, double eps_strong);

/// Guard against non-Hermitian input: passes iff the operator is Hermitian
/// to 1e-12. Used with a deliberately corrupted H_eta by `validate`.
CheckResult check_hermitian(const std::string& id, const Matrix& h);

}  // namespace ldspectra
