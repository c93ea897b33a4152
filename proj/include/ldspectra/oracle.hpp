#pragma once

// Exact reference engines: dense diagonalization, labelling of exact levels by
// their unperturbed parents, truncation convergence, time integration of the
// lab-frame problem and assembly of the perturbative time-dependent solution.

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ldspectra/algebra.hpp"
#include "ldspectra/model.hpp"
#include "ldspectra/perturbation.hpp"

namespace ldspectra {

inline constexpr double kMatchThreshold = 0.5;

struct EigenSolution {
  Eigen::VectorXd eigenvalues;  // ascending
  Matrix eigenvectors;          // columns; largest-magnitude entry real positive
  std::vector<std::optional<BasisIndex>> labels;
};

/// Throws NotHermitian unless the Hermitian flag is set.
EigenSolution diagonalize(const OperatorMatrix& h);

/// max |a_i - b_i| over the lowest `count` sorted values.
double spectral_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Index count);

struct MatchedLevel {
  Index eigen_index = 0;
  double energy = 0.0;
  double overlap = 0.0;  // squared overlap with |E0(n,s)>
};

struct LevelMatch {
  EigenSolution solution;
  std::map<BasisIndex, MatchedLevel> levels;  // guarded labels with overlap > 0.5
  std::vector<BasisIndex> ambiguous;          // guarded labels without a match

  std::optional<MatchedLevel> find(int n, int s) const;
};

LevelMatch match_levels(EigenSolution sol, const ModelParams& p, const FockTruncation& trunc);

/// Convenience: diagonalize H_eta and label.
LevelMatch exact_levels(const ModelParams& p, const FockTruncation& trunc);

struct ConvergenceStep {
  int n_max_from = 0;
  int n_max_to = 0;
  double drift = 0.0;
};

struct ConvergenceReport {
  Index tracked = 0;
  std::vector<ConvergenceStep> steps;
  bool pass = false;  // final drift <= 1e-10
};

/// Eigenvalue drift of H_eta between successive truncations. `tracked`
/// defaults to 2 * (n_max_min / 2) levels.
ConvergenceReport convergence_scan(const ModelParams& p, std::span<const int> n_max_list,
                                   Index tracked = 0);

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<double> sz;      // <S_z>
  std::vector<double> n_mean;  // <n>
  std::vector<double> norm;
  std::size_t rhs_evaluations = 0;
};

/// Fills sz / n_mean / norm from states.
void compute_observables(Trajectory& traj);

std::vector<double> uniform_grid(double t_end, int steps);

/// Adaptive Runge-Kutta-Fehlberg 7(8) integration of i d/dt psi = H_t(t) psi.
/// Throws StepFailure if the step size control gives up.
Trajectory integrate_Ht(const ModelParams& p, const FockTruncation& trunc, const Vector& psi0,
                        std::span<const double> t_grid, double tol);

/// Exact propagation under the time-independent H_eta (spectral).
Trajectory evolve_reduced(const ModelParams& p, const FockTruncation& trunc, const Vector& xi0,
                          std::span<const double> t_grid);

/// Psi(t) = U1(t) U2 xi(t).
Trajectory map_to_lab(const ModelParams& p, const FockTruncation& trunc, const Trajectory& reduced);

using AmplitudeSet = std::map<BasisIndex, Complex>;

AmplitudeSet normalized(const AmplitudeSet& amps);

enum class SolutionPath {
  /// Exact U2 and U1(t) matrices applied to the perturbative eigenstates.
  Matrix,
  /// As Matrix with U2 expanded to first order in epsilon.
  MatrixLinearized,
  /// Closed-form action of U2 (first order) and U1(t) on |n>|f(s)>; order <= 1.
  Analytic,
};

/// sum C(n,s) e^{-i t E(n,s)} U1(t) U2 |E(n,s)> with states and energies at
/// the requested perturbative order (0, 1 or 2). Not normalized.
Vector assemble_general_solution(const ModelParams& p, const FockTruncation& trunc,
                                 const AmplitudeSet& amps, double t, int order,
                                 SolutionPath path = SolutionPath::Matrix);

/// Normalized states of assemble_general_solution over a grid.
Trajectory assemble_trajectory(const ModelParams& p, const FockTruncation& trunc,
                               const AmplitudeSet& amps, std::span<const double> t_grid, int order,
                               SolutionPath path = SolutionPath::Matrix);

struct FidelityReport {
  std::vector<double> per_time;
  double min = 0.0;
  double mean = 0.0;
};

/// |<a(t)|b(t)>| / (|a||b|). Throws GridMismatch on differing grids.
FidelityReport fidelity(const Trajectory& a, const Trajectory& b);

/// Angular frequency in [omega_lo, omega_hi] maximizing the discrete Fourier
/// amplitude of the mean-removed series.
double peak_frequency(std::span<const double> times, std::span<const double> series,
                      double omega_lo, double omega_hi);

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);
/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Exact spacings E(n+1, s) - E(n, s) of the labelled ladders, n < n_spacings.
/// Entries are empty where either level is unmatched.
struct LadderSpacings {
  double K = 0.0;
  std::vector<std::optional<double>> minus;
  std::vector<std::optional<double>> plus;
};

LadderSpacings ladder_spacings(const ModelParams& p, const FockTruncation& trunc, int n_spacings);

}  // namespace ldspectra
