#include "ldspectra/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/numeric/odeint.hpp>

namespace ldspectra {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kConvergenceTol = 1e-10;

// Applies a spin-only operator on every Fock level.
Vector apply_spin(const SpinMatrix& m, const Vector& v) {
  Vector out(v.size());
  for (Index i = 0; i + 1 < v.size(); i += 2) out.segment<2>(i) = m * v.segment<2>(i);
  return out;
}

int default_guard(int n_max) { return std::min(kDefaultGuard, n_max - 1); }

void require_state(const Vector& psi, const FockTruncation& trunc) {
  if (psi.size() != trunc.dim()) throw std::invalid_argument("state has wrong dimension");
}

}  // namespace

EigenSolution diagonalize(const OperatorMatrix& h) {
  if (!h.is_hermitian()) throw NotHermitian("diagonalize needs a Hermitian-flagged operator");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw std::runtime_error("diagonalize: eigensolver failed");
  EigenSolution sol;
  sol.eigenvalues = es.eigenvalues();
  sol.eigenvectors = es.eigenvectors();
  for (Index j = 0; j < sol.eigenvectors.cols(); ++j) {
    auto col = sol.eigenvectors.col(j);
    Index k = 0;
    col.cwiseAbs().maxCoeff(&k);
    const Complex pivot = col(k);
    col *= std::conj(pivot) / std::abs(pivot);
    col(k) = std::abs(pivot);
  }
  sol.labels.assign(std::size_t(sol.eigenvalues.size()), std::nullopt);
  return sol;
}

double spectral_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Index count) {
  if (count > a.size() || count > b.size()) throw std::invalid_argument("spectral_distance: count too large");
  std::vector<double> x(a.data(), a.data() + a.size());
  std::vector<double> y(b.data(), b.data() + b.size());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double d = 0.0;
  for (Index i = 0; i < count; ++i) d = std::max(d, std::abs(x[std::size_t(i)] - y[std::size_t(i)]));
  return d;
}

std::optional<MatchedLevel> LevelMatch::find(int n, int s) const {
  const auto it = levels.find({n, s});
  if (it == levels.end()) return std::nullopt;
  return it->second;
}

LevelMatch match_levels(EigenSolution sol, const ModelParams& p, const FockTruncation& trunc) {
  if (sol.eigenvectors.rows() != trunc.dim()) throw std::invalid_argument("match_levels: dimension mismatch");
  const int top = trunc.highest_guarded_level();
  Matrix basis = Matrix::Zero(trunc.dim(), trunc.guarded_dim());
  for (int n = 0; n <= top; ++n) {
    for (int s : {-1, +1}) {
      basis.block(2 * Index(n), BasisIndex{n, s}.flat(), 2, 1) = unperturbed_spinor(p, s);
    }
  }
  const Eigen::MatrixXd overlaps = (sol.eigenvectors.adjoint() * basis).cwiseAbs2();

  LevelMatch out;
  for (Index k = 0; k < overlaps.cols(); ++k) {
    const BasisIndex label = BasisIndex::from_flat(k);
    Index j = 0;
    const double best = overlaps.col(k).maxCoeff(&j);
    if (best > kMatchThreshold) {
      out.levels[label] = {j, sol.eigenvalues(j), best};
      sol.labels[std::size_t(j)] = label;
    } else {
      out.ambiguous.push_back(label);
    }
  }
  out.solution = std::move(sol);
  return out;
}

LevelMatch exact_levels(const ModelParams& p, const FockTruncation& trunc) {
  return match_levels(diagonalize(build_H_eta(p, trunc)), p, trunc);
}

ConvergenceReport convergence_scan(const ModelParams& p, std::span<const int> n_max_list, Index tracked) {
  if (n_max_list.size() < 2) throw std::invalid_argument("convergence_scan needs at least two truncations");
  if (!std::is_sorted(n_max_list.begin(), n_max_list.end())) {
    throw std::invalid_argument("convergence_scan needs an ascending n_max list");
  }
  ConvergenceReport rep;
  rep.tracked = tracked > 0 ? tracked : 2 * Index(n_max_list.front() / 2);
  Eigen::VectorXd previous;
  for (std::size_t i = 0; i < n_max_list.size(); ++i) {
    const FockTruncation trunc(n_max_list[i], default_guard(n_max_list[i]));
    const EigenSolution sol = diagonalize(build_H_eta(p, trunc));
    if (i > 0) {
      rep.steps.push_back({n_max_list[i - 1], n_max_list[i],
                           spectral_distance(previous, sol.eigenvalues, rep.tracked)});
    }
    previous = sol.eigenvalues;
  }
  rep.pass = rep.steps.back().drift <= kConvergenceTol;
  return rep;
}

void compute_observables(Trajectory& traj) {
  traj.sz.clear();
  traj.n_mean.clear();
  traj.norm.clear();
  for (const Vector& psi : traj.states) {
    double sz = 0.0;
    double n_mean = 0.0;
    double norm2 = 0.0;
    for (Index i = 0; i < psi.size(); ++i) {
      const double w = std::norm(psi(i));
      const BasisIndex b = BasisIndex::from_flat(i);
      sz += 0.5 * b.s * w;
      n_mean += b.n * w;
      norm2 += w;
    }
    traj.sz.push_back(sz / norm2);
    traj.n_mean.push_back(n_mean / norm2);
    traj.norm.push_back(std::sqrt(norm2));
  }
}

std::vector<double> uniform_grid(double t_end, int steps) {
  if (steps < 0 || !(t_end >= 0.0)) throw std::invalid_argument("uniform_grid: need t_end >= 0, steps >= 0");
  std::vector<double> t(std::size_t(steps) + 1, 0.0);
  for (int i = 0; i <= steps; ++i) t[std::size_t(i)] = steps == 0 ? 0.0 : t_end * double(i) / steps;
  if (steps == 0) t.resize(1);
  return t;
}

Trajectory integrate_Ht(const ModelParams& p, const FockTruncation& trunc, const Vector& psi0,
                        std::span<const double> t_grid, double tol) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<Complex>;
  require_state(psi0, trunc);
  if (!(tol >= 1e-12)) throw std::invalid_argument("integrate_Ht: tol must be >= 1e-12");
  if (t_grid.empty()) throw std::invalid_argument("integrate_Ht: empty time grid");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw std::invalid_argument("integrate_Ht: psi0 must be normalized");

  const LabHamiltonian h(p, trunc);
  Trajectory traj;
  std::size_t evaluations = 0;
  auto rhs = [&](const State& x, State& dxdt, double t) {
    ++evaluations;
    const Eigen::Map<const Vector> psi(x.data(), Index(x.size()));
    Eigen::Map<Vector> out(dxdt.data(), Index(dxdt.size()));
    Vector hpsi(psi.size());
    h.apply(t, psi, hpsi);
    out = -kI * hpsi;
  };
  auto observer = [&](const State& x, double t) {
    traj.times.push_back(t);
    traj.states.emplace_back(Eigen::Map<const Vector>(x.data(), Index(x.size())));
  };

  State x(psi0.data(), psi0.data() + psi0.size());
  if (t_grid.size() == 1) {
    observer(x, t_grid.front());
  } else {
    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());
    const double dt0 = std::min(0.01, (t_grid.back() - t_grid.front()) / double(t_grid.size()));
    try {
      odeint::integrate_times(stepper, rhs, x, t_grid.begin(), t_grid.end(), dt0, observer,
                              odeint::max_step_checker(1000000));
    } catch (const odeint::odeint_error& e) {
      throw StepFailure(e.what());
    }
  }
  traj.rhs_evaluations = evaluations;
  compute_observables(traj);
  return traj;
}

Trajectory evolve_reduced(const ModelParams& p, const FockTruncation& trunc, const Vector& xi0,
                          std::span<const double> t_grid) {
  require_state(xi0, trunc);
  const EigenSolution sol = diagonalize(build_H_eta(p, trunc));
  const Vector coeff = sol.eigenvectors.adjoint() * xi0;
  Trajectory traj;
  for (double t : t_grid) {
    const Vector phases = (-kI * t * sol.eigenvalues.cast<Complex>()).array().exp();
    traj.times.push_back(t);
    traj.states.push_back(sol.eigenvectors * phases.cwiseProduct(coeff));
  }
  compute_observables(traj);
  return traj;
}

Trajectory map_to_lab(const ModelParams& p, const FockTruncation& trunc, const Trajectory& reduced) {
  const Matrix u2 = unitary_U2(p.eta(), trunc).matrix();
  Trajectory lab;
  lab.times = reduced.times;
  for (std::size_t i = 0; i < reduced.states.size(); ++i) {
    lab.states.push_back(apply_spin(spin_U1(reduced.times[i], p.laser_frequency()), u2 * reduced.states[i]));
  }
  compute_observables(lab);
  return lab;
}

AmplitudeSet normalized(const AmplitudeSet& amps) {
  double norm2 = 0.0;
  for (const auto& [b, c] : amps) norm2 += std::norm(c);
  if (norm2 == 0.0) throw std::invalid_argument("amplitude set is empty or zero");
  AmplitudeSet out;
  for (const auto& [b, c] : amps) {
    require_spin_label(b.s);
    out[b] = c / std::sqrt(norm2);
  }
  return out;
}

Vector assemble_general_solution(const ModelParams& p, const FockTruncation& trunc, const AmplitudeSet& amps,
                                 double t, int order, SolutionPath path) {
  if (order < 0 || order > 2) throw std::invalid_argument("order must be 0, 1 or 2");
  if (order >= 1 && !p.resonant()) {
    throw ResonanceRequired("analytic states beyond order 0 assume delta = 0");
  }
  if (path == SolutionPath::Analytic && order > 1) {
    throw std::invalid_argument("the closed-form U2 action is first order; use a matrix path for order 2");
  }
  const double omega_t = p.laser_frequency() * t;
  const double eps = p.epsilon;
  Vector psi = Vector::Zero(trunc.dim());

  Matrix u2;
  Matrix u2_generator;
  if (path == SolutionPath::Matrix) {
    u2 = unitary_U2(p.eta(), trunc).matrix();
  } else if (path == SolutionPath::MatrixLinearized) {
    const Matrix a = embed_fock(fock_annihilation(trunc.n_max()), trunc);
    u2_generator = (a.adjoint() + a) * embed_spin(spin_matrices().Sz, trunc);
  }
  const SpinMatrix u1 = spin_U1(t, p.laser_frequency());

  for (const auto& [label, amp] : amps) {
    const auto [n, s] = label;
    const double energy = unperturbed_energy(p, n, s) +
                          (order == 2 ? eps * eps * second_order_energy(p, n, s) : 0.0);
    const Complex weight = amp * std::exp(-kI * t * energy);

    if (path == SolutionPath::Analytic) {
      // Coefficients over |m>|f(sigma)>.
      Amplitudes coeff;
      coeff[{n, s}] = 1.0;
      if (order == 1) {
        const Complex pref = kI * std::sqrt(2.0) * std::numbers::pi * p.K * double(s) * eps;
        coeff[{n + 1, -s}] += pref * std::sqrt(double(n + 1)) / (2.0 * p.K * s - p.nu);
        if (n > 0) coeff[{n - 1, -s}] += pref * std::sqrt(double(n)) / (p.nu + 2.0 * p.K * s);
      }
      // U1(t)|f(s)> = cos(omega t / 2)|f(s)> - i sin(omega t / 2)|f(-s)>.
      const double c1 = std::cos(0.5 * omega_t);
      const double s1 = std::sin(0.5 * omega_t);
      for (const auto& [b, c] : coeff) {
        if (b.n > trunc.n_max()) throw TruncationError("analytic state exceeds n_max");
        psi.segment<2>(2 * Index(b.n)) +=
            weight * c * (c1 * dressed_spinor(b.s) - kI * s1 * dressed_spinor(-b.s));
      }
      continue;
    }

    const PerturbedState state = order == 2 ? second_order_state(p, n, s)
                                 : order == 1 ? first_order_state(p, n, s)
                                              : unperturbed_state(p, n, s);
    Vector v = to_bare(state, p, trunc, order);
    if (path == SolutionPath::Matrix) {
      v = u2 * v;
    } else if (order >= 1) {
      v += kI * p.eta() * (u2_generator * to_bare(state, p, trunc, 0));
    }
    psi += weight * apply_spin(u1, v);
  }
  return psi;
}

Trajectory assemble_trajectory(const ModelParams& p, const FockTruncation& trunc, const AmplitudeSet& amps,
                               std::span<const double> t_grid, int order, SolutionPath path) {
  const AmplitudeSet unit = normalized(amps);
  Trajectory traj;
  for (double t : t_grid) {
    Vector psi = assemble_general_solution(p, trunc, unit, t, order, path);
    psi.normalize();
    traj.times.push_back(t);
    traj.states.push_back(std::move(psi));
  }
  compute_observables(traj);
  return traj;
}

FidelityReport fidelity(const Trajectory& a, const Trajectory& b) {
  if (a.times.size() != b.times.size() || a.states.size() != b.states.size()) {
    throw GridMismatch("trajectories have different lengths");
  }
  FidelityReport rep;
  if (a.states.empty()) return rep;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    if (std::abs(a.times[i] - b.times[i]) > 1e-12 * std::max(1.0, std::abs(a.times[i]))) {
      throw GridMismatch("time grids differ at index " + std::to_string(i));
    }
    const Vector& x = a.states[i];
    const Vector& y = b.states[i];
    if (x.size() != y.size()) throw GridMismatch("state dimensions differ");
    rep.per_time.push_back(std::abs(x.dot(y)) / (x.norm() * y.norm()));
  }
  rep.min = *std::min_element(rep.per_time.begin(), rep.per_time.end());
  rep.mean = std::accumulate(rep.per_time.begin(), rep.per_time.end(), 0.0) / double(rep.per_time.size());
  return rep;
}

double peak_frequency(std::span<const double> times, std::span<const double> series, double omega_lo,
                      double omega_hi) {
  if (times.size() != series.size() || times.size() < 3) {
    throw std::invalid_argument("peak_frequency: need matching series of length >= 3");
  }
  if (!(omega_hi > omega_lo)) throw std::invalid_argument("peak_frequency: empty band");
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / double(series.size());
  auto amplitude = [&](double w) {
    Complex sum = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) sum += (series[i] - mean) * std::exp(-kI * w * times[i]);
    return std::abs(sum);
  };
  constexpr int kGrid = 2000;
  const double step = (omega_hi - omega_lo) / kGrid;
  int best = 0;
  double best_amp = -1.0;
  for (int k = 0; k <= kGrid; ++k) {
    const double a = amplitude(omega_lo + k * step);
    if (a > best_amp) {
      best_amp = a;
      best = k;
    }
  }
  // Golden-section refinement within one grid step of the coarse peak.
  double lo = std::max(omega_lo, omega_lo + (best - 1) * step);
  double hi = std::min(omega_hi, omega_lo + (best + 1) * step);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = amplitude(x1);
  double f2 = amplitude(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = amplitude(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = amplitude(x2);
    }
  }
  return 0.5 * (lo + hi);
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_slope: need >= 2 points");
  const double n = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_slope: x values are all equal");
  return sxy / sxx;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("loglog_slope: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: values must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_slope(lx, ly);
}

LadderSpacings ladder_spacings(const ModelParams& p, const FockTruncation& trunc, int n_spacings) {
  if (n_spacings < 1 || n_spacings > trunc.highest_guarded_level()) {
    throw std::invalid_argument("ladder_spacings: n_spacings outside the guarded range");
  }
  const LevelMatch match = exact_levels(p, trunc);
  LadderSpacings out;
  out.K = p.K;
  for (int n = 0; n < n_spacings; ++n) {
    for (int s : {-1, +1}) {
      const auto lo = match.find(n, s);
      const auto hi = match.find(n + 1, s);
      std::optional<double> gap;
      if (lo && hi) gap = hi->energy - lo->energy;
      (s < 0 ? out.minus : out.plus).push_back(gap);
    }
  }
  return out;
}

}  // namespace ldspectra
