#include "ldspectra/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ldspectra {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

void require_level(int n, int s) {
  if (n < 0) throw std::invalid_argument("Fock level must be >= 0, got " + std::to_string(n));
  require_spin_label(s);
}

void require_regular(const ModelParams& p) {
  if (std::abs(p.C() - p.nu) <= kSingularTol * p.nu) {
    std::ostringstream os;
    os << "C = " << p.C() << " is within " << kSingularTol << " nu of nu = " << p.nu;
    throw SmallDenominator(os.str());
  }
}

void require_resonance(const ModelParams& p, const char* what) {
  if (!p.resonant()) throw ResonanceRequired(std::string(what) + " needs delta = 0");
}

void add(Amplitudes& amps, BasisIndex b, Complex c) {
  if (b.n < 0 || c == Complex(0.0)) return;
  amps[b] += c;
}

}  // namespace

double unperturbed_energy(const ModelParams& p, int n, int s) {
  require_level(n, s);
  return p.scalar_shift() + p.nu * n + 0.5 * s * p.C();
}

Eigen::Vector2cd unperturbed_spinor(const ModelParams& p, int s) {
  require_spin_label(s);
  const double c = std::cos(p.alpha() / 2.0);
  const double sn = std::sin(p.alpha() / 2.0);
  Eigen::Vector2cd chi;
  chi << s * (c + s * sn), c - s * sn;  // (|g>, |e>)
  return chi / std::sqrt(2.0);
}

Vector unperturbed_vector(const ModelParams& p, const FockTruncation& trunc, int n, int s) {
  require_level(n, s);
  if (n > trunc.n_max()) throw TruncationError("level " + std::to_string(n) + " beyond n_max");
  Vector v = Vector::Zero(trunc.dim());
  v.segment<2>(2 * Index(n)) = unperturbed_spinor(p, s);
  return v;
}

PerturbedState unperturbed_state(const ModelParams& p, int n, int s) {
  require_level(n, s);
  p.validate();
  PerturbedState st;
  st.label = {n, s};
  st.order0[{n, s}] = 1.0;
  return st;
}

PerturbedState first_order_state(const ModelParams& p, int n, int s) {
  PerturbedState st = unperturbed_state(p, n, s);
  require_regular(p);
  const double C = p.C();
  const double up = std::sqrt(double(n + 1));
  const double down = std::sqrt(double(n));
  // i pi nu / (sqrt(2) C) times (s delta / nu) and (2K), written with
  // sin(alpha), cos(alpha) so that C = 0 stays finite.
  const Complex same = kI * kPi * double(s) * p.sin_alpha() / std::sqrt(2.0);
  const Complex flip = kI * kPi * p.nu * p.cos_alpha() / std::sqrt(2.0);
  add(st.order1, {n + 1, s}, same * up);
  add(st.order1, {n - 1, s}, same * down);
  add(st.order1, {n + 1, -s}, flip * up / (-p.nu + s * C));
  add(st.order1, {n - 1, -s}, -flip * down / (p.nu + s * C));
  return st;
}

double second_order_energy(const ModelParams& p, int n, int s) {
  require_level(n, s);
  require_regular(p);
  const double C = p.C();
  const double nu = p.nu;
  const double sa = p.sin_alpha();
  const double ca = p.cos_alpha();
  return 0.5 * kPi * kPi * nu * nu *
         (-sa * sa / nu + ((2.0 * n + 1.0) * s * C + nu) * ca * ca / (C * C - nu * nu));
}

PerturbedState second_order_state(const ModelParams& p, int n, int s, SecondOrderForm form) {
  require_resonance(p, "second_order_state");
  PerturbedState st = first_order_state(p, n, s);
  const double nu = p.nu;
  const double sK2 = 2.0 * s * p.K;
  const double raise2 = std::sqrt(double(n + 1) * double(n + 2));
  const double lower2 = n >= 2 ? std::sqrt(double(n) * double(n - 1)) : 0.0;
  const double pi2 = kPi * kPi;

  if (form == SecondOrderForm::PrintedClosedForm) {
    add(st.order2, {n + 2, s}, -pi2 * nu * raise2 / (2.0 * (sK2 - nu)));
    add(st.order2, {n - 2, s}, pi2 * nu * lower2 / (2.0 * (sK2 + nu)));
    return st;
  }
  // <m|W|E1> / (E0(n) - E0(m)) for m = n +- 2, same dressed spin.
  add(st.order2, {n + 2, s}, pi2 * nu * raise2 / (4.0 * (sK2 - nu)));
  add(st.order2, {n - 2, s}, -pi2 * nu * lower2 / (4.0 * (sK2 + nu)));
  if (form == SecondOrderForm::NormPreserving) {
    double norm1 = 0.0;
    for (const auto& [b, c] : st.order1) norm1 += std::norm(c);
    add(st.order2, {n, s}, -0.5 * norm1);
  }
  return st;
}

double factorized_energy(const ModelParams& p, int n, int s) {
  require_level(n, s);
  require_resonance(p, "factorized_energy");
  require_regular(p);
  const auto gamma = p.gamma();
  if (!gamma) throw SmallDenominator("gamma is singular at 2K = nu");
  return (p.nu * (n + 0.5) + s * p.K) * (1.0 + s * *gamma) - 0.5 * p.nu;
}

SpectralLine spectral_line(const ModelParams& p, int n, int s) {
  SpectralLine line;
  line.n = n;
  line.s = s;
  line.E0 = unperturbed_energy(p, n, s);
  line.E2_times_eps2 = p.epsilon * p.epsilon * second_order_energy(p, n, s);
  line.E_total = line.E0 + line.E2_times_eps2;
  if (p.resonant()) line.E_star = factorized_energy(p, n, s);
  return line;
}

std::vector<SpectralLine> spectral_lines(const ModelParams& p, int n_levels) {
  std::vector<SpectralLine> out;
  out.reserve(2 * std::size_t(n_levels + 1));
  for (int n = 0; n <= n_levels; ++n) {
    for (int s : {-1, +1}) out.push_back(spectral_line(p, n, s));
  }
  return out;
}

Vector to_bare(const PerturbedState& state, const ModelParams& p, const FockTruncation& trunc,
               int max_order) {
  Vector v = Vector::Zero(trunc.dim());
  const Eigen::Vector2cd chi[2] = {unperturbed_spinor(p, -1), unperturbed_spinor(p, +1)};
  auto accumulate = [&](const Amplitudes& amps, double weight) {
    for (const auto& [b, c] : amps) {
      if (b.n > trunc.n_max()) {
        throw TruncationError("component at n = " + std::to_string(b.n) + " beyond n_max");
      }
      v.segment<2>(2 * Index(b.n)) += weight * c * chi[b.s == 1 ? 1 : 0];
    }
  };
  accumulate(state.order0, 1.0);
  if (max_order >= 1) accumulate(state.order1, p.epsilon);
  if (max_order >= 2) accumulate(state.order2, p.epsilon * p.epsilon);
  return v;
}

PerturbedState renormalized(const PerturbedState& state, const ModelParams& p,
                            const FockTruncation& trunc, int max_order) {
  const double norm = to_bare(state, p, trunc, max_order).norm();
  PerturbedState out = state;
  for (Amplitudes* amps : {&out.order0, &out.order1, &out.order2}) {
    for (auto& [b, c] : *amps) c /= norm;
  }
  return out;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Weak: return "Weak";
    case Regime::IntermediateBelow: return "IntermediateBelow";
    case Regime::ExcludedBand: return "ExcludedBand";
    case Regime::IntermediateAbove: return "IntermediateAbove";
    case Regime::Strong: return "Strong";
  }
  return "?";
}

RegimeReport classify_regime(const ModelParams& p) {
  p.validate();
  require_resonance(p, "classify_regime");
  RegimeReport rep;
  rep.r = 2.0 * p.K / p.nu;
  rep.m = int(std::floor(rep.r));
  rep.delta_frac = rep.r - rep.m;
  rep.gamma = p.gamma();
  rep.perturbative = rep.gamma && std::abs(*rep.gamma) <= kGammaMax &&
                     std::abs(2.0 * p.K - p.nu) > kSingularTol * p.nu;
  if (!rep.perturbative) {
    rep.regime = Regime::ExcludedBand;
    rep.notes = "|gamma| exceeds the perturbative bound; the RWA / JC description applies";
  } else if (rep.r <= kWeakRatio) {
    rep.regime = Regime::Weak;
    rep.notes = "intra-n doublets (n,-1)/(n,+1)";
  } else if (rep.r >= kStrongRatio) {
    rep.regime = Regime::Strong;
    rep.notes = "interband doublets (n+" + std::to_string(rep.m) + ",-1)/(n,+1)";
  } else {
    rep.regime = rep.r < 1.0 ? Regime::IntermediateBelow : Regime::IntermediateAbove;
    rep.notes = "factor (1 + s gamma) reshapes the level spacing of each s ladder";
  }
  return rep;
}

std::vector<Doublet> find_doublets(std::span<const SpectralLine> lines, const ModelParams& p) {
  const RegimeReport rep = classify_regime(p);
  std::map<BasisIndex, double> energy;
  for (const SpectralLine& l : lines) energy[{l.n, l.s}] = l.E_total;

  std::vector<Doublet> out;
  auto pair = [&](BasisIndex lower, BasisIndex upper) {
    const auto lo = energy.find(lower);
    const auto hi = energy.find(upper);
    if (lo != energy.end() && hi != energy.end()) {
      out.push_back({lower, upper, hi->second - lo->second});
    }
  };
  int n_top = 0;
  for (const auto& [b, e] : energy) n_top = std::max(n_top, b.n);

  if (rep.regime == Regime::Weak) {
    for (int n = 0; n <= n_top; ++n) pair({n, -1}, {n, +1});
  } else if (rep.regime == Regime::Strong) {
    for (int n = 0; n + rep.m <= n_top; ++n) pair({n + rep.m, -1}, {n, +1});
  }
  return out;
}

}  // namespace ldspectra
