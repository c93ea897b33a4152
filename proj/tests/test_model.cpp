#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ldspectra/model.hpp"
#include "ldspectra/oracle.hpp"

using namespace ldspectra;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex I{0.0, 1.0};

ModelParams params(double K, double eps, double delta = 0.0) {
  ModelParams p;
  p.K = K;
  p.epsilon = eps;
  p.delta = delta;
  return p;
}

}  // namespace

TEST_CASE("parameter validation and derived quantities") {
  CHECK_THROWS_AS(params(-0.1, 0.0).validate(), ConfigError);
  CHECK_THROWS_AS(params(0.1, -0.01).validate(), ConfigError);
  ModelParams bad;
  bad.nu = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.nu = std::nan("");
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  const ModelParams p = params(0.25, 0.05, 0.3);
  CHECK(p.eta() == doctest::Approx(std::sqrt(2.0) * kPi * 0.05).scale(0));
  CHECK(p.C() == doctest::Approx(std::sqrt(0.34)).scale(0));
  CHECK(p.sin_alpha() == doctest::Approx(0.3 / std::sqrt(0.34)).scale(0));
  CHECK(p.cos_alpha() == doctest::Approx(0.5 / std::sqrt(0.34)).scale(0));
  CHECK(p.laser_frequency() == 20.0);
  CHECK(p.atomic_frequency() == doctest::Approx(19.7).scale(0));
  CHECK(params(0.25, 0.05).gamma().value() == doctest::Approx(-0.016449).epsilon(1e-4).scale(0));
  CHECK_FALSE(params(0.5, 0.05).gamma().has_value());
  CHECK(params(0.25, 0.05).jc_coupling() == doctest::Approx(-0.1110721).epsilon(1e-6).scale(0));
}

TEST_CASE("physical inputs convert through the scalar-shift identity") {
  PhysicalInputs in;
  in.M = 1.0;
  in.nu = 1.0;
  in.k_L = 0.4;
  in.lambda_coupling = 0.5;
  in.E_L = 0.6;
  in.omega_0 = 19.0;
  in.omega_L = 19.5;
  const ModelParams p = ModelParams::from_physical(in);
  CHECK(p.K == doctest::Approx(0.3).scale(0));
  CHECK(p.delta == doctest::Approx(0.5).scale(0));
  CHECK(p.epsilon * p.epsilon == doctest::Approx(0.16 / (4.0 * kPi * kPi)).scale(0));
  // hbar^2 k_L^2 / 8M
  CHECK(p.scalar_shift() == doctest::Approx(0.16 / 8.0).scale(0));
  CHECK(p.eta() == doctest::Approx(0.4 / std::sqrt(2.0)).scale(0));
}

TEST_CASE("H_eta at epsilon = 0") {
  const FockTruncation t(30, 10);
  const auto ev = diagonalize(build_H_eta(params(0.25, 0.0), t)).eigenvalues;
  CHECK(ev(0) == doctest::Approx(-0.25).epsilon(1e-14).scale(0));
  CHECK(ev(1) == doctest::Approx(0.25).epsilon(1e-14).scale(0));
  const auto ev2 = diagonalize(build_H_eta(params(0.25, 0.0, 0.3), t)).eigenvalues;
  CHECK(ev2(0) == doctest::Approx(-0.5 * std::sqrt(0.34)).epsilon(1e-14).scale(0));
  CHECK(ev2(1) == doctest::Approx(0.5 * std::sqrt(0.34)).epsilon(1e-14).scale(0));
  CHECK(ev2(0) == doctest::Approx(-0.29155).epsilon(1e-5).scale(0));
  // Full spectrum nu n +- C/2.
  std::vector<double> want;
  for (int n = 0; n <= 30; ++n)
    for (int s : {-1, 1}) want.push_back(n + 0.5 * s * std::sqrt(0.34));
  std::sort(want.begin(), want.end());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(ev2(Index(i)) - want[i]) <= 1e-12);
}

TEST_CASE("H_eta = H0 + eps W entrywise") {
  const FockTruncation t(15, 3);
  const ModelParams p = params(0.3, 0.07, -0.2);
  const Matrix h = build_H_eta(p, t).matrix();
  const Matrix w = build_W(p, t).matrix();
  CHECK(max_abs(h - build_H0(p, t).matrix() - p.epsilon * w) <= 1e-14);
  // W from ladder and spin matrices built here.
  const Matrix a = embed_fock(fock_annihilation(15), t);
  const Matrix sz = embed_spin(spin_matrices().Sz, t);
  CHECK(max_abs(w - I * std::sqrt(2.0) * kPi * p.nu * (a.adjoint() - a) * sz) <= 1e-14);
  // Linearity in epsilon and quadratic scalar part.
  const ModelParams q = params(0.3, 0.02, -0.2);
  const Matrix diff = h - build_H_eta(q, t).matrix();
  const Matrix id = Matrix::Identity(t.dim(), t.dim());
  const double scalar = 0.5 * kPi * kPi * (0.07 * 0.07 - 0.02 * 0.02);
  CHECK(max_abs(diff - (0.07 - 0.02) * w - scalar * id) <= 1e-14);
}

TEST_CASE("H2 structure") {
  const FockTruncation t(40, 10);
  ModelParams p = params(0.25, 0.0, 0.2);
  const Matrix a = embed_fock(fock_annihilation(40), t);
  const SpinMatrices S = spin_matrices();
  const Matrix bare = p.nu * a.adjoint() * a - p.delta * embed_spin(S.Sz, t) + 2.0 * p.K * embed_spin(S.Sx, t);
  CHECK(max_abs(build_H2(p, t).matrix() - bare) <= 1e-14);
  p.delta = 0.0;
  p.epsilon = 0.1 / (std::sqrt(2.0) * kPi);  // eta = 0.1
  const OperatorMatrix h2 = build_H2(p, t);
  CHECK(h2.is_hermitian());
  const Complex fc = h2.matrix()(BasisIndex{0, +1}.flat(), BasisIndex{0, -1}.flat());
  CHECK(std::abs(fc - 0.25 * std::exp(-0.005)) <= 1e-12);
  CHECK(std::abs(fc) == doctest::Approx(0.248753).epsilon(1e-6).scale(0));
}

TEST_CASE("lab Hamiltonian") {
  const FockTruncation t(30, 10);
  ModelParams p = params(0.25, 0.05, 0.1);
  const double wl = p.laser_frequency();
  const Matrix h0 = build_Ht(p, t, 0.0).matrix();
  const Matrix sz = embed_spin(spin_matrices().Sz, t);
  // At t = 0 the phase is 1: H_t(0) = H2 + (omega_0 + delta) Sz.
  CHECK(max_abs(h0 - build_H2(p, t).matrix() - (p.atomic_frequency() + p.delta) * sz) <= 1e-12);
  CHECK(max_abs(build_Ht(p, t, 0.3 + 2.0 * kPi / wl).matrix() - build_Ht(p, t, 0.3).matrix()) <= 1e-12);
  const Index r = BasisIndex{2, +1}.flat(), c = BasisIndex{2, -1}.flat();
  const double mag = std::abs(h0(r, c));
  for (double tt : {0.1, 0.7, 1.3, 5.0, 11.1}) {
    const OperatorMatrix ht = build_Ht(p, t, tt);
    CHECK(ht.is_hermitian());
    CHECK(std::abs(std::abs(ht.matrix()(r, c)) - mag) <= 1e-14);
  }
  const LabHamiltonian lab(p, t);
  Vector psi = Vector::Random(t.dim());
  Vector out(t.dim());
  lab.apply(0.77, psi, out);
  CHECK((out - build_Ht(p, t, 0.77).matrix() * psi).norm() <= 1e-12);
  CHECK(max_abs(lab.at(0.77) - build_Ht(p, t, 0.77).matrix()) <= 1e-12);
}

TEST_CASE("H_JC construction") {
  const FockTruncation t(20, 5);
  CHECK_THROWS_AS(build_H_JC(params(0.25, 0.05, 0.1), t), ResonanceRequired);
  const ModelParams p = params(0.25, 0.05);
  const Matrix hjc = build_H_JC(p, t).matrix();
  const Matrix a = embed_fock(fock_annihilation(20), t);
  const SpinMatrices S = spin_matrices();
  const double G = -kPi * p.nu * p.epsilon / std::sqrt(2.0);
  Matrix want = p.nu * a.adjoint() * a + 2.0 * p.K * embed_spin(S.Dz, t) +
                G * (embed_spin(S.Dm, t) * a.adjoint() + embed_spin(S.Dp, t) * a);
  want.diagonal().array() += p.scalar_shift();
  CHECK(max_abs(hjc - want) <= 1e-14);
  // H_eta differs from H_JC by the counter-rotating term only.
  const Matrix counter = -G * (embed_spin(S.Dp, t) * a.adjoint() + embed_spin(S.Dm, t) * a);
  CHECK(max_abs(build_H_eta(p, t).matrix() - hjc - counter) <= 1e-14);
  // That difference only couples n to n +- 1.
  for (Index r = 0; r < t.dim(); ++r)
    for (Index c = 0; c < t.dim(); ++c)
      if (std::abs(r / 2 - c / 2) != 1) REQUIRE(std::abs(counter(r, c)) == 0.0);
}

TEST_CASE("unitary equivalence of H2 and H_eta") {
  CHECK(check_equivalence(params(0.25, 0.0), FockTruncation(40, 10)).deviation == 0.0);
  const EquivalenceReport rep = check_equivalence(params(0.25, 0.05), FockTruncation(80, 10));
  CHECK(rep.pass);
  CHECK(rep.deviation <= 1e-8);
  // Shrinking the guard never improves the agreement.
  double previous = 0.0;
  for (int guard : {10, 6, 3, 1, 0}) {
    const double d = check_equivalence(params(0.25, 0.3), FockTruncation(20, guard)).deviation;
    CHECK(d >= previous - 1e-15);
    previous = d;
  }
  CHECK(previous > 1e-6);
}
