#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ldspectra/jc.hpp"
#include "ldspectra/oracle.hpp"

using namespace ldspectra;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams params(double K, double eps) {
  ModelParams p;
  p.K = K;
  p.epsilon = eps;
  return p;
}

}  // namespace

TEST_CASE("closed-form JC levels") {
  CHECK(jc_eigenvalues(params(0.3, 0.0), 0).lower == doctest::Approx(-0.3).scale(0));
  CHECK_FALSE(jc_eigenvalues(params(0.3, 0.0), 0).upper);
  const ModelParams p = params(0.5, 0.05);
  const JCLevels l1 = jc_eigenvalues(p, 1);
  const double shift = 0.5 * kPi * kPi * 0.0025;
  CHECK(shift == doctest::Approx(0.012337).epsilon(1e-5).scale(0));
  CHECK(l1.lower == doctest::Approx(0.5 - 0.1110721 + shift).epsilon(1e-7).scale(0));
  CHECK(*l1.upper == doctest::Approx(0.5 + 0.1110721 + shift).epsilon(1e-7).scale(0));
  for (double K : {0.1, 0.3, 0.8}) {
    for (int n = 1; n < 6; ++n) {
      const JCLevels l = jc_eigenvalues(params(K, 0.0), n);
      CHECK(l.lower == doctest::Approx(n - 0.5 - std::abs(1 - 2 * K) / 2).epsilon(1e-14).scale(0));
      CHECK(*l.upper == doctest::Approx(n - 0.5 + std::abs(1 - 2 * K) / 2).epsilon(1e-14).scale(0));
    }
  }
  ModelParams off = p;
  off.delta = 0.1;
  CHECK_THROWS_AS(jc_eigenvalues(off, 1), ResonanceRequired);
}

TEST_CASE("JC blocks") {
  const FockTruncation t(40, 10);
  for (double K : {0.25, 0.5, 0.9}) {
    for (double eps : {0.0, 0.05}) {
      const ModelParams p = params(K, eps);
      const JCBlockSet set = jc_blocks(p, t);
      CHECK(set.off_block_max <= 1e-12);
      CHECK(set.ground == doctest::Approx(-K + p.scalar_shift()).epsilon(1e-12).scale(0));
      std::vector<double> block_spectrum{set.ground};
      for (const JCBlock& b : set.blocks) {
        const double G = p.jc_coupling();
        Eigen::Matrix2d want;
        want << (b.n - 1) + K, G * std::sqrt(double(b.n)), G * std::sqrt(double(b.n)), b.n - K;
        want.diagonal().array() += p.scalar_shift();
        CHECK((b.matrix - want).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(b.matrix.trace() == doctest::Approx(2 * b.n - 1 + 2 * p.scalar_shift()).epsilon(1e-13).scale(0));
        const JCLevels l = jc_eigenvalues(p, b.n);
        CHECK(std::abs(b.eigenvalues(0) - l.lower) <= 1e-12);
        CHECK(std::abs(b.eigenvalues(1) - *l.upper) <= 1e-12);
        block_spectrum.push_back(b.eigenvalues(0));
        block_spectrum.push_back(b.eigenvalues(1));
      }
      // Dense spectrum of H_JC: the guarded blocks are exact eigenvalues.
      const auto dense = diagonalize(build_H_JC(p, t)).eigenvalues;
      for (double e : block_spectrum) {
        double best = 1e9;
        for (Index i = 0; i < dense.size(); ++i) best = std::min(best, std::abs(dense(i) - e));
        CHECK(best <= 1e-10);
      }
    }
  }
  const JCBlockSet res = jc_blocks(params(0.5, 0.05), t);
  CHECK(res.blocks.front().matrix(0, 1) == doctest::Approx(params(0.5, 0.05).jc_coupling()).epsilon(1e-14).scale(0));
}

TEST_CASE("JC dynamical algebra") {
  for (double K : {0.25, 0.5, 1.2}) {
    const AlgebraReport rep = verify_dynamical_algebra(params(K, 0.05), FockTruncation(30, 10));
    CHECK(rep.checks.size() == 8);
    for (const AlgebraCheck& c : rep.checks) {
      INFO(c.name);
      CHECK(c.deviation <= 1e-10);
    }
    CHECK(rep.all_pass());
  }
}

TEST_CASE("splitting at 2K = nu is linear in epsilon") {
  std::vector<double> eps{0.01, 0.02, 0.04, 0.08}, split;
  for (double e : eps) {
    const JCLevels l = jc_eigenvalues(params(0.5, e), 1);
    split.push_back(*l.upper - l.lower);
    CHECK(split.back() == doctest::Approx(2 * kPi * e / std::sqrt(2.0)).epsilon(1e-13).scale(0));
  }
  CHECK(loglog_slope(eps, split) == doctest::Approx(1.0).epsilon(1e-12).scale(0));
}

TEST_CASE("residual state decomposition") {
  for (double K : {0.25, 0.5, 0.8}) {
    for (int n = 0; n <= 10; ++n) {
      for (int s : {-1, +1}) {
        const ResidualDecomposition r = decompose_R_state(params(K, 0.05), n, s);
        CHECK(r.spin_form_difference <= 1e-12);
        // The D-operator form agrees for s = -1 only; for s = +1 it differs by
        // (4K - 2nu) a (Sz + i Sy)|n,s>, which vanishes at n = 0 or 2K = nu.
        const double gap = std::abs(4 * K - 2.0) * std::sqrt(double(n));
        if (s == -1) {
          CHECK(r.d_form_difference <= 1e-12);
        } else {
          CHECK(r.d_form_difference == doctest::Approx(gap).epsilon(1e-12).scale(gap == 0.0 ? 1 : 0));
        }
      }
    }
  }
  const ResidualDecomposition at = decompose_R_state(params(0.5, 0.05), 3, -1);
  CHECK(at.counter_rotating_weight == 0.0);
  CHECK(at.rotating_weight > 0.0);
  // n = 0, s = -1: the lowering term has nothing to act on.
  const ResidualDecomposition vac = decompose_R_state(params(0.3, 0.05), 0, -1);
  CHECK(vac.ladder_form.norm() == doctest::Approx((1.0 - 0.6)).epsilon(1e-14).scale(0));
}
