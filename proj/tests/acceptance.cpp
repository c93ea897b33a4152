// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <cstdio>
#include <vector>

#include "ldspectra/validation.hpp"

using namespace ldspectra;

namespace {

// Wall-clock budgets per criterion (seconds); 0 means none.
double budget(const std::string& id) {
  if (id == "1") return 10.0;
  if (id == "2" || id == "3") return 60.0;
  if (id == "8") return 120.0;
  return 0.0;
}

}  // namespace

int main() {
  ModelParams base;
  base.nu = 1.0;
  base.K = 0.25;
  base.delta = 0.0;
  base.epsilon = 0.05;

  std::vector<CheckResult> results;
  auto run = [&](CheckResult r) {
    const double limit = budget(r.id);
    if (limit > 0 && r.seconds > limit) {
      r.pass = false;
      r.detail += "; runtime over budget";
    }
    std::printf("[%s] criterion %s: %s -- %s (%.2f s)\n", r.pass ? "PASS" : "FAIL", r.id.c_str(),
                r.description.c_str(), r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    results.push_back(std::move(r));
  };

  run(check_algebra(FockTruncation(120, 10)));
  run(check_unitary_chain(base, 120, 15, 40, 10.0));
  ScalingOptions scaling;
  run(check_scaling(base, scaling));
  run(check_first_order_energy(10, 20, 2024));
  run(check_factorized_identity());
  run(check_regimes(0.05));
  run(check_jc(JCOptions{}));
  run(check_crossover(0.05, 3));
  run(check_dynamics(0.01, 0.005));

  int failed = 0;
  for (const CheckResult& r : results) failed += r.pass ? 0 : 1;
  std::printf("acceptance: %zu criteria, %d passed, %d failed\n", results.size(), int(results.size()) - failed, failed);
  return failed == 0 ? 0 : 1;
}
