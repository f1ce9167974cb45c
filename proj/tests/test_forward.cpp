#include <doctest.h>

#include <cmath>

#include "dnodal/asymptotics.hpp"
#include "dnodal/errors.hpp"
#include "dnodal/forward.hpp"
#include "support.hpp"

using namespace dnodal;
using namespace dnodal::test;

namespace {

double exact_sup_error(const ProblemSpec& p, double lambda) {
  const Trajectory t = solve(p, lambda);
  const Eigen::ArrayXd x = t.grid.abscissae();
  const Eigen::ArrayXd phase = lambda * x - x.sin() - p.alpha;
  return std::max(sup_diff(t.phi1, phase.cos()), sup_diff(t.phi2, phase.sin()));
}

}  // namespace

TEST_CASE("initial condition is exact") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const ProblemSpec p = rng.problem();
    const Trajectory t = solve(p, rng.uniform(-10, 30));
    CHECK(t.phi1[0] == std::cos(p.alpha));
    CHECK(t.phi2[0] == -std::sin(p.alpha));
  }
}

TEST_CASE("zero problem is a rotation") {
  const ProblemSpec p = zero_problem(0.0, 0.0);
  const Trajectory t = solve(p, 1.0);
  CHECK(std::abs(t.phi1[t.phi1.size() - 1] + 1.0) < 1e-8);
  CHECK(std::abs(t.phi2[t.phi2.size() - 1]) < 1e-8);
  CHECK(std::abs(characteristic(zero_problem(0.0, 0.0), 3.0)) < 1e-8);
}

TEST_CASE("exact phase solution when m = 0 and M = 0") {
  const ProblemSpec p = exact_problem(kPi / 4, kPi / 6, 2000);
  for (double lambda : {1.0, 5.5, 20.0}) CHECK(exact_sup_error(p, lambda) <= 1e-8);
}

TEST_CASE("property: fourth-order grid refinement in the exact case") {
  Rng rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    ProblemSpec p = exact_problem(rng.uniform(0, 1.5), 0.0, rng.integer(100, 300));
    const double lambda = rng.uniform(1, 20);
    const double coarse = exact_sup_error(p, lambda);
    p.grid_points = 2 * p.grid_points - 1;
    const double fine = exact_sup_error(p, lambda);
    if (coarse > 1e-11) CHECK(fine * 8 <= coarse);
  }
}

TEST_CASE("agreement with the Picard oracle") {
  // The oracle solves the integral form by trapezoid Picard iteration.
  SUBCASE("worked example at lambda = 1.5") {
    const ProblemSpec p = example1(2001);
    const OracleSolution o = picard_oracle(p, 1.5, 2000);
    const Trajectory t = solve(p, 1.5);
    CHECK(sup_diff(t.phi1, o.phi1) <= 1e-6);
    CHECK(sup_diff(t.phi2, o.phi2) <= 1e-6);
    const Eigen::Index last = o.x.size() - 1;
    const double oracle_delta = o.phi1[last] * std::sin(p.beta) + o.phi2[last] * std::cos(p.beta);
    CHECK(std::abs(characteristic(p, 1.5) - oracle_delta) <= 1e-6);
  }
  SUBCASE("random problems with kernels in every entry") {
    Rng rng(23);
    for (int trial = 0; trial < 6; ++trial) {
      ProblemSpec p = rng.problem(0.7);
      p.grid_points = 1001;
      const double lambda = rng.uniform(-6, 6);
      const OracleSolution o = picard_oracle(p, lambda, 1000);
      const Trajectory t = solve(p, lambda);
      CHECK(sup_diff(t.phi1, o.phi1) <= 1e-6);
      CHECK(sup_diff(t.phi2, o.phi2) <= 1e-6);
    }
  }
}

TEST_CASE("eigenvalues") {
  SUBCASE("zero problem") {
    const auto evs = find_eigenvalues(zero_problem(0.0, 0.0), 1, 20);
    REQUIRE(evs.size() == 20);
    for (const Eigenvalue& ev : evs) CHECK(std::abs(ev.lambda - ev.index) <= 1e-8);
  }
  SUBCASE("exact family") {
    const auto evs = find_eigenvalues(exact_problem(kPi / 4, kPi / 6), 1, 50);
    for (const Eigenvalue& ev : evs) CHECK(std::abs(ev.lambda - (ev.index + 1.0 / 12)) <= 1e-8);
  }
  SUBCASE("worked example offset at n = 100") {
    const std::vector<Eigenvalue> evs = find_eigenvalues(example1(8001), 100, 100);
    const double offset = 100 * (evs[0].lambda - 100);
    CHECK(offset >= 0.45);
    CHECK(offset <= 0.55);
    CHECK(evs[0].residual <= kRootTolerance);
  }
  SUBCASE("negative indices on request") {
    const std::vector<Eigenvalue> evs = find_eigenvalues(exact_problem(kPi / 4, kPi / 6), -5, -1);
    for (const Eigenvalue& ev : evs) CHECK(std::abs(ev.lambda - (ev.index + 1.0 / 12)) <= 1e-8);
  }
  SUBCASE("scan mode finds the same roots") {
    const ProblemSpec p = exact_problem(kPi / 4, kPi / 6);
    const std::vector<Eigenvalue> scanned = scan_eigenvalues(p, 0.5, 6.5, 600);
    REQUIRE(scanned.size() == 6);
    for (std::size_t i = 0; i < scanned.size(); ++i) {
      CHECK(scanned[i].index == int(i) + 1);
      CHECK(std::abs(scanned[i].lambda - (scanned[i].index + 1.0 / 12)) <= 1e-8);
    }
  }
}

TEST_CASE("property: eigenvalues strictly increase and sit near the seed") {
  Rng rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    ProblemSpec p = rng.problem(0.3);
    p.grid_points = 1001;
    const std::vector<Eigenvalue> evs = find_eigenvalues(p, 5, 15);
    for (std::size_t i = 1; i < evs.size(); ++i) CHECK(evs[i].lambda > evs[i - 1].lambda);
    for (const Eigenvalue& ev : evs) {
      CHECK(std::abs(ev.residual) <= kRootTolerance);
      CHECK(std::abs(ev.lambda - ev.seed) < kBracketHalfWidth + kBracketExpansion);
    }
  }
}

TEST_CASE("bracket failure names the index") {
  // Far beyond what 64 grid points resolve: the marched solution overflows.
  const ProblemSpec p = zero_problem(0.3, 0.2, 64);
  try {
    find_eigenvalues(p, 100000, 100000);
    FAIL("expected BracketFailure");
  } catch (const BracketFailure& e) {
    CHECK(e.index() == 100000);
    CHECK(std::string(e.what()).find("n=100000") != std::string::npos);
  }
}

TEST_CASE("nodes") {
  SUBCASE("zeros of cos nx") {
    const ProblemSpec p = zero_problem(0.0, 0.0);
    const Eigenvalue ev = find_eigenvalues(p, 10, 10)[0];
    const NodalSet s = find_nodes(p, ev);
    REQUIRE(s.nodes.size() == 10);
    for (int j = 0; j < 10; ++j) CHECK(std::abs(s.nodes[j] - (j + 0.5) * kPi / 10) <= 1e-8);
  }
  SUBCASE("exact phase against a scalar root finder") {
    const ProblemSpec p = exact_problem(kPi / 4, kPi / 6);
    for (const Eigenvalue& ev : find_eigenvalues(p, 3, 30)) {
      const NodalSet s = find_nodes(p, ev);
      const std::vector<double> expected = exact_phase_nodes(p.V, p.alpha, ev.lambda);
      REQUIRE(s.nodes.size() == expected.size());
      for (std::size_t j = 0; j < expected.size(); ++j) CHECK(std::abs(s.nodes[j] - expected[j]) <= 1e-8);
    }
  }
  SUBCASE("worked example spacing at n = 100") {
    const ProblemSpec p = example1(8001);
    const NodalSet s = find_nodes(p, find_eigenvalues(p, 100, 100)[0]);
    CHECK(s.nodes.size() == 100);
    const double h = kPi / 100;
    double worst = 0.0;
    for (std::size_t j = 1; j < s.nodes.size(); ++j) worst = std::max(worst, std::abs(s.nodes[j] - s.nodes[j - 1] - h));
    CHECK(worst <= 0.02 * h);
  }
}

TEST_CASE("property: nodes strictly increase inside (0, pi)") {
  Rng rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    ProblemSpec p = rng.problem(0.3);
    p.grid_points = 1001;
    const Discretization d(p);
    for (const Eigenvalue& ev : find_eigenvalues(d, 5, 15)) {
      const NodalSet s = find_nodes(d, ev);
      REQUIRE(!s.nodes.empty());
      CHECK(s.nodes.front() > 0.0);
      CHECK(s.nodes.back() < kPi);
      for (std::size_t j = 1; j < s.nodes.size(); ++j) CHECK(s.nodes[j] > s.nodes[j - 1]);
      // Every node is a zero of phi_1.
      const Trajectory t = d.solve(ev.lambda);
      const SampledFunction phi1(t.grid, t.phi1);
      for (double x : s.nodes) CHECK(std::abs(phi1.interpolate(x)) < 1e-3);
    }
  }
}

TEST_CASE("integral-equation residual") {
  SUBCASE("zero problem") {
    const ProblemSpec p = zero_problem(0.4, 0.0);
    for (double lambda : {1.0, 7.5, 20.0}) CHECK(integral_residual(p, solve(p, lambda)) <= 1e-8);
  }
  SUBCASE("exact case at lambda = 5 under grid refinement") {
    ProblemSpec p = exact_problem(kPi / 4, 0.0, 2000);
    const double coarse = integral_residual(p, solve(p, 5.0));
    CHECK(coarse <= 1e-5);
    p.grid_points = 3999;
    const double fine = integral_residual(p, solve(p, 5.0));
    CHECK(fine * 4 <= coarse);
  }
  SUBCASE("worked example at the fifth eigenvalue") {
    const ProblemSpec p = example1(2001);
    const Eigenvalue ev = find_eigenvalues(p, 5, 5)[0];
    CHECK(integral_residual(p, solve(p, ev.lambda)) <= 1e-5);
  }
  SUBCASE("a wrong trajectory is detected") {
    const ProblemSpec p = example1(2001);
    Trajectory t = solve(p, 3.3);
    t.phi1[1000] += 1e-3;
    CHECK(integral_residual(p, t) >= 5e-4);
  }
}
