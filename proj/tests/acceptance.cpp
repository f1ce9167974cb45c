// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dnodal/asymptotics.hpp"
#include "dnodal/errors.hpp"
#include "dnodal/forward.hpp"
#include "dnodal/harness.hpp"
#include "dnodal/inverse.hpp"
#include "support.hpp"

using namespace dnodal;
using namespace dnodal::test;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

const RoundTrip& example_round_trip() {
  static const RoundTrip rt = run_round_trip(paper_example_problem(), 200, {});
  return rt;
}

// Phase solution when m = 0 and M = 0.
Outcome exact_phase() {
  const ProblemSpec p = exact_problem(kPi / 4, kPi / 6, 2000);
  const auto start = Clock::now();
  double worst = 0.0;
  for (double lambda : {1.0, 5.5, 20.0}) {
    const Trajectory t = solve(p, lambda);
    const Eigen::ArrayXd x = t.grid.abscissae();
    const Eigen::ArrayXd phase = lambda * x - x.sin() - p.alpha;
    worst = std::max({worst, sup_diff(t.phi1, phase.cos()), sup_diff(t.phi2, phase.sin())});
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-8 && elapsed < 1.0, fmt("sup error %.2e, %.3f s", worst, elapsed)};
}

Outcome exact_eigenvalues() {
  double worst = 0.0;
  for (const Eigenvalue& ev : find_eigenvalues(exact_problem(kPi / 4, kPi / 6, 2000), 1, 50))
    worst = std::max(worst, std::abs(ev.lambda - (ev.index + 1.0 / 12)));
  return {worst <= 1e-8, fmt("max |lambda_n - n - 1/12| = %.2e over n = 1..50", worst)};
}

Outcome builtin_example() {
  const auto start = Clock::now();
  const RoundTrip& rt = example_round_trip();
  const double elapsed = seconds_since(start);
  bool ok = elapsed < 300;
  std::string detail;
  for (const Check& c : paper_example_checks(rt.reconstruction)) {
    ok = ok && c.pass();
    detail += fmt("%s=%.6g ", c.name.c_str(), c.value);
  }
  return {ok, detail + fmt("(%.1f s)", elapsed)};
}

Outcome eigenvalue_offset() {
  const ProblemSpec p = example1();
  bool ok = true;
  std::string detail;
  for (auto [n, budget] : {std::pair{100, 0.05}, std::pair{200, 0.03}}) {
    const Discretization d(p, kRoundTripPointsPerIndex * n + 1);
    const double offset = n * (find_eigenvalue(d, n).lambda - n);
    ok = ok && std::abs(offset - 0.5) <= budget;
    detail += fmt("n=%d: n(lambda-n)=%.6f ", n, offset);
  }
  return {ok, detail};
}

double max_n2_node_gap(int n, NodalExpansion expansion) {
  const ProblemSpec p = example1();
  const Discretization d(p, kRoundTripPointsPerIndex * n + 1);
  const NodalSet s = find_nodes(d, find_eigenvalue(d, n));
  double worst = 0.0;
  for (std::size_t j = 0; j < s.nodes.size(); ++j)
    worst = std::max(worst, double(n) * n * std::abs(s.nodes[j] - node_asymptotic(p, n, int(j), expansion).x));
  return worst;
}

Outcome nodal_expansion() {
  const double p100 = max_n2_node_gap(100, NodalExpansion::Printed);
  const double p200 = max_n2_node_gap(200, NodalExpansion::Printed);
  const double c100 = max_n2_node_gap(100, NodalExpansion::Complete);
  const double c200 = max_n2_node_gap(200, NodalExpansion::Complete);
  const bool ok = std::isfinite(p100) && std::isfinite(p200) && p200 <= p100;
  return {ok, fmt("displayed expansion: n^2 max diff %.4f (n=100), %.4f (n=200); "
                  "with the x(c^2-d)/n^2 term: %.4f, %.4f",
                  p100, p200, c100, c200)};
}

Outcome synthetic_inversion() {
  const ProblemSpec p = example1();
  NodalData data;
  for (int n : {1000, 2000, 4000})
    for (int j = 0; j <= n; ++j) {
      const double x = node_asymptotic(p, n, j).x;
      if (x > 0 && x < kPi) data.levels[n].push_back(x);
    }
  const Reconstruction r = reconstruct(data, {});
  double f_err = 0.0, g_err = 0.0;
  for (int k = 1; k <= 9; ++k) {
    const Eigen::Index i = 20 * k;
    const double x = r.f.x(i);
    f_err = std::max(f_err, std::abs(r.f[i] - (kPi / 4 + std::sin(x))));
    g_err = std::max(g_err, std::abs(r.g[i] - (1 + x + std::sin(x))));
  }
  return {f_err <= 1e-4 && g_err <= 1e-3, fmt("f error %.2e, g error %.2e", f_err, g_err)};
}

Outcome residuals() {
  const RoundTrip& rt = example_round_trip();
  const ProblemSpec p = paper_example_problem(rt.grid_points);
  const Discretization coarse(p, rt.grid_points), fine(p, 2 * rt.grid_points - 1);
  bool ok = true;
  double worst = 0.0, min_ratio = INFINITY;
  for (std::size_t k = 0; k < rt.eigenvalues.size(); ++k) {
    worst = std::max(worst, rt.residuals[k]);
    const double lambda = rt.eigenvalues[k].lambda;
    const double r1 = integral_residual(p, coarse.solve(lambda));
    const double r2 = integral_residual(p, fine.solve(lambda));
    min_ratio = std::min(min_ratio, r1 / r2);
  }
  ok = worst <= 1e-5 && min_ratio >= 4;
  return {ok, fmt("max residual %.2e, min refinement ratio %.2f", worst, min_ratio)};
}

Outcome node_counts() {
  const ProblemSpec p = example1();
  const Discretization d(p);
  bool ok = true;
  std::size_t previous = 0;
  for (const Eigenvalue& ev : find_eigenvalues(d, 10, 50)) {
    const std::size_t count = find_nodes(d, ev).nodes.size();
    if (ev.index > 10) ok = ok && count == previous + 1;
    previous = count;
  }
  const Discretization d100(p, kRoundTripPointsPerIndex * 100 + 1);
  const NodalSet s = find_nodes(d100, find_eigenvalue(d100, 100));
  double worst = 0.0;
  for (std::size_t j = 1; j < s.nodes.size(); ++j)
    worst = std::max(worst, std::abs(s.nodes[j] - s.nodes[j - 1] - kPi / 100));
  ok = ok && worst <= 0.02 * kPi / 100;
  return {ok, fmt("counts step by one over n = 10..50; n=100 spacing deviation %.2e", worst)};
}

Outcome degenerate_alpha() {
  ProblemSpec p = paper_example_problem();
  p.alpha = 0.0;
  bool raised = false;
  try {
    run_round_trip(p, 200, {});
  } catch (const DegenerateAlpha&) {
    raised = true;
  }
  InverseOptions o;
  o.m_known = 1.0;
  const RoundTripMetrics m = run_round_trip(p, 200, o).metrics;
  const bool ok = raised && m.V_sup_error <= 0.05 && m.Lprime_sup_error <= 0.15 && m.alpha_error <= 0.01 &&
                  m.beta_error <= 0.01 && m.m_error <= 0.1;
  return {ok, fmt("DegenerateAlpha %s; with m known: V %.2e, L' %.2e, alpha %.2e, beta %.2e",
                  raised ? "raised" : "NOT raised", m.V_sup_error, m.Lprime_sup_error, m.alpha_error,
                  m.beta_error)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exact phase solution", exact_phase},
      {"exact eigenvalues n + 1/12", exact_eigenvalues},
      {"built-in example round trip", builtin_example},
      {"eigenvalue offset n(lambda_n - n)", eigenvalue_offset},
      {"nodal expansion remainder", nodal_expansion},
      {"synthetic nodal inversion", synthetic_inversion},
      {"integral-equation residuals", residuals},
      {"node counts and spacing", node_counts},
      {"alpha = 0 degeneracy", degenerate_alpha},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %d %-36s %s\n", o.pass ? "PASS" : "FAIL", int(k + 1), criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
