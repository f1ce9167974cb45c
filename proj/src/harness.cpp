#include "dnodal/harness.hpp"

#include <algorithm>
#include <cmath>

#include "dnodal/asymptotics.hpp"
#include "dnodal/errors.hpp"
#include "dnodal/io.hpp"

namespace dnodal {

ProblemSpec paper_example_problem(int grid_points) {
  ProblemSpec p;
  p.V = FunctionSpec::cosine(1.0, 1);
  p.m = 1.0;
  p.kernel(0, 1).push_back({FunctionSpec::cosine(-1.0, 1), FunctionSpec::constant(1.0)});
  p.alpha = kPi / 4;
  p.beta = kPi / 4;
  p.grid_points = grid_points;
  return p;
}

std::vector<int> round_trip_levels(int n_max, const InverseOptions& opts) {
  if (!opts.n_values.empty()) {
    std::vector<int> out = opts.n_values;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  std::vector<int> out;
  for (int k = 0, n = n_max; k <= opts.extrapolation_depth; ++k, n /= 2) {
    if (n < 1) throw InvalidValue("too small for the extrapolation depth", "nMax");
    out.push_back(n);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RoundTripMetrics compare(const ProblemSpec& truth, const Reconstruction& r) {
  RoundTripMetrics m;
  const double gauge = omega(truth.V, kPi) / kPi;
  for (Eigen::Index i = 0; i < r.V.size(); ++i) {
    const double x = r.V.x(i);
    if (x < 0.1 * kPi - 1e-12 || x > 0.9 * kPi + 1e-12) continue;
    const double v_true = evaluate(truth.V, x) - gauge;
    const double lp_true = truth.kernel.diagonal(0, 1, x) - truth.kernel.diagonal(1, 0, x);
    m.V_sup_error = std::max(m.V_sup_error, std::abs(r.V[i] - v_true));
    m.Lprime_sup_error = std::max(m.Lprime_sup_error, std::abs(r.Lprime[i] - lp_true));
  }
  m.alpha_error = std::abs(r.alpha - truth.alpha);
  m.beta_error = std::abs(r.beta - truth.beta);
  m.m_error = std::abs(r.m - truth.m);
  return m;
}

RoundTrip run_round_trip(const ProblemSpec& p, int n_max, const InverseOptions& opts) {
  validate(opts);
  const std::vector<int> levels = round_trip_levels(n_max, opts);
  RoundTrip rt;
  rt.grid_points = std::max(p.grid_points, kRoundTripPointsPerIndex * levels.back() + 1);
  const Discretization d(p, rt.grid_points);
  for (int n : levels) {
    const Eigenvalue ev = find_eigenvalue(d, n);
    rt.eigenvalues.push_back(ev);
    rt.nodes.push_back(find_nodes(d, ev));
    rt.residuals.push_back(integral_residual(p, d.solve(ev.lambda)));
  }
  InverseOptions inv = opts;
  inv.n_values = levels;
  rt.reconstruction = reconstruct(NodalData::from_sets(rt.nodes), inv);
  rt.metrics = compare(p, rt.reconstruction);
  rt.metrics.max_residual = *std::max_element(rt.residuals.begin(), rt.residuals.end());
  return rt;
}

bool Check::pass() const { return std::isfinite(value) && std::abs(value - target) <= tolerance; }

std::vector<Check> paper_example_checks(const Reconstruction& r) {
  double v_err = 0.0, lp_err = 0.0;
  for (Eigen::Index i = 0; i < r.V.size(); ++i) {
    const double x = r.V.x(i);
    if (x < 0.1 * kPi - 1e-12 || x > 0.9 * kPi + 1e-12) continue;
    v_err = std::max(v_err, std::abs(r.V[i] - std::cos(x)));
    lp_err = std::max(lp_err, std::abs(r.Lprime[i] + std::cos(x)));
  }
  return {{"sup|V - cos x| on [0.1pi, 0.9pi]", v_err, 0.0, 0.05},
          {"alpha", r.alpha, kPi / 4, 0.01},
          {"beta", r.beta, kPi / 4, 0.01},
          {"m", r.m, 1.0, 0.1},
          {"sup|L' + cos x| on [0.1pi, 0.9pi]", lp_err, 0.0, 0.15}};
}

AsymCheck asym_check(const ProblemSpec& p, int n_min, int n_max) {
  if (n_min < 1) throw InvalidValue("must be positive", "nMin");
  AsymCheck out;
  const Discretization d(p, std::max(p.grid_points, kRoundTripPointsPerIndex * n_max + 1));
  for (const auto& ev : find_eigenvalues(d, n_min, n_max)) {
    out.eigenvalues.push_back({ev.index, ev.lambda, eigenvalue_asymptotic(p, ev.index)});
    const NodalSet nodes = find_nodes(d, ev);
    for (std::size_t j = 0; j < nodes.nodes.size(); ++j) {
      const AsymptoticNode a = node_asymptotic(p, ev.index, int(j));
      out.nodes.push_back({ev.index, int(j), nodes.nodes[j], a.x});
    }
  }
  return out;
}

std::string asym_eigen_csv(const AsymCheck& a) {
  std::string out = "n,lambda_solver,lambda_asym,diff,n_times_diff\n";
  for (const auto& e : a.eigenvalues) {
    const double diff = e.lambda_solver - e.lambda_asym;
    out += std::to_string(e.n) + "," + format_double(e.lambda_solver) + "," + format_double(e.lambda_asym) +
           "," + format_double(diff) + "," + format_double(e.n * diff) + "\n";
  }
  return out;
}

std::string asym_nodes_csv(const AsymCheck& a) {
  std::string out = "n,j,x_solver,x_asym,n2_times_diff\n";
  for (const auto& e : a.nodes) {
    const double diff = e.x_solver - e.x_asym;
    out += std::to_string(e.n) + "," + std::to_string(e.j) + "," + format_double(e.x_solver) + "," +
           format_double(e.x_asym) + "," + format_double(double(e.n) * e.n * diff) + "\n";
  }
  return out;
}

}  // namespace dnodal
