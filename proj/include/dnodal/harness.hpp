#pragma once

#include <string>
#include <vector>

#include "dnodal/forward.hpp"
#include "dnodal/inverse.hpp"

namespace dnodal {

/// V = cos x, m = 1, M12(x,t) = -cos x (other entries zero), alpha = beta = pi/4.
ProblemSpec paper_example_problem(int grid_points = 16001);

/// Grid points per eigenvalue index used by the round trip.
inline constexpr int kRoundTripPointsPerIndex = 80;

struct RoundTripMetrics {
  double V_sup_error = 0.0;       // on [0.1 pi, 0.9 pi], against V - omega(pi)/pi
  double Lprime_sup_error = 0.0;  // on [0.1 pi, 0.9 pi], against M12(x,x) - M21(x,x)
  double alpha_error = 0.0;
  double beta_error = 0.0;
  double m_error = 0.0;
  double max_residual = 0.0;      // integral-equation residual of the eigen-trajectories
};

struct RoundTrip {
  int grid_points = 0;
  std::vector<Eigenvalue> eigenvalues;
  std::vector<NodalSet> nodes;
  std::vector<double> residuals;
  Reconstruction reconstruction;
  RoundTripMetrics metrics;
};

/// Levels n_max, n_max/2, ..., depth + 1 of them, unless opts.n_values is set.
std::vector<int> round_trip_levels(int n_max, const InverseOptions& opts);

/// forward -> nodes -> inverse, compared against the problem's own functions.
/// The grid is raised to at least 80 points per index of the largest level.
RoundTrip run_round_trip(const ProblemSpec& p, int n_max, const InverseOptions& opts);

RoundTripMetrics compare(const ProblemSpec& truth, const Reconstruction& r);

struct Check {
  std::string name;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass() const;
};

/// The five reference targets of the built-in example with their budgets.
std::vector<Check> paper_example_checks(const Reconstruction& r);

struct EigenComparison {
  int n = 0;
  double lambda_solver = 0.0;
  double lambda_asym = 0.0;
};

struct NodeComparison {
  int n = 0;
  int j = 0;
  double x_solver = 0.0;
  double x_asym = 0.0;
};

struct AsymCheck {
  std::vector<EigenComparison> eigenvalues;
  std::vector<NodeComparison> nodes;
};

AsymCheck asym_check(const ProblemSpec& p, int n_min, int n_max);
std::string asym_eigen_csv(const AsymCheck& a);
std::string asym_nodes_csv(const AsymCheck& a);

}  // namespace dnodal
