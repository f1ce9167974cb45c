#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "dnodal/forward.hpp"
#include "dnodal/sampled.hpp"

namespace dnodal {

/// Nodal points per index n: sorted, strictly increasing, inside (0, pi).
struct NodalData {
  std::map<int, std::vector<double>> levels;

  static NodalData from_sets(const std::vector<NodalSet>& sets);
  /// Throws InvalidValue; requires at least three distinct levels.
  void validate() const;
};

/// How L' is read off g.
///  Full:      L' = -g' + 2 ((beta - alpha)/pi) V + 2 (alpha - beta)^2 / pi^2
///                   - (2 m / pi) cos(alpha + beta) sin(alpha - beta),
///             the form consistent with nodes of the actual operator. It fixes the gauge
///             L(pi) = 0: nodal data leave the mean of L' undetermined.
///  Truncated: L' = -g' + 2 ((beta - alpha)/pi) V + m^2, consistent with the nodal expansion
///             that omits the 1/n^2 part of 1/lambda_n (and with data generated from it).
enum class TraceFormula { Full, Truncated };

struct InverseOptions {
  int target_grid_points = 201;
  std::vector<int> n_values;  // empty: dyadic ladder below the largest level
  int extrapolation_depth = 2;
  int smoothing_window = 1;
  std::optional<double> m_known;
  double degeneracy_threshold = 1e-3;
  // Per-level local least-squares fit of the nodal sequence around x.
  // fit_points = 1 uses the selected node alone. With fit_alternating the
  // model adds a (-1)^j copy of the polynomial, which is discarded at x.
  int fit_points = 16;
  int fit_degree = 5;
  bool fit_alternating = true;
  TraceFormula trace_formula = TraceFormula::Full;
};

void validate(const InverseOptions& opts);

/// Levels actually used, ascending. Explicit n_values must be present in the
/// data; otherwise keys nearest to N, N/2, N/4, ... (N the largest key) are
/// taken, extrapolation_depth + 1 of them.
std::vector<int> resolve_levels(const NodalData& data, const InverseOptions& opts);

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Polynomial extrapolation to 1/n -> 0 through the last depth + 1 levels
/// (Neville). error = |T(depth) - T(depth - 1)| on the final row.
Estimate richardson(std::span<const int> n, std::span<const double> values, int depth);
/// Lagrange weights of the same extrapolant, one per level (zero for unused levels).
std::vector<double> richardson_weights(std::span<const int> n, int depth);

struct NodeChoice {
  int j = 0;
  double node = 0.0;
};

/// Nearest node of level n to x; ties go to the smaller j. Throws EmptyLevel.
NodeChoice select_node(const NodalData& data, int n, double x);

/// Limit of F_n = n (x_n^j - (j + 1/2) pi / n) as n -> infinity, at x in (0, pi).
Estimate estimate_f(const NodalData& data, double x, const InverseOptions& opts);

struct Frame {
  double alpha = 0.0;
  double beta = 0.0;
  SampledFunction omega;
  SampledFunction V;
};

/// alpha = f(0), beta = f(pi), omega = f - alpha + x (alpha - beta) / pi,
/// V = f' + (alpha - beta) / pi. Endpoint samples of f are read as given.
Frame extract_frame(const SampledFunction& f, int smoothing_window = 1);

/// Limit of G_n = 2 n^2 (x_n^j - ((j + 1/2) pi + omega(x_n^j) + alpha) / n
///                       + ((j + 1/2) pi / n) (alpha - beta) / (n pi)).
Estimate estimate_g(const NodalData& data, double x, const Frame& frame, const InverseOptions& opts);

struct MassAndTrace {
  double m = 0.0;
  bool m_from_data = true;
  SampledFunction Lprime;
};

/// m = (g(0) + 2 alpha (alpha - beta) / pi) / sin(2 alpha) when |sin 2 alpha| is
/// above the degeneracy threshold, else opts.m_known (DegenerateAlpha if absent);
/// L' per opts.trace_formula.
MassAndTrace recover_m_and_L(const SampledFunction& g, const SampledFunction& V, double alpha,
                             double beta, const InverseOptions& opts);

/// Centered moving average of odd width (shrunk symmetrically at the ends),
/// then central differences with second-order one-sided end stencils.
/// Throws WindowTooLarge unless window < size / 2.
SampledFunction differentiate(const SampledFunction& s, int smoothing_window);

/// Replaces the first and last samples by quadratic extrapolation from the
/// three nearest interior samples.
void fill_endpoints(Eigen::ArrayXd& values);

struct Diagnostics {
  std::vector<int> levels;
  Eigen::ArrayXd f_error;  // per target grid point
  Eigen::ArrayXd g_error;  // includes the propagated frame error
  double alpha_error = 0.0;
  double beta_error = 0.0;
  double m_error = 0.0;
};

struct Reconstruction {
  SampledFunction f;
  SampledFunction g;
  double alpha = 0.0;
  double beta = 0.0;
  double m = 0.0;
  bool m_from_data = true;
  SampledFunction V;
  SampledFunction Lprime;
  SampledFunction omega;
  Diagnostics diagnostics;
};

/// Full pipeline: f on the target grid, frame, g (using the frame), m and L'.
Reconstruction reconstruct(const NodalData& data, const InverseOptions& opts);

}  // namespace dnodal
