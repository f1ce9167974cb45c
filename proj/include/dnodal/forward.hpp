#pragma once

#include <Eigen/Core>
#include <vector>

#include "dnodal/problem.hpp"
#include "dnodal/sampled.hpp"

namespace dnodal {

// RK4 substeps taken inside each grid interval.
inline constexpr int kDefaultSubsteps = 8;
inline constexpr double kRootTolerance = 1e-10;
inline constexpr double kBracketWidth = 1e-10;
inline constexpr double kBracketHalfWidth = 0.45;
inline constexpr double kBracketExpansion = 0.5;
inline constexpr double kNodeTolerance = 1e-12;
inline constexpr int kSamplesPerNode = 40;

/// phi(x, lambda) sampled on the problem grid. phi(0) = (cos alpha, -sin alpha).
struct Trajectory {
  double lambda = 0.0;
  Grid grid;
  Eigen::ArrayXd phi1;
  Eigen::ArrayXd phi2;
};

struct Eigenvalue {
  int index = 0;
  double lambda = 0.0;
  double residual = 0.0;  // |Delta(lambda)|
  double seed = 0.0;
};

/// Zeros of phi_1(., lambda_n) inside (0, pi), strictly increasing.
struct NodalSet {
  int index = 0;
  double lambda = 0.0;
  std::vector<double> nodes;
};

/// Coefficient tables of one problem on one uniform grid over [0, pi].
///
/// The system B Y' + Omega Y + int_0^x M(x,t) Y(t) dt = lambda Y is marched as
///   y1' = -(lambda - r) y2 + (MY)_2,   y2' = (lambda - p) y1 - (MY)_1,
/// with p = V + m, r = V - m. Each separable kernel term u(x) v(t) in entry
/// (i, k) owns an accumulator A(x) = int_0^x v(t) y_k(t) dt appended to the
/// state, so (MY)_i = sum u(x) A(x) costs O(1) per step.
class Discretization {
 public:
  explicit Discretization(const ProblemSpec& p, int grid_points = 0,
                          int substeps = kDefaultSubsteps);

  const ProblemSpec& problem() const noexcept { return problem_; }
  const Grid& grid() const noexcept { return grid_; }
  int substeps() const noexcept { return substeps_; }
  Eigen::Index state_size() const noexcept { return 2 + Eigen::Index(accumulators_.size()); }

  Trajectory solve(double lambda) const;
  /// Delta(lambda) = phi1(pi) sin(beta) + phi2(pi) cos(beta).
  double characteristic(double lambda) const;
  /// Augmented state at every grid point, one column per point.
  Eigen::MatrixXd states(double lambda) const;
  /// Integrates from a state at x0 over a distance d with the same substep count.
  Eigen::VectorXd advance(const Eigen::VectorXd& state, double x0, double d, double lambda) const;

 private:
  struct Accumulator {
    int row = 0;  // feeds (MY)_row
    int col = 0;  // integrates y_col
    std::size_t term = 0;  // index within kernel entry (row, col)
    Eigen::ArrayXd u;
    Eigen::ArrayXd v;
  };

  Eigen::VectorXd initial_state() const;
  template <typename Visit>
  void march(double lambda, Visit&& visit) const;
  void derivative(double lambda, double V, const double* u, const double* v,
                  const Eigen::VectorXd& y, Eigen::VectorXd& dy) const;

  ProblemSpec problem_;
  Grid grid_;
  int substeps_;
  double half_step_;         // stage spacing inside a substep
  Eigen::ArrayXd V_table_;   // V at every half-substep point
  std::vector<Accumulator> accumulators_;
};

Trajectory solve(const ProblemSpec& p, double lambda);
double characteristic(const ProblemSpec& p, double lambda);

/// Roots of Delta seeded from the eigenvalue asymptotics and bracketed by
/// seed +- 0.45 (one fallback expansion by 0.5). Throws BracketFailure.
std::vector<Eigenvalue> find_eigenvalues(const ProblemSpec& p, int n_min, int n_max);
std::vector<Eigenvalue> find_eigenvalues(const Discretization& d, int n_min, int n_max);
Eigenvalue find_eigenvalue(const Discretization& d, int n);

/// Dense sampling of Delta over [lo, hi]; every sign change is bisected. The
/// index is the nearest integer to lambda - (omega(pi) + alpha - beta)/pi.
std::vector<Eigenvalue> scan_eigenvalues(const ProblemSpec& p, double lo, double hi, int samples);

/// Samples phi_1 on max(gridPoints, 40 n) points and polishes every sign change
/// by bisection on a local re-integration from the preceding grid point.
NodalSet find_nodes(const ProblemSpec& p, const Eigenvalue& ev);
NodalSet find_nodes(const Discretization& d, const Eigenvalue& ev);

/// Sup-norm discrepancy between the stored trajectory and the right-hand sides
/// of the equivalent Volterra integral equations, evaluated by end-corrected
/// cumulative trapezoid quadrature (cumulative_integral) over the stored samples.
double integral_residual(const ProblemSpec& p, const Trajectory& t);

}  // namespace dnodal
