#pragma once

#include "dnodal/problem.hpp"

namespace dnodal {

// Large-lambda approximations of the solution, the characteristic function,
// the eigenvalues and the nodal points, remainders dropped.

struct PhiPair {
  double phi1 = 0.0;
  double phi2 = 0.0;
};

/// phi(x, lambda) through the 1/lambda terms. lambda must be non-zero.
PhiPair phi_asymptotic(const ProblemSpec& p, double x, double lambda);

/// Delta(lambda) through the 1/lambda terms. lambda must be non-zero.
double delta_asymptotic(const ProblemSpec& p, double lambda);

/// lambda_n = n + omega(pi)/pi + (alpha - beta)/pi
///          + (m^2 pi - L(pi) + 2 m cos(beta + alpha) sin(alpha - beta)) / (2 n pi).
/// n must be non-zero.
double eigenvalue_asymptotic(const ProblemSpec& p, int n);

struct AsymptoticNode {
  int n = 0;
  int j = 0;
  double x = 0.0;
  int iterations = 0;
};

inline constexpr int kNodeFixedPointIterations = 20;
inline constexpr double kNodeFixedPointTolerance = 1e-12;

/// Printed: the 1/n^2 nodal expansion in its usual displayed form.
/// Complete: adds (j + 1/2) pi (c^2 - d) / n^3, the 1/n^2 part of 1/lambda_n
/// (c = (omega(pi) + alpha - beta)/pi, d the 1/n coefficient of lambda_n),
/// which the printed expansion drops although it is of the same order.
enum class NodalExpansion { Printed, Complete };

/// The nodal formula is implicit in x (omega(x) and L(x) on the right-hand
/// side); it is solved by fixed-point iteration from (j + 1/2) pi / n.
/// Throws NoConvergence after 20 iterations.
AsymptoticNode node_asymptotic(const ProblemSpec& p, int n, int j,
                               NodalExpansion expansion = NodalExpansion::Printed);

}  // namespace dnodal
