#include "dnodal/asymptotics.hpp"

#include <cmath>
#include <string>

#include "dnodal/errors.hpp"
#include "dnodal/sampled.hpp"

namespace dnodal {

PhiPair phi_asymptotic(const ProblemSpec& p, double x, double lambda) {
  if (lambda == 0.0) throw InvalidValue("lambda must be non-zero", "lambda");
  const double w = omega(p.V, x);
  const auto [K, L] = kernel_traces(p.kernel, x);
  const double theta = lambda * x - w - p.alpha;
  const double shifted = std::sin(lambda * x - w);
  const double m = p.m;
  const double ct = std::cos(theta), st = std::sin(theta);
  PhiPair out;
  out.phi1 = ct + m * std::sin(p.alpha) / lambda * shifted + m * m * x / (2 * lambda) * st -
             K / (2 * lambda) * ct - L / (2 * lambda) * st;
  out.phi2 = st - m * std::cos(p.alpha) / lambda * shifted - m * m * x / (2 * lambda) * ct -
             K / (2 * lambda) * st + L / (2 * lambda) * ct;
  return out;
}

double delta_asymptotic(const ProblemSpec& p, double lambda) {
  if (lambda == 0.0) throw InvalidValue("lambda must be non-zero", "lambda");
  const double w = omega(p.V, kPi);
  const auto [K, L] = kernel_traces(p.kernel, kPi);
  const double phase = lambda * kPi - w + p.beta - p.alpha;
  const double m = p.m;
  return std::sin(phase) - m * m * kPi / (2 * lambda) * std::cos(phase) -
         K / (2 * lambda) * std::sin(phase) + L / (2 * lambda) * std::cos(phase) -
         m / lambda * std::sin(lambda * kPi - w) * std::cos(p.beta + p.alpha);
}

double eigenvalue_asymptotic(const ProblemSpec& p, int n) {
  if (n == 0) throw InvalidValue("index must be non-zero", "n");
  const double w = omega(p.V, kPi);
  const double L = kernel_traces(p.kernel, kPi).L;
  const double m = p.m;
  const double correction =
      m * m * kPi - L + 2 * m * std::cos(p.beta + p.alpha) * std::sin(p.alpha - p.beta);
  return n + w / kPi + (p.alpha - p.beta) / kPi + correction / (2.0 * n * kPi);
}

AsymptoticNode node_asymptotic(const ProblemSpec& p, int n, int j, NodalExpansion expansion) {
  if (n < 1) throw InvalidValue("n must be positive", "n");
  if (j < 0 || j > n) throw InvalidValue("j must lie in [0, n]", "j");
  const double nn = n;
  const double s = (j + 0.5) * kPi / nn;
  const double shift = (omega(p.V, kPi) + p.alpha - p.beta) / kPi;
  const double m = p.m;
  const double mass_term = m * std::sin(2 * p.alpha);
  double tail = 0.0;
  if (expansion == NodalExpansion::Complete) {
    const double d = (m * m * kPi - kernel_traces(p.kernel, kPi).L +
                      2 * m * std::cos(p.beta + p.alpha) * std::sin(p.alpha - p.beta)) /
                     (2 * kPi);
    tail = s * (shift * shift - d) / (nn * nn);
  }

  auto rhs = [&](double x) {
    const double phase = omega(p.V, x) + p.alpha;
    const double L = kernel_traces(p.kernel, x).L;
    return s + phase / nn - s * shift / nn - shift * phase / (nn * nn) +
           (m * m * x - L + mass_term) / (2 * nn * nn) + tail;
  };

  double x = s;
  for (int it = 1; it <= kNodeFixedPointIterations; ++it) {
    const double next = rhs(x);
    const double change = std::abs(next - x);
    x = next;
    if (change <= kNodeFixedPointTolerance) return {n, j, x, it};
  }
  throw NoConvergence("nodal fixed point did not settle for n=" + std::to_string(n) +
                      ", j=" + std::to_string(j));
}

}  // namespace dnodal
