#pragma once

// Shared fixtures and independent oracles for the unit suites.

#include <Eigen/Core>
#include <cmath>
#include <random>
#include <vector>

#include "dnodal/problem.hpp"
#include "dnodal/sampled.hpp"

namespace dnodal::test {

inline ProblemSpec zero_problem(double alpha = 0.0, double beta = 0.0, int grid_points = 2001) {
  ProblemSpec p;
  p.alpha = alpha;
  p.beta = beta;
  p.grid_points = grid_points;
  return p;
}

// m = 0, M = 0, V = cos x: phi = (cos, sin)(lambda x - sin x - alpha) exactly.
inline ProblemSpec exact_problem(double alpha, double beta, int grid_points = 2001) {
  ProblemSpec p = zero_problem(alpha, beta, grid_points);
  p.V = FunctionSpec::cosine(1.0, 1);
  return p;
}

inline ProblemSpec example1(int grid_points = 2001) {
  ProblemSpec p;
  p.V = FunctionSpec::cosine(1.0, 1);
  p.m = 1.0;
  p.kernel(0, 1).push_back({FunctionSpec::cosine(-1.0, 1), FunctionSpec::constant(1.0)});
  p.alpha = kPi / 4;
  p.beta = kPi / 4;
  p.grid_points = grid_points;
  return p;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  FunctionSpec series(int max_terms, double scale, int max_k = 4) {
    std::vector<Term> terms;
    const int count = integer(0, max_terms);
    for (int i = 0; i < count; ++i) {
      const auto kind = static_cast<TermKind>(integer(0, 2));
      terms.push_back({kind, uniform(-scale, scale), integer(kind == TermKind::Sine ? 1 : 0, max_k)});
    }
    return FunctionSpec(std::move(terms));
  }

  // Mean-zero potential: cosine harmonics only.
  FunctionSpec mean_zero(int max_terms, double scale) {
    std::vector<Term> terms;
    const int count = integer(1, max_terms);
    for (int i = 0; i < count; ++i) terms.push_back({TermKind::Cosine, uniform(-scale, scale), integer(1, 3)});
    return FunctionSpec(std::move(terms));
  }

  SeparableKernelSpec kernel(int max_terms, double scale) {
    SeparableKernelSpec k;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const int count = integer(0, max_terms);
        for (int r = 0; r < count; ++r) k(i, j).push_back({series(2, scale, 2), series(2, 1.0, 2)});
      }
    return k;
  }

  ProblemSpec problem(double scale = 0.5) {
    ProblemSpec p;
    p.V = series(3, scale, 2);
    p.m = uniform(-scale, scale);
    p.kernel = kernel(1, scale);
    p.alpha = uniform(0.1, 1.4);
    p.beta = uniform(0.1, 1.4);
    p.grid_points = integer(64, 4000);
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

inline double sup_diff(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) { return (a - b).abs().maxCoeff(); }

struct OracleSolution {
  Eigen::ArrayXd x;
  Eigen::ArrayXd phi1;
  Eigen::ArrayXd phi2;
};

namespace detail {

inline Eigen::ArrayXd cumtrapz(const Eigen::ArrayXd& f, double h) {
  Eigen::ArrayXd out(f.size());
  out[0] = 0.0;
  for (Eigen::Index i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  return out;
}

// Picard iteration on the variation-of-constants form
//   Y(x) = R(lambda x) [Y(0) + int_0^x R(-lambda t) F(t) dt],
//   F = ((V - m) y2 + (MY)_2, -(V + m) y1 - (MY)_1),
// with every integral by the trapezoid rule on `intervals` equal steps.
inline OracleSolution picard_once(const ProblemSpec& p, double lambda, int intervals) {
  const Eigen::Index n = intervals + 1;
  const double h = kPi / intervals;
  Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(n, 0.0, kPi);
  const Eigen::ArrayXd V = evaluate(p.V, x);
  const Eigen::ArrayXd c = (lambda * x).cos(), s = (lambda * x).sin();
  Eigen::ArrayXd y1 = (lambda * x - p.alpha).cos(), y2 = (lambda * x - p.alpha).sin();
  const double y10 = std::cos(p.alpha), y20 = -std::sin(p.alpha);

  for (int iter = 0; iter < 200; ++iter) {
    Eigen::ArrayXd my1 = Eigen::ArrayXd::Zero(n), my2 = Eigen::ArrayXd::Zero(n);
    for (int row = 0; row < 2; ++row)
      for (int col = 0; col < 2; ++col)
        for (const SeparableTerm& t : p.kernel(row, col)) {
          const Eigen::ArrayXd inner = cumtrapz(evaluate(t.t_factor, x) * (col == 0 ? y1 : y2), h);
          (row == 0 ? my1 : my2) += evaluate(t.x_factor, x) * inner;
        }
    const Eigen::ArrayXd F1 = (V - p.m) * y2 + my2;
    const Eigen::ArrayXd F2 = -(V + p.m) * y1 - my1;
    const Eigen::ArrayXd I1 = cumtrapz(c * F1 + s * F2, h) + y10;
    const Eigen::ArrayXd I2 = cumtrapz(-s * F1 + c * F2, h) + y20;
    const Eigen::ArrayXd n1 = c * I1 - s * I2, n2 = s * I1 + c * I2;
    const double change = std::max(sup_diff(n1, y1), sup_diff(n2, y2));
    y1 = n1;
    y2 = n2;
    if (change < 1e-15) break;
  }
  return {x, y1, y2};
}

}  // namespace detail

// Richardson combination of the trapezoid fixed points on N and 2N intervals,
// reported on the N-interval grid.
inline OracleSolution picard_oracle(const ProblemSpec& p, double lambda, int intervals) {
  const OracleSolution coarse = detail::picard_once(p, lambda, intervals);
  const OracleSolution fine = detail::picard_once(p, lambda, 2 * intervals);
  OracleSolution out = coarse;
  for (Eigen::Index i = 0; i < coarse.x.size(); ++i) {
    out.phi1[i] = (4 * fine.phi1[2 * i] - coarse.phi1[i]) / 3;
    out.phi2[i] = (4 * fine.phi2[2 * i] - coarse.phi2[i]) / 3;
  }
  return out;
}

// Zeros in (0, pi) of cos(lambda x - omega(x) - alpha) for a phase with
// positive derivative, by bisection on each branch phase = pi/2 + k pi.
inline std::vector<double> exact_phase_nodes(const FunctionSpec& V, double alpha, double lambda) {
  auto phase = [&](double x) { return lambda * x - omega(V, x) - alpha; };
  std::vector<double> out;
  const double lo = phase(0.0), hi = phase(kPi);
  for (int k = int(std::ceil((lo - kPi / 2) / kPi)); kPi / 2 + k * kPi < hi; ++k) {
    const double target = kPi / 2 + k * kPi;
    if (target <= lo) continue;
    double a = 0.0, b = kPi;
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      const double mid = 0.5 * (a + b);
      (phase(mid) < target ? a : b) = mid;
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

}  // namespace dnodal::test
