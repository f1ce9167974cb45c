#pragma once

#include <Eigen/Core>
#include <functional>
#include <numbers>

namespace dnodal {

inline constexpr double kPi = std::numbers::pi;

/// Uniform grid start + i*step, i = 0..size-1.
struct Grid {
  double start = 0.0;
  double step = 1.0;
  Eigen::Index size = 0;

  static Grid on_interval(double a, double b, Eigen::Index points) {
    return {a, (b - a) / double(points - 1), points};
  }
  double x(Eigen::Index i) const { return start + double(i) * step; }
  double end() const { return x(size - 1); }
  Eigen::ArrayXd abscissae() const {
    return Eigen::ArrayXd::LinSpaced(size, start, end());
  }
};

/// Values on a uniform grid. Length >= 2, step > 0, values finite.
class SampledFunction {
 public:
  SampledFunction() = default;
  /// Throws InvalidValue when the invariants fail.
  SampledFunction(Grid grid, Eigen::ArrayXd values);

  const Grid& grid() const noexcept { return grid_; }
  const Eigen::ArrayXd& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return values_.size(); }
  double x(Eigen::Index i) const { return grid_.x(i); }
  double operator[](Eigen::Index i) const { return values_[i]; }

  /// Four-point Lagrange interpolation; one-sided stencils near the ends.
  double interpolate(double x) const;

 private:
  Grid grid_;
  Eigen::ArrayXd values_;
};

/// Cumulative trapezoid integral: out[i] = int_{x_0}^{x_i} of the samples.
Eigen::ArrayXd cumulative_trapezoid(const Eigen::ArrayXd& samples, double step);
/// Cumulative trapezoid with the h^2/12 Euler-Maclaurin end correction, the
/// derivatives taken by second-order differences: fourth order on smooth
/// samples. Plain trapezoid below 3 samples.
Eigen::ArrayXd cumulative_integral(const Eigen::ArrayXd& samples, double step);

/// Adaptive Simpson quadrature with absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

}  // namespace dnodal
