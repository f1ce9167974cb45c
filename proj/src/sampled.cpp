#include "dnodal/sampled.hpp"

#include <algorithm>
#include <cmath>

#include "dnodal/errors.hpp"

namespace dnodal {

SampledFunction::SampledFunction(Grid grid, Eigen::ArrayXd values)
    : grid_(grid), values_(std::move(values)) {
  if (!(grid_.step > 0.0) || !std::isfinite(grid_.step))
    throw InvalidValue("grid step must be positive", "gridStep");
  if (values_.size() < 2) throw InvalidValue("at least two samples required", "values");
  if (grid_.size != values_.size()) throw InvalidValue("grid/value length mismatch", "values");
  if (!values_.allFinite()) throw InvalidValue("samples must be finite", "values");
}

double SampledFunction::interpolate(double x) const {
  const Eigen::Index n = size();
  if (n < 4) {
    const double u = std::clamp((x - grid_.start) / grid_.step, 0.0, double(n - 1));
    const Eigen::Index i = std::min<Eigen::Index>(Eigen::Index(u), n - 2);
    const double t = u - double(i);
    return (1.0 - t) * values_[i] + t * values_[i + 1];
  }
  const double u = (x - grid_.start) / grid_.step;
  Eigen::Index i0 = Eigen::Index(std::floor(u)) - 1;
  i0 = std::clamp<Eigen::Index>(i0, 0, n - 4);
  double sum = 0.0;
  for (int a = 0; a < 4; ++a) {
    double w = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) w *= (u - double(i0 + b)) / double(a - b);
    sum += w * values_[i0 + a];
  }
  return sum;
}

Eigen::ArrayXd cumulative_trapezoid(const Eigen::ArrayXd& samples, double step) {
  Eigen::ArrayXd out(samples.size());
  if (samples.size() == 0) return out;
  out[0] = 0.0;
  for (Eigen::Index i = 1; i < samples.size(); ++i)
    out[i] = out[i - 1] + 0.5 * step * (samples[i - 1] + samples[i]);
  return out;
}

Eigen::ArrayXd cumulative_integral(const Eigen::ArrayXd& samples, double step) {
  Eigen::ArrayXd out = cumulative_trapezoid(samples, step);
  const Eigen::Index n = samples.size();
  if (n < 3) return out;
  auto slope = [&](Eigen::Index i) {
    if (i == 0) return (-3 * samples[0] + 4 * samples[1] - samples[2]) / (2 * step);
    if (i == n - 1) return (3 * samples[n - 1] - 4 * samples[n - 2] + samples[n - 3]) / (2 * step);
    return (samples[i + 1] - samples[i - 1]) / (2 * step);
  };
  const double start = slope(0);
  for (Eigen::Index i = 1; i < n; ++i) out[i] -= step * step / 12 * (slope(i) - start);
  return out;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  // Eight initial panels so that oscillatory integrands are not mistaken for flat ones.
  constexpr int kPanels = 8;
  const double h = (b - a) / kPanels;
  double sum = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double lo = a + p * h;
    const double hi = p + 1 == kPanels ? b : lo + h;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    sum += simpson_step(f, lo, hi, flo, fm, fhi, whole, tol / kPanels, 40);
  }
  return sum;
}

}  // namespace dnodal
