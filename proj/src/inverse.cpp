#include "dnodal/inverse.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "dnodal/errors.hpp"

namespace dnodal {

NodalData NodalData::from_sets(const std::vector<NodalSet>& sets) {
  NodalData data;
  for (const auto& s : sets) data.levels[s.index] = s.nodes;
  return data;
}

void NodalData::validate() const {
  if (levels.size() < 3) throw InvalidValue("at least three levels are required", "levels");
  for (const auto& [n, nodes] : levels) {
    const std::string path = "levels[" + std::to_string(n) + "]";
    if (n < 1) throw InvalidValue("level index must be positive", path);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (!(nodes[j] > 0.0 && nodes[j] < kPi)) throw InvalidValue("node outside (0, pi)", path);
      if (j > 0 && !(nodes[j] > nodes[j - 1])) throw InvalidValue("nodes not strictly increasing", path);
    }
  }
}

void validate(const InverseOptions& o) {
  if (o.target_grid_points < 8) throw InvalidValue("must be at least 8", "targetGridPoints");
  if (o.extrapolation_depth < 1) throw InvalidValue("must be at least 1", "extrapolationDepth");
  if (o.smoothing_window < 1 || o.smoothing_window % 2 == 0)
    throw InvalidValue("must be a positive odd integer", "smoothingWindow");
  if (!(o.degeneracy_threshold > 0.0)) throw InvalidValue("must be positive", "degeneracyThreshold");
  if (o.m_known && !std::isfinite(*o.m_known)) throw InvalidValue("must be finite", "mKnown");
  if (o.fit_points < 1) throw InvalidValue("must be positive", "fitPoints");
  if (o.fit_degree < 0 || (o.fit_points > 1 && o.fit_degree >= o.fit_points) ||
      (o.fit_points > 1 && o.fit_alternating && 2 * (o.fit_degree + 1) > o.fit_points))
    throw InvalidValue("must be below fitPoints", "fitDegree");
  if (!o.n_values.empty() && o.extrapolation_depth >= int(o.n_values.size()))
    throw InvalidValue("must be below the number of levels", "extrapolationDepth");
}

std::vector<int> resolve_levels(const NodalData& data, const InverseOptions& opts) {
  std::vector<int> out;
  if (!opts.n_values.empty()) {
    for (int n : opts.n_values) {
      if (!data.levels.count(n)) throw InvalidValue("level " + std::to_string(n) + " not in data", "nValues");
      out.push_back(n);
    }
  } else {
    std::set<int> chosen;
    const int top = data.levels.rbegin()->first;
    double target = top;
    for (int k = 0; k <= opts.extrapolation_depth && chosen.size() < data.levels.size(); ++k, target /= 2) {
      int best = 0;
      double best_gap = INFINITY;
      for (const auto& [n, _] : data.levels) {
        if (chosen.count(n)) continue;
        const double gap = std::abs(n - target);
        if (gap < best_gap) {
          best_gap = gap;
          best = n;
        }
      }
      chosen.insert(best);
    }
    out.assign(chosen.begin(), chosen.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (opts.extrapolation_depth >= int(out.size()))
    throw InvalidValue("must be below the number of levels", "extrapolationDepth");
  return out;
}

Estimate richardson(std::span<const int> n, std::span<const double> values, int depth) {
  const std::size_t L = values.size();
  if (L == 0 || n.size() != L) throw InvalidValue("level/value length mismatch", "levels");
  depth = std::min<int>(depth, int(L) - 1);
  std::vector<std::vector<double>> T(L, std::vector<double>(std::size_t(depth) + 1));
  for (std::size_t i = 0; i < L; ++i) {
    T[i][0] = values[i];
    for (int k = 1; k <= depth && k <= int(i); ++k) {
      const double hi = 1.0 / n[i];
      const double hik = 1.0 / n[i - std::size_t(k)];
      T[i][k] = T[i][k - 1] + (T[i][k - 1] - T[i - 1][k - 1]) * hi / (hik - hi);
    }
  }
  const auto& last = T[L - 1];
  if (depth == 0) return {last[0], L > 1 ? std::abs(last[0] - T[L - 2][0]) : 0.0};
  return {last[std::size_t(depth)], std::abs(last[std::size_t(depth)] - last[std::size_t(depth) - 1])};
}

std::vector<double> richardson_weights(std::span<const int> n, int depth) {
  const std::size_t L = n.size();
  depth = std::min<int>(depth, int(L) - 1);
  std::vector<double> w(L, 0.0);
  const std::size_t first = L - 1 - std::size_t(depth);
  for (std::size_t i = first; i < L; ++i) {
    double wi = 1.0;
    for (std::size_t k = first; k < L; ++k)
      if (k != i) wi *= (0.0 - 1.0 / n[k]) / (1.0 / n[i] - 1.0 / n[k]);
    w[i] = wi;
  }
  return w;
}

NodeChoice select_node(const NodalData& data, int n, double x) {
  const auto it = data.levels.find(n);
  if (it == data.levels.end() || it->second.empty()) throw EmptyLevel(n);
  const auto& nodes = it->second;
  // First node >= x; the candidate below wins ties, counted to a few ulps
  // so that exactly equidistant nodes tie despite rounding.
  const auto upper = std::lower_bound(nodes.begin(), nodes.end(), x);
  std::size_t j = std::size_t(upper - nodes.begin());
  const double slack = 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
  if (j == nodes.size() || (j > 0 && x - nodes[j - 1] <= nodes[j] - x + slack)) --j;
  return {int(j), nodes[j]};
}

namespace {

// Local polynomial fit of per-node values around x, evaluated at x.
template <typename PerNode>
double level_value(const NodalData& data, int n, double x, const InverseOptions& opts,
                   PerNode&& per_node) {
  const NodeChoice centre = select_node(data, n, x);
  const auto& nodes = data.levels.at(n);
  if (opts.fit_points <= 1) return per_node(centre.j, centre.node);

  const int count = int(nodes.size());
  const int want = std::min(opts.fit_points, count);
  int lo = centre.j, hi = centre.j;
  while (hi - lo + 1 < want) {
    const bool can_left = lo > 0;
    const bool can_right = hi + 1 < count;
    if (can_left && (!can_right || x - nodes[std::size_t(lo - 1)] <= nodes[std::size_t(hi + 1)] - x)) --lo;
    else ++hi;
  }
  // Smooth polynomial in the offset plus, optionally, the same polynomial times (-1)^j:
  // the nodal sequences carry a parity-alternating component at higher order.
  const bool alternating = opts.fit_alternating && want >= 2 * (opts.fit_degree + 1);
  const int degree = std::min(opts.fit_degree, alternating ? want / 2 - 1 : want - 1);
  const int columns = (degree + 1) * (alternating ? 2 : 1);
  const double scale = kPi / n;
  Eigen::MatrixXd A(want, columns);
  Eigen::VectorXd b(want);
  for (int r = 0; r < want; ++r) {
    const int j = lo + r;
    const double node = nodes[std::size_t(j)];
    const double u = (node - x) / scale;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    double power = 1.0;
    for (int c = 0; c <= degree; ++c, power *= u) {
      A(r, c) = power;
      if (alternating) A(r, degree + 1 + c) = sign * power;
    }
    b[r] = per_node(j, node);
  }
  const Eigen::VectorXd coeffs = A.colPivHouseholderQr().solve(b);
  return coeffs[0];
}

template <typename PerNode>
Estimate extrapolated(const NodalData& data, double x, const InverseOptions& opts, PerNode&& per_node) {
  const std::vector<int> levels = resolve_levels(data, opts);
  std::vector<double> values;
  values.reserve(levels.size());
  for (int n : levels)
    values.push_back(level_value(data, n, x, opts, [&](int j, double node) { return per_node(n, j, node); }));
  return richardson(levels, values, opts.extrapolation_depth);
}

}  // namespace

Estimate estimate_f(const NodalData& data, double x, const InverseOptions& opts) {
  return extrapolated(data, x, opts, [](int n, int j, double node) {
    return n * node - (j + 0.5) * kPi;
  });
}

Frame extract_frame(const SampledFunction& f, int smoothing_window) {
  const Eigen::Index N = f.size();
  const Grid& g = f.grid();
  const double alpha = f[0];
  const double beta = f[N - 1];
  const double slope = (alpha - beta) / kPi;
  const Eigen::ArrayXd xs = g.abscissae();
  Eigen::ArrayXd omega = f.values() - alpha + xs * slope;
  Eigen::ArrayXd V = differentiate(f, smoothing_window).values() + slope;
  return {alpha, beta, SampledFunction(g, std::move(omega)), SampledFunction(g, std::move(V))};
}

Estimate estimate_g(const NodalData& data, double x, const Frame& frame, const InverseOptions& opts) {
  const double alpha = frame.alpha;
  const double beta = frame.beta;
  return extrapolated(data, x, opts, [&](int n, int j, double node) {
    const double nn = n;
    const double s = (j + 0.5) * kPi;
    const double bracket = node - (s + frame.omega.interpolate(node) + alpha) / nn +
                           (s / nn) * (alpha - beta) / (nn * kPi);
    return 2.0 * nn * nn * bracket;
  });
}

MassAndTrace recover_m_and_L(const SampledFunction& g, const SampledFunction& V, double alpha,
                             double beta, const InverseOptions& opts) {
  MassAndTrace out;
  const double s2a = std::sin(2.0 * alpha);
  if (std::abs(s2a) >= opts.degeneracy_threshold) {
    out.m = (g[0] + 2.0 * alpha * (alpha - beta) / kPi) / s2a;
    out.m_from_data = true;
  } else if (opts.m_known) {
    out.m = *opts.m_known;
    out.m_from_data = false;
  } else {
    throw DegenerateAlpha("|sin 2 alpha| = " + std::to_string(std::abs(s2a)) +
                          " is below the degeneracy threshold and no known m was supplied");
  }
  const Eigen::ArrayXd dg = differentiate(g, opts.smoothing_window).values();
  const double offset =
      opts.trace_formula == TraceFormula::Full
          ? 2.0 * (alpha - beta) * (alpha - beta) / (kPi * kPi) -
                2.0 * out.m / kPi * std::cos(alpha + beta) * std::sin(alpha - beta)
          : out.m * out.m;
  Eigen::ArrayXd Lp = -dg + 2.0 * ((beta - alpha) / kPi) * V.values() + offset;
  out.Lprime = SampledFunction(g.grid(), std::move(Lp));
  return out;
}

SampledFunction differentiate(const SampledFunction& s, int smoothing_window) {
  const Eigen::Index N = s.size();
  if (smoothing_window < 1 || smoothing_window % 2 == 0)
    throw WindowTooLarge("smoothing window must be a positive odd integer");
  if (2 * Eigen::Index(smoothing_window) >= N)
    throw WindowTooLarge("smoothing window " + std::to_string(smoothing_window) +
                         " is not below half the sample count " + std::to_string(N));
  const Eigen::ArrayXd& v = s.values();
  Eigen::ArrayXd smooth = v;
  if (smoothing_window > 1) {
    const Eigen::Index half = smoothing_window / 2;
    for (Eigen::Index i = 0; i < N; ++i) {
      const Eigen::Index w = std::min({half, i, N - 1 - i});
      smooth[i] = v.segment(i - w, 2 * w + 1).mean();
    }
  }
  const double h = s.grid().step;
  Eigen::ArrayXd d(N);
  if (N == 2) {
    d.setConstant((smooth[1] - smooth[0]) / h);
  } else {
    d.segment(1, N - 2) = (smooth.tail(N - 2) - smooth.head(N - 2)) / (2.0 * h);
    d[0] = (-3.0 * smooth[0] + 4.0 * smooth[1] - smooth[2]) / (2.0 * h);
    d[N - 1] = (3.0 * smooth[N - 1] - 4.0 * smooth[N - 2] + smooth[N - 3]) / (2.0 * h);
  }
  return SampledFunction(s.grid(), std::move(d));
}

void fill_endpoints(Eigen::ArrayXd& v) {
  const Eigen::Index N = v.size();
  if (N < 5) throw InvalidValue("at least five samples required", "targetGridPoints");
  v[0] = 3.0 * v[1] - 3.0 * v[2] + v[3];
  v[N - 1] = 3.0 * v[N - 2] - 3.0 * v[N - 3] + v[N - 4];
}

Reconstruction reconstruct(const NodalData& data, const InverseOptions& opts) {
  data.validate();
  validate(opts);
  const std::vector<int> levels = resolve_levels(data, opts);
  const Grid grid = Grid::on_interval(0.0, kPi, opts.target_grid_points);
  const Eigen::Index N = grid.size;

  Eigen::ArrayXd f(N), f_err(N);
  for (Eigen::Index i = 1; i + 1 < N; ++i) {
    const Estimate e = estimate_f(data, grid.x(i), opts);
    f[i] = e.value;
    f_err[i] = e.error;
  }
  fill_endpoints(f);
  f_err[0] = 3.0 * f_err[1] + 3.0 * f_err[2] + f_err[3];
  f_err[N - 1] = 3.0 * f_err[N - 2] + 3.0 * f_err[N - 3] + f_err[N - 4];

  Reconstruction out;
  out.f = SampledFunction(grid, f);
  Frame frame = extract_frame(out.f, opts.smoothing_window);

  // An error e in the frame enters every G_n as 2 n e; the extrapolant scales it by sum w_i 2 n_i.
  double frame_gain = 0.0;
  {
    const auto w = richardson_weights(levels, opts.extrapolation_depth);
    for (std::size_t i = 0; i < levels.size(); ++i) frame_gain += w[i] * 2.0 * levels[i];
    frame_gain = std::abs(frame_gain);
  }

  Eigen::ArrayXd g(N), g_err(N);
  for (Eigen::Index i = 1; i + 1 < N; ++i) {
    const Estimate e = estimate_g(data, grid.x(i), frame, opts);
    g[i] = e.value;
    g_err[i] = e.error + frame_gain * f_err[i];
  }
  fill_endpoints(g);
  g_err[0] = 3.0 * g_err[1] + 3.0 * g_err[2] + g_err[3];
  g_err[N - 1] = 3.0 * g_err[N - 2] + 3.0 * g_err[N - 3] + g_err[N - 4];
  out.g = SampledFunction(grid, g);

  MassAndTrace ml = recover_m_and_L(out.g, frame.V, frame.alpha, frame.beta, opts);

  out.alpha = frame.alpha;
  out.beta = frame.beta;
  out.m = ml.m;
  out.m_from_data = ml.m_from_data;
  out.V = std::move(frame.V);
  out.omega = std::move(frame.omega);
  out.Lprime = std::move(ml.Lprime);
  out.diagnostics.levels = levels;
  out.diagnostics.f_error = f_err;
  out.diagnostics.g_error = g_err;
  out.diagnostics.alpha_error = f_err[0];
  out.diagnostics.beta_error = f_err[N - 1];
  out.diagnostics.m_error =
      out.m_from_data ? (g_err[0] + 2.0 * (std::abs(2.0 * out.alpha - out.beta) / kPi) * f_err[0]) /
                            std::abs(std::sin(2.0 * out.alpha))
                      : 0.0;
  return out;
}

}  // namespace dnodal
