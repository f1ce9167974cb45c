#include "dnodal/forward.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dnodal/asymptotics.hpp"
#include "dnodal/errors.hpp"

namespace dnodal {

Discretization::Discretization(const ProblemSpec& p, int grid_points, int substeps)
    : problem_(p), substeps_(substeps) {
  validate(problem_);
  if (grid_points == 0) grid_points = problem_.grid_points;
  if (grid_points < 2) throw InvalidValue("must be at least 2", "gridPoints");
  if (substeps_ < 1) throw InvalidValue("must be positive", "substeps");
  grid_ = Grid::on_interval(0.0, kPi, grid_points);
  half_step_ = grid_.step / (2.0 * substeps_);

  const Eigen::Index stages = 2 * Eigen::Index(substeps_) * (grid_.size - 1) + 1;
  const Eigen::ArrayXd xs = Eigen::ArrayXd::LinSpaced(stages, 0.0, kPi);
  V_table_ = evaluate(problem_.V, xs);
  for (int row = 0; row < 2; ++row)
    for (int col = 0; col < 2; ++col) {
      const auto& entry = problem_.kernel(row, col);
      for (std::size_t r = 0; r < entry.size(); ++r) {
        if (entry[r].x_factor.is_zero() || entry[r].t_factor.is_zero()) continue;
        accumulators_.push_back(
            {row, col, r, evaluate(entry[r].x_factor, xs), evaluate(entry[r].t_factor, xs)});
      }
    }
}

Eigen::VectorXd Discretization::initial_state() const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(state_size());
  y[0] = std::cos(problem_.alpha);
  y[1] = -std::sin(problem_.alpha);
  return y;
}

void Discretization::derivative(double lambda, double V, const double* u, const double* v,
                                const Eigen::VectorXd& y, Eigen::VectorXd& dy) const {
  double memory[2] = {0.0, 0.0};
  for (std::size_t r = 0; r < accumulators_.size(); ++r) {
    const auto& acc = accumulators_[r];
    memory[acc.row] += u[r] * y[2 + Eigen::Index(r)];
    dy[2 + Eigen::Index(r)] = v[r] * y[acc.col];
  }
  const double m = problem_.m;
  dy[0] = -(lambda - V + m) * y[1] + memory[1];
  dy[1] = (lambda - V - m) * y[0] - memory[0];
}

template <typename Visit>
void Discretization::march(double lambda, Visit&& visit) const {
  const Eigen::Index dim = state_size();
  const std::size_t nacc = accumulators_.size();
  Eigen::VectorXd y = initial_state();
  Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  std::vector<double> u(3 * nacc), v(3 * nacc);
  const double hs = 2.0 * half_step_;

  visit(Eigen::Index(0), y);
  Eigen::Index q = 0;  // stage-table index of the current substep start
  for (Eigen::Index i = 1; i < grid_.size; ++i) {
    for (int s = 0; s < substeps_; ++s, q += 2) {
      for (std::size_t r = 0; r < nacc; ++r)
        for (int c = 0; c < 3; ++c) {
          u[c * nacc + r] = accumulators_[r].u[q + c];
          v[c * nacc + r] = accumulators_[r].v[q + c];
        }
      derivative(lambda, V_table_[q], u.data(), v.data(), y, k1);
      tmp = y + (0.5 * hs) * k1;
      derivative(lambda, V_table_[q + 1], u.data() + nacc, v.data() + nacc, tmp, k2);
      tmp = y + (0.5 * hs) * k2;
      derivative(lambda, V_table_[q + 1], u.data() + nacc, v.data() + nacc, tmp, k3);
      tmp = y + hs * k3;
      derivative(lambda, V_table_[q + 2], u.data() + 2 * nacc, v.data() + 2 * nacc, tmp, k4);
      y += (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    visit(i, y);
  }
}

Trajectory Discretization::solve(double lambda) const {
  Trajectory t{lambda, grid_, Eigen::ArrayXd(grid_.size), Eigen::ArrayXd(grid_.size)};
  march(lambda, [&](Eigen::Index i, const Eigen::VectorXd& y) {
    t.phi1[i] = y[0];
    t.phi2[i] = y[1];
  });
  return t;
}

double Discretization::characteristic(double lambda) const {
  double phi1 = 0.0, phi2 = 0.0;
  march(lambda, [&](Eigen::Index i, const Eigen::VectorXd& y) {
    if (i == grid_.size - 1) {
      phi1 = y[0];
      phi2 = y[1];
    }
  });
  return phi1 * std::sin(problem_.beta) + phi2 * std::cos(problem_.beta);
}

Eigen::MatrixXd Discretization::states(double lambda) const {
  Eigen::MatrixXd out(state_size(), grid_.size);
  march(lambda, [&](Eigen::Index i, const Eigen::VectorXd& y) { out.col(i) = y; });
  return out;
}

Eigen::VectorXd Discretization::advance(const Eigen::VectorXd& state, double x0, double d,
                                        double lambda) const {
  const std::size_t nacc = accumulators_.size();
  std::vector<double> u(3 * nacc), v(3 * nacc);
  Eigen::VectorXd y = state;
  Eigen::VectorXd k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
  const double hs = d / substeps_;
  double Vs[3];
  for (int s = 0; s < substeps_; ++s) {
    const double xs = x0 + s * hs;
    for (int c = 0; c < 3; ++c) {
      const double x = xs + 0.5 * c * hs;
      Vs[c] = evaluate(problem_.V, x);
      for (std::size_t r = 0; r < nacc; ++r) {
        const auto& acc = accumulators_[r];
        const auto& term = problem_.kernel(acc.row, acc.col)[acc.term];
        u[c * nacc + r] = evaluate(term.x_factor, x);
        v[c * nacc + r] = evaluate(term.t_factor, x);
      }
    }
    derivative(lambda, Vs[0], u.data(), v.data(), y, k1);
    tmp = y + (0.5 * hs) * k1;
    derivative(lambda, Vs[1], u.data() + nacc, v.data() + nacc, tmp, k2);
    tmp = y + (0.5 * hs) * k2;
    derivative(lambda, Vs[1], u.data() + nacc, v.data() + nacc, tmp, k3);
    tmp = y + hs * k3;
    derivative(lambda, Vs[2], u.data() + 2 * nacc, v.data() + 2 * nacc, tmp, k4);
    y += (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

Trajectory solve(const ProblemSpec& p, double lambda) { return Discretization(p).solve(lambda); }

double characteristic(const ProblemSpec& p, double lambda) {
  return Discretization(p).characteristic(lambda);
}

namespace {

double eigen_seed(const ProblemSpec& p, int n) {
  if (n != 0) return eigenvalue_asymptotic(p, n);
  return (omega(p.V, kPi) + p.alpha - p.beta) / kPi;
}

// Bisection on a bracket with a sign change; returns (root, |Delta(root)|).
std::pair<double, double> bisect(const Discretization& d, double lo, double hi, double flo) {
  double mid = 0.5 * (lo + hi);
  double fmid = d.characteristic(mid);
  for (int it = 0; it < 200; ++it) {
    if (fmid == 0.0) break;
    if (hi - lo <= kBracketWidth && std::abs(fmid) <= kRootTolerance) break;
    if ((flo < 0.0) == (fmid < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
    const double next = 0.5 * (lo + hi);
    if (next == lo || next == hi) break;
    mid = next;
    fmid = d.characteristic(mid);
  }
  return {mid, std::abs(fmid)};
}

}  // namespace

Eigenvalue find_eigenvalue(const Discretization& d, int n) {
  const double seed = eigen_seed(d.problem(), n);
  double lo = seed - kBracketHalfWidth;
  double hi = seed + kBracketHalfWidth;
  double flo = d.characteristic(lo);
  double fhi = d.characteristic(hi);
  if ((flo < 0.0) == (fhi < 0.0) && flo != 0.0 && fhi != 0.0) {
    lo -= kBracketExpansion;
    hi += kBracketExpansion;
    flo = d.characteristic(lo);
    fhi = d.characteristic(hi);
    if ((flo < 0.0) == (fhi < 0.0) && flo != 0.0 && fhi != 0.0) throw BracketFailure(n);
  }
  if (flo == 0.0) return {n, lo, 0.0, seed};
  if (fhi == 0.0) return {n, hi, 0.0, seed};
  const auto [root, residual] = bisect(d, lo, hi, flo);
  if (residual > kRootTolerance)
    throw NoConvergence("eigenvalue n=" + std::to_string(n) +
                        " stalled with |Delta| = " + std::to_string(residual));
  return {n, root, residual, seed};
}

std::vector<Eigenvalue> find_eigenvalues(const Discretization& d, int n_min, int n_max) {
  if (n_min > n_max) throw InvalidValue("nMin must not exceed nMax", "nMin");
  std::vector<Eigenvalue> out;
  out.reserve(std::size_t(n_max - n_min + 1));
  for (int n = n_min; n <= n_max; ++n) {
    out.push_back(find_eigenvalue(d, n));
    if (out.size() > 1 && !(out.back().lambda > out[out.size() - 2].lambda))
      throw NoConvergence("eigenvalues for n=" + std::to_string(n - 1) + " and n=" +
                          std::to_string(n) + " are not strictly increasing");
  }
  return out;
}

std::vector<Eigenvalue> find_eigenvalues(const ProblemSpec& p, int n_min, int n_max) {
  return find_eigenvalues(Discretization(p), n_min, n_max);
}

std::vector<Eigenvalue> scan_eigenvalues(const ProblemSpec& p, double lo, double hi, int samples) {
  if (!(hi > lo)) throw InvalidValue("scan interval must be non-empty", "scan");
  if (samples < 2) throw InvalidValue("at least two samples required", "scan");
  const Discretization d(p);
  const double shift = (omega(p.V, kPi) + p.alpha - p.beta) / kPi;
  std::vector<Eigenvalue> out;
  double prev_x = lo;
  double prev_f = d.characteristic(lo);
  for (int s = 1; s < samples; ++s) {
    const double x = lo + (hi - lo) * s / (samples - 1);
    const double f = d.characteristic(x);
    double root = 0.0, residual = 0.0;
    bool found = false;
    if (prev_f == 0.0) {
      root = prev_x;
      found = true;
    } else if ((prev_f < 0.0) != (f < 0.0) && f != 0.0) {
      std::tie(root, residual) = bisect(d, prev_x, x, prev_f);
      found = true;
    }
    if (found) {
      const int n = int(std::lround(root - shift));
      out.push_back({n, root, residual, n != 0 ? eigen_seed(p, n) : shift});
    }
    prev_x = x;
    prev_f = f;
  }
  if (prev_f == 0.0) {
    const int n = int(std::lround(prev_x - shift));
    out.push_back({n, prev_x, 0.0, n != 0 ? eigen_seed(p, n) : shift});
  }
  return out;
}

NodalSet find_nodes(const Discretization& d, const Eigenvalue& ev) {
  const int wanted = std::max(d.grid().size, Eigen::Index(kSamplesPerNode) * std::abs(ev.index) + 1);
  if (wanted > d.grid().size) return find_nodes(Discretization(d.problem(), wanted, d.substeps()), ev);

  const Grid& g = d.grid();
  const Eigen::MatrixXd states = d.states(ev.lambda);
  NodalSet out{ev.index, ev.lambda, {}};
  for (Eigen::Index i = 0; i + 1 < g.size; ++i) {
    const double a = states(0, i);
    const double b = states(0, i + 1);
    if (i > 0 && a == 0.0) {
      out.nodes.push_back(g.x(i));
      continue;
    }
    if (!((a < 0.0) != (b < 0.0)) || b == 0.0) continue;

    const Eigen::VectorXd start = states.col(i);
    const double x0 = g.x(i);
    double lo = 0.0, hi = g.step;
    const double fhi = d.advance(start, x0, hi, ev.lambda)[0];
    if ((a < 0.0) == (fhi < 0.0)) {
      // Local re-integration disagrees with the march at the far end; fall back to the chord.
      out.nodes.push_back(x0 + g.step * a / (a - b));
      continue;
    }
    while (hi - lo > kNodeTolerance) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      const double fm = d.advance(start, x0, mid, ev.lambda)[0];
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm < 0.0) == (a < 0.0)) lo = mid;
      else hi = mid;
    }
    out.nodes.push_back(x0 + 0.5 * (lo + hi));
  }
  // Nodes must be strictly inside (0, pi) and strictly increasing.
  std::erase_if(out.nodes, [](double x) { return !(x > 0.0 && x < kPi); });
  out.nodes.erase(std::unique(out.nodes.begin(), out.nodes.end()), out.nodes.end());
  return out;
}

NodalSet find_nodes(const ProblemSpec& p, const Eigenvalue& ev) {
  return find_nodes(Discretization(p), ev);
}

double integral_residual(const ProblemSpec& p, const Trajectory& t) {
  const Grid& g = t.grid;
  const Eigen::ArrayXd xs = g.abscissae();
  const double lambda = t.lambda;
  const Eigen::ArrayXd V = evaluate(p.V, xs);
  const Eigen::ArrayXd pf = V + p.m;
  const Eigen::ArrayXd rf = V - p.m;

  // Memory terms W_i(x) = sum_k int_0^x M_ik(x, s) phi_k(s) ds.
  Eigen::ArrayXd W[2] = {Eigen::ArrayXd::Zero(g.size), Eigen::ArrayXd::Zero(g.size)};
  const Eigen::ArrayXd* phi[2] = {&t.phi1, &t.phi2};
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (const auto& term : p.kernel(i, k)) {
        const Eigen::ArrayXd inner =
            cumulative_integral(evaluate(term.t_factor, xs) * *phi[k], g.step);
        W[i] += evaluate(term.x_factor, xs) * inner;
      }

  // cos-weighted and sin-weighted sources of the two integral equations.
  const Eigen::ArrayXd sin_source = pf * t.phi1 + W[0];
  const Eigen::ArrayXd cos_source = rf * t.phi2 + W[1];
  const Eigen::ArrayXd c = (lambda * xs).cos();
  const Eigen::ArrayXd s = (lambda * xs).sin();
  const Eigen::ArrayXd Cs = cumulative_integral(c * sin_source, g.step);
  const Eigen::ArrayXd Ss = cumulative_integral(s * sin_source, g.step);
  const Eigen::ArrayXd Cc = cumulative_integral(c * cos_source, g.step);
  const Eigen::ArrayXd Sc = cumulative_integral(s * cos_source, g.step);

  // int_0^x sin l(x-t) h = sin(lx) C[h] - cos(lx) S[h]; int_0^x cos l(x-t) h = cos(lx) C[h] + sin(lx) S[h].
  const Eigen::ArrayXd sin_conv_sin = s * Cs - c * Ss;
  const Eigen::ArrayXd cos_conv_sin = c * Cs + s * Ss;
  const Eigen::ArrayXd sin_conv_cos = s * Cc - c * Sc;
  const Eigen::ArrayXd cos_conv_cos = c * Cc + s * Sc;

  const Eigen::ArrayXd rhs1 = (lambda * xs - p.alpha).cos() + sin_conv_sin + cos_conv_cos;
  const Eigen::ArrayXd rhs2 = (lambda * xs - p.alpha).sin() - cos_conv_sin + sin_conv_cos;
  return std::max((rhs1 - t.phi1).abs().maxCoeff(), (rhs2 - t.phi2).abs().maxCoeff());
}

}  // namespace dnodal
