#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "dnodal/function_spec.hpp"

namespace dnodal {

/// One separable product x_factor(x) * t_factor(t).
struct SeparableTerm {
  FunctionSpec x_factor;
  FunctionSpec t_factor;

  friend bool operator==(const SeparableTerm&, const SeparableTerm&) = default;
};

/// Kernel M(x,t) with M_ij(x,t) = sum_r u_r(x) v_r(t); empty entries are zero.
class SeparableKernelSpec {
 public:
  using Entry = std::vector<SeparableTerm>;

  SeparableKernelSpec() = default;

  Entry& operator()(int i, int j) { return entries_[i][j]; }
  const Entry& operator()(int i, int j) const { return entries_[i][j]; }

  /// M_ij(x, t); indices are zero-based.
  double value(int i, int j, double x, double t) const;
  double diagonal(int i, int j, double t) const { return value(i, j, t, t); }
  bool is_zero() const;
  std::size_t term_count() const;

  friend bool operator==(const SeparableKernelSpec&, const SeparableKernelSpec&) = default;

 private:
  std::array<std::array<Entry, 2>, 2> entries_;
};

inline constexpr int kMinGridPoints = 64;

/// The boundary value problem: potential V, mass m, Volterra kernel M and the
/// boundary angles alpha (at 0) and beta (at pi), with the grid resolution.
struct ProblemSpec {
  FunctionSpec V;
  double m = 0.0;
  SeparableKernelSpec kernel;
  double alpha = 0.0;
  double beta = 0.0;
  int grid_points = 2001;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

/// Throws InvalidValue naming the offending field.
void validate(const ProblemSpec& p);

struct KernelTraces {
  double K = 0.0;  // int_0^x (M11 + M22)(t,t) dt
  double L = 0.0;  // int_0^x (M12 - M21)(t,t) dt
};

KernelTraces kernel_traces(const SeparableKernelSpec& k, double x);

/// Parses the JSON problem document; throws MalformedConfig or InvalidValue.
ProblemSpec parse_problem(std::string_view config_text);
std::string serialize_problem(const ProblemSpec& p);

}  // namespace dnodal
