// dirac-nodal: forward solves, eigenvalue/node tables, inversion and round trips.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dnodal/asymptotics.hpp"
#include "dnodal/errors.hpp"
#include "dnodal/forward.hpp"
#include "dnodal/harness.hpp"
#include "dnodal/inverse.hpp"
#include "dnodal/io.hpp"
#include "dnodal/problem.hpp"

namespace {

using namespace dnodal;
using nlohmann::json;

enum Exit { kOk = 0, kConfig = 2, kNumerics = 3, kDegenerate = 4, kAcceptance = 5 };

struct Args {
  std::string config;
  std::string options;
  std::string out;
  double lambda = 0.0;
  int n_min = 1;
  int n_max = 20;
  std::optional<double> scan_min;
  std::optional<double> scan_max;
  int scan_points = 2000;
};

ProblemSpec load_problem(const std::string& path) {
  if (path.empty()) throw MalformedConfig("--config is required", "");
  return parse_problem(read_file(path));
}

InverseOptions load_options(const std::string& path) {
  if (path.empty()) return {};
  return parse_inverse_options(read_file(path));
}

json problem_echo(const std::string& path, const ProblemSpec& p) {
  return {{"config", path}, {"problem", json::parse(serialize_problem(p))}};
}

void check_range(const Args& a) {
  if (a.n_min > a.n_max) throw InvalidValue("n-min exceeds n-max", "--n-min");
}

// Data files first, report last, so a report only lists files that exist.
void finish(RunReport& report, const std::string& out) {
  const std::string path = out + ".report.json";
  report.outputs.push_back(path);
  write_file_atomic(path, report.to_json());
}

void write_output(RunReport& report, const std::string& path, const std::string& content) {
  write_file_atomic(path, content);
  report.outputs.push_back(path);
}

int cmd_forward(const Args& a) {
  const ProblemSpec p = load_problem(a.config);
  const Trajectory t = solve(p, a.lambda);
  const double residual = integral_residual(p, t);
  RunReport r{"forward"};
  r.inputs = problem_echo(a.config, p);
  r.inputs["lambda"] = a.lambda;
  r.metric("integralResidual", residual);
  r.metric("phi1AtPi", t.phi1[t.phi1.size() - 1]);
  r.metric("phi2AtPi", t.phi2[t.phi2.size() - 1]);
  r.metric("characteristic", characteristic(p, a.lambda));
  write_output(r, a.out, trajectory_csv(t));
  finish(r, a.out);
  return kOk;
}

int cmd_eig(const Args& a) {
  const ProblemSpec p = load_problem(a.config);
  RunReport r{"eig"};
  r.inputs = problem_echo(a.config, p);
  std::vector<Eigenvalue> evs;
  if (a.scan_min || a.scan_max) {
    if (!a.scan_min || !a.scan_max) throw InvalidValue("scan mode needs both bounds", "--scan-min");
    if (!(*a.scan_min < *a.scan_max)) throw InvalidValue("empty scan interval", "--scan-min");
    if (a.scan_points < 2) throw InvalidValue("need at least 2 samples", "--scan-points");
    r.inputs["scanMin"] = *a.scan_min;
    r.inputs["scanMax"] = *a.scan_max;
    r.inputs["scanPoints"] = a.scan_points;
    evs = scan_eigenvalues(p, *a.scan_min, *a.scan_max, a.scan_points);
  } else {
    check_range(a);
    r.inputs["nMin"] = a.n_min;
    r.inputs["nMax"] = a.n_max;
    evs = find_eigenvalues(p, a.n_min, a.n_max);
  }
  double max_residual = 0.0, max_seed_gap = 0.0;
  for (const Eigenvalue& ev : evs) {
    max_residual = std::max(max_residual, std::abs(ev.residual));
    max_seed_gap = std::max(max_seed_gap, std::abs(ev.lambda - ev.seed));
  }
  r.metric("count", double(evs.size()));
  r.metric("maxResidual", max_residual);
  r.metric("maxSeedGap", max_seed_gap);
  if (!evs.empty()) {
    const Eigenvalue& last = evs.back();
    r.metric("lastIndex", last.index);
    r.metric("lastNTimesOffset", last.index * (last.lambda - last.index));
  }
  write_output(r, a.out, eigenvalues_csv(evs));
  finish(r, a.out);
  return kOk;
}

int cmd_nodes(const Args& a) {
  const ProblemSpec p = load_problem(a.config);
  check_range(a);
  RunReport r{"nodes"};
  r.inputs = problem_echo(a.config, p);
  r.inputs["nMin"] = a.n_min;
  r.inputs["nMax"] = a.n_max;
  const Discretization d(p);
  std::vector<NodalSet> sets;
  for (const Eigenvalue& ev : find_eigenvalues(d, a.n_min, a.n_max)) sets.push_back(find_nodes(d, ev));
  double spacing = 0.0, relative = 0.0;
  for (const NodalSet& s : sets) {
    r.metric("count.n" + std::to_string(s.index), double(s.nodes.size()));
    const double h = kPi / s.index;
    for (std::size_t j = 1; j < s.nodes.size(); ++j) {
      const double dev = std::abs(s.nodes[j] - s.nodes[j - 1] - h);
      spacing = std::max(spacing, dev);
      relative = std::max(relative, dev / h);
    }
  }
  r.metric("maxSpacingDeviation", spacing);
  r.metric("maxRelativeSpacingDeviation", relative);
  write_output(r, a.out, nodes_csv(sets));
  finish(r, a.out);
  return kOk;
}

void reconstruction_metrics(RunReport& r, const Reconstruction& rec) {
  r.metric("alpha", rec.alpha);
  r.metric("beta", rec.beta);
  r.metric("m", rec.m);
  r.metric("alphaError", rec.diagnostics.alpha_error);
  r.metric("betaError", rec.diagnostics.beta_error);
  r.metric("mError", rec.diagnostics.m_error);
  r.metric("maxFError", rec.diagnostics.f_error.maxCoeff());
  r.metric("maxGError", rec.diagnostics.g_error.maxCoeff());
}

int cmd_invert(const Args& a) {
  if (a.config.empty()) throw MalformedConfig("--config (nodal CSV) is required", "");
  const NodalData data = parse_nodal_csv(read_file(a.config));
  const InverseOptions opts = load_options(a.options);
  const Reconstruction rec = reconstruct(data, opts);
  RunReport r{"invert"};
  r.inputs = {{"nodes", a.config}, {"options", inverse_options_json(opts)}};
  reconstruction_metrics(r, rec);
  write_output(r, a.out, reconstruction_csv(rec));
  write_output(r, a.out + ".json", reconstruction_json(rec).dump(2) + "\n");
  finish(r, a.out);
  return kOk;
}

void round_trip_metrics(RunReport& r, const RoundTrip& rt) {
  r.metric("gridPoints", rt.grid_points);
  r.metric("VSupError", rt.metrics.V_sup_error);
  r.metric("LprimeSupError", rt.metrics.Lprime_sup_error);
  r.metric("alphaError", rt.metrics.alpha_error);
  r.metric("betaError", rt.metrics.beta_error);
  r.metric("mError", rt.metrics.m_error);
  r.metric("maxIntegralResidual", rt.metrics.max_residual);
}

int cmd_roundtrip(const Args& a) {
  const ProblemSpec p = load_problem(a.config);
  const InverseOptions opts = load_options(a.options);
  const RoundTrip rt = run_round_trip(p, a.n_max, opts);
  RunReport r{"roundtrip"};
  r.inputs = problem_echo(a.config, p);
  r.inputs["nMax"] = a.n_max;
  r.inputs["options"] = inverse_options_json(opts);
  round_trip_metrics(r, rt);
  reconstruction_metrics(r, rt.reconstruction);
  write_output(r, a.out, reconstruction_csv(rt.reconstruction));
  finish(r, a.out);
  return kOk;
}

int cmd_asym_check(const Args& a) {
  const ProblemSpec p = load_problem(a.config);
  check_range(a);
  const AsymCheck ac = asym_check(p, a.n_min, a.n_max);
  RunReport r{"asym-check"};
  r.inputs = problem_echo(a.config, p);
  r.inputs["nMin"] = a.n_min;
  r.inputs["nMax"] = a.n_max;
  for (const EigenComparison& e : ac.eigenvalues)
    r.metric("nTimesDiff.n" + std::to_string(e.n), e.n * (e.lambda_solver - e.lambda_asym));
  std::vector<double> worst(std::size_t(a.n_max - a.n_min + 1), 0.0);
  for (const NodeComparison& c : ac.nodes) {
    double& w = worst[std::size_t(c.n - a.n_min)];
    w = std::max(w, double(c.n) * c.n * std::abs(c.x_solver - c.x_asym));
  }
  for (int n = a.n_min; n <= a.n_max; ++n)
    r.metric("maxN2NodeDiff.n" + std::to_string(n), worst[std::size_t(n - a.n_min)]);
  write_output(r, a.out, asym_eigen_csv(ac));
  write_output(r, a.out + ".nodes.csv", asym_nodes_csv(ac));
  finish(r, a.out);
  return kOk;
}

int cmd_paper_example(const Args& a) {
  const ProblemSpec p = paper_example_problem();
  const InverseOptions opts = load_options(a.options);
  // Computed before any output so an unwritable path is the only IO failure left.
  const RoundTrip rt = run_round_trip(p, a.n_max, opts);
  const std::vector<Check> checks = paper_example_checks(rt.reconstruction);

  RunReport r{"paper-example"};
  r.inputs = {{"problem", json::parse(serialize_problem(p))},
              {"nMax", a.n_max},
              {"options", inverse_options_json(opts)}};
  round_trip_metrics(r, rt);
  bool ok = true;
  std::printf("%-34s %14s %14s %10s  %s\n", "quantity", "reconstructed", "target", "budget", "");
  for (const Check& c : checks) {
    std::printf("%-34s %14.8f %14.8f %10.3g  %s\n", c.name.c_str(), c.value, c.target, c.tolerance,
                c.pass() ? "PASS" : "FAIL");
    r.metric(c.name, c.value);
    ok = ok && c.pass();
  }
  r.metric("pass", ok ? 1.0 : 0.0);
  std::printf("%s\n", ok ? "PASS" : "FAIL");
  write_output(r, a.out, reconstruction_csv(rt.reconstruction));
  finish(r, a.out);
  return ok ? kOk : kAcceptance;
}

int dispatch(const std::string& name, const Args& a) {
  try {
    if (name == "forward") return cmd_forward(a);
    if (name == "eig") return cmd_eig(a);
    if (name == "nodes") return cmd_nodes(a);
    if (name == "invert") return cmd_invert(a);
    if (name == "roundtrip") return cmd_roundtrip(a);
    if (name == "asym-check") return cmd_asym_check(a);
    return cmd_paper_example(a);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kConfig;
  } catch (const WindowTooLarge& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const BracketFailure& e) {
    std::cerr << "numerical failure at n=" << e.index() << ": " << e.what() << "\n";
    return kNumerics;
  } catch (const NoConvergence& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerics;
  } catch (const DegenerateAlpha& e) {
    std::cerr << "degenerate inversion: " << e.what() << "\n";
    return kDegenerate;
  } catch (const EmptyLevel& e) {
    std::cerr << "degenerate inversion: " << e.what() << "\n";
    return kDegenerate;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forward and inverse nodal computations for integro-differential Dirac systems"};
  app.require_subcommand(1);
  // One argument set per subcommand: default_val writes through immediately.
  std::map<std::string, Args> args;

  auto add = [&](const char* name, const char* about, const std::string& default_out) {
    CLI::App* sub = app.add_subcommand(name, about);
    sub->add_option("--out", args[name].out, "Output path; the run report goes to <out>.report.json")
        ->default_val(default_out);
    return sub;
  };
  auto of = [&](CLI::App* sub) -> Args& { return args[sub->get_name()]; };
  auto config = [&](CLI::App* sub, const char* what) { sub->add_option("--config", of(sub).config, what); };
  auto range = [&](CLI::App* sub, int n_min, int n_max) {
    sub->add_option("--n-min", of(sub).n_min, "Smallest eigenvalue index")->default_val(n_min);
    sub->add_option("--n-max", of(sub).n_max, "Largest eigenvalue index")->default_val(n_max);
  };

  CLI::App* forward = add("forward", "Solve at one lambda and write the trajectory", "forward.csv");
  config(forward, "Problem config (JSON)");
  forward->add_option("--lambda", of(forward).lambda, "Spectral parameter")->required();

  CLI::App* eig = add("eig", "Eigenvalue table", "eigenvalues.csv");
  config(eig, "Problem config (JSON)");
  range(eig, 1, 20);
  eig->add_option("--scan-min", of(eig).scan_min, "Scan mode: lower end of the lambda interval");
  eig->add_option("--scan-max", of(eig).scan_max, "Scan mode: upper end of the lambda interval");
  eig->add_option("--scan-points", of(eig).scan_points, "Scan mode: number of samples")->default_val(2000);

  CLI::App* nodes = add("nodes", "Nodal table", "nodes.csv");
  config(nodes, "Problem config (JSON)");
  range(nodes, 1, 20);

  CLI::App* invert = add("invert", "Reconstruct from a nodal CSV", "reconstruction.csv");
  config(invert, "Nodal data CSV (n,j,x)");
  invert->add_option("--options", of(invert).options, "Inverse options (JSON)");

  CLI::App* roundtrip = add("roundtrip", "Forward, nodes, inverse and comparison", "roundtrip.csv");
  config(roundtrip, "Problem config (JSON)");
  roundtrip->add_option("--n-max", of(roundtrip).n_max, "Largest level")->default_val(200);
  roundtrip->add_option("--options", of(roundtrip).options, "Inverse options (JSON)");

  CLI::App* asym = add("asym-check", "Solver against the asymptotic formulas", "asym.csv");
  config(asym, "Problem config (JSON)");
  range(asym, 10, 50);

  CLI::App* paper = add("paper-example", "Built-in worked example end to end", "paper_example.csv");
  paper->add_option("--n-max", of(paper).n_max, "Largest level")->default_val(200);
  paper->add_option("--options", of(paper).options, "Inverse options (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  const int code = dispatch(name, args[name]);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  std::cerr << name << ": " << elapsed.count() << " s\n";
  return code;
}
