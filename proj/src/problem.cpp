#include "dnodal/problem.hpp"

#include <cmath>
#include <json.hpp>
#include <set>

#include "dnodal/errors.hpp"
#include "dnodal/sampled.hpp"

namespace dnodal {

using nlohmann::json;

double SeparableKernelSpec::value(int i, int j, double x, double t) const {
  double sum = 0.0;
  for (const auto& term : entries_[i][j]) sum += evaluate(term.x_factor, x) * evaluate(term.t_factor, t);
  return sum;
}

bool SeparableKernelSpec::is_zero() const {
  for (const auto& row : entries_)
    for (const auto& e : row)
      if (!e.empty()) return false;
  return true;
}

std::size_t SeparableKernelSpec::term_count() const {
  std::size_t n = 0;
  for (const auto& row : entries_)
    for (const auto& e : row) n += e.size();
  return n;
}

void validate(const ProblemSpec& p) {
  if (p.grid_points < kMinGridPoints)
    throw InvalidValue("must be at least " + std::to_string(kMinGridPoints), "gridPoints");
  if (!std::isfinite(p.m)) throw InvalidValue("must be finite", "m");
  if (!std::isfinite(p.alpha)) throw InvalidValue("must be finite", "alpha");
  if (!std::isfinite(p.beta)) throw InvalidValue("must be finite", "beta");
}

KernelTraces kernel_traces(const SeparableKernelSpec& k, double x) {
  KernelTraces out;
  if (k.is_zero() || x == 0.0) return out;
  if (!k(0, 0).empty() || !k(1, 1).empty())
    out.K = integrate([&](double t) { return k.diagonal(0, 0, t) + k.diagonal(1, 1, t); }, 0.0, x);
  if (!k(0, 1).empty() || !k(1, 0).empty())
    out.L = integrate([&](double t) { return k.diagonal(0, 1, t) - k.diagonal(1, 0, t); }, 0.0, x);
  return out;
}

namespace {

constexpr const char* kEntryNames[2][2] = {{"M11", "M12"}, {"M21", "M22"}};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw InvalidValue("unknown field", path + "." + key);
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw InvalidValue("expected an object", path);
  return j;
}

const json& require_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw InvalidValue("expected an array", path);
  return j;
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw InvalidValue("expected a number", path);
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InvalidValue("must be finite", path);
  return v;
}

int read_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw InvalidValue("expected an integer", path);
  const auto v = j.get<long long>();
  if (v < INT32_MIN || v > INT32_MAX) throw InvalidValue("integer out of range", path);
  return int(v);
}

FunctionSpec read_series(const json& j, const std::string& path) {
  require_array(j, path);
  std::vector<Term> terms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string tp = path + "[" + std::to_string(i) + "]";
    const json& t = require_object(j[i], tp);
    reject_unknown(t, {"kind", "coeff", "k"}, tp);
    if (!t.contains("kind") || !t["kind"].is_string())
      throw InvalidValue("expected \"power\", \"cos\" or \"sin\"", tp + ".kind");
    const std::string kind = t["kind"].get<std::string>();
    Term term;
    if (kind == "power") term.kind = TermKind::Power;
    else if (kind == "cos") term.kind = TermKind::Cosine;
    else if (kind == "sin") term.kind = TermKind::Sine;
    else throw InvalidValue("expected \"power\", \"cos\" or \"sin\"", tp + ".kind");
    if (!t.contains("coeff")) throw InvalidValue("missing field", tp + ".coeff");
    term.coeff = read_number(t["coeff"], tp + ".coeff");
    term.k = t.contains("k") ? read_integer(t["k"], tp + ".k") : 0;
    if (term.k < 0) throw InvalidValue("must be non-negative", tp + ".k");
    if (term.kind == TermKind::Power && term.k > kMaxPowerDegree)
      throw InvalidValue("power degree too large", tp + ".k");
    terms.push_back(term);
  }
  return FunctionSpec(std::move(terms));
}

json write_series(const FunctionSpec& f) {
  json out = json::array();
  for (const auto& t : f.terms()) {
    const char* kind = t.kind == TermKind::Power ? "power" : t.kind == TermKind::Cosine ? "cos" : "sin";
    out.push_back({{"kind", kind}, {"coeff", t.coeff}, {"k", t.k}});
  }
  return out;
}

}  // namespace

ProblemSpec parse_problem(std::string_view config_text) {
  json doc;
  try {
    doc = json::parse(config_text.begin(), config_text.end());
  } catch (const json::parse_error& e) {
    throw MalformedConfig(e.what(), "");
  }
  require_object(doc, "$");
  reject_unknown(doc, {"V", "m", "kernel", "alpha", "beta", "gridPoints"}, "$");

  ProblemSpec p;
  if (doc.contains("V")) p.V = read_series(doc["V"], "$.V");
  for (const char* key : {"m", "alpha", "beta"})
    if (!doc.contains(key)) throw InvalidValue("missing field", std::string("$.") + key);
  p.m = read_number(doc["m"], "$.m");
  p.alpha = read_number(doc["alpha"], "$.alpha");
  p.beta = read_number(doc["beta"], "$.beta");
  if (doc.contains("gridPoints")) p.grid_points = read_integer(doc["gridPoints"], "$.gridPoints");

  if (doc.contains("kernel")) {
    const json& k = require_object(doc["kernel"], "$.kernel");
    reject_unknown(k, {"M11", "M12", "M21", "M22"}, "$.kernel");
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const std::string name = kEntryNames[i][j];
        if (!k.contains(name)) continue;
        const std::string ep = "$.kernel." + name;
        const json& entry = require_array(k[name], ep);
        for (std::size_t r = 0; r < entry.size(); ++r) {
          const std::string rp = ep + "[" + std::to_string(r) + "]";
          const json& pair = require_object(entry[r], rp);
          reject_unknown(pair, {"x", "t"}, rp);
          SeparableTerm term;
          if (pair.contains("x")) term.x_factor = read_series(pair["x"], rp + ".x");
          if (pair.contains("t")) term.t_factor = read_series(pair["t"], rp + ".t");
          p.kernel(i, j).push_back(std::move(term));
        }
      }
  }

  try {
    validate(p);
  } catch (const InvalidValue& e) {
    throw InvalidValue(e.message(), "$." + e.path());
  }
  return p;
}

std::string serialize_problem(const ProblemSpec& p) {
  json kernel = json::object();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      json entry = json::array();
      for (const auto& term : p.kernel(i, j))
        entry.push_back({{"x", write_series(term.x_factor)}, {"t", write_series(term.t_factor)}});
      kernel[kEntryNames[i][j]] = std::move(entry);
    }
  json doc = {{"V", write_series(p.V)}, {"m", p.m},       {"kernel", kernel},
              {"alpha", p.alpha},       {"beta", p.beta}, {"gridPoints", p.grid_points}};
  return doc.dump(2) + "\n";
}

}  // namespace dnodal
