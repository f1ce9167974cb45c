#include "dnodal/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "dnodal/errors.hpp"

namespace dnodal {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out.write(content.data(), std::streamsize(content.size()));
    out.close();
    if (!out) {
      std::remove(tmp.c_str());
      throw IoError("cannot write " + path);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw IoError("cannot rename onto " + path + ": " + ec.message());
  }
}

std::string trajectory_csv(const Trajectory& t) {
  std::string out = "x,phi1,phi2\n";
  for (Eigen::Index i = 0; i < t.grid.size; ++i)
    out += format_double(t.grid.x(i)) + "," + format_double(t.phi1[i]) + "," +
           format_double(t.phi2[i]) + "\n";
  return out;
}

std::string eigenvalues_csv(const std::vector<Eigenvalue>& evs) {
  std::string out = "n,lambda,residual,seed\n";
  for (const auto& e : evs)
    out += std::to_string(e.index) + "," + format_double(e.lambda) + "," +
           format_double(e.residual) + "," + format_double(e.seed) + "\n";
  return out;
}

std::string nodes_csv(const std::vector<NodalSet>& sets) {
  std::string out = "n,j,x\n";
  for (const auto& s : sets)
    for (std::size_t j = 0; j < s.nodes.size(); ++j)
      out += std::to_string(s.index) + "," + std::to_string(j) + "," + format_double(s.nodes[j]) + "\n";
  return out;
}

std::string reconstruction_csv(const Reconstruction& r) {
  std::string out = "x,f,g,V,Lprime,omega\n";
  for (Eigen::Index i = 0; i < r.f.size(); ++i)
    out += format_double(r.f.x(i)) + "," + format_double(r.f[i]) + "," + format_double(r.g[i]) + "," +
           format_double(r.V[i]) + "," + format_double(r.Lprime[i]) + "," + format_double(r.omega[i]) +
           "\n";
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_field(std::string_view field, const std::string& where) {
  field = trim(field);
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw MalformedConfig("cannot parse '" + std::string(field) + "'", where);
  return value;
}

}  // namespace

NodalData parse_nodal_csv(std::string_view text) {
  NodalData data;
  std::size_t line_no = 0;
  bool header = false;
  std::map<int, std::vector<std::pair<int, double>>> rows;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    const auto fields = split(line, ',');
    if (!header) {
      if (fields.size() != 3 || trim(fields[0]) != "n" || trim(fields[1]) != "j" || trim(fields[2]) != "x")
        throw MalformedConfig("expected header n,j,x", where);
      header = true;
      continue;
    }
    if (fields.size() != 3) throw MalformedConfig("expected three fields", where);
    const int n = parse_field<int>(fields[0], where);
    const int j = parse_field<int>(fields[1], where);
    const double x = parse_field<double>(fields[2], where);
    rows[n].emplace_back(j, x);
  }
  if (!header) throw MalformedConfig("empty nodal table", "line 1");
  for (auto& [n, entries] : rows) {
    std::sort(entries.begin(), entries.end());
    auto& nodes = data.levels[n];
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (entries[k].first != int(k))
        throw InvalidValue("node indices must run 0, 1, 2, ... without gaps", "n=" + std::to_string(n));
      nodes.push_back(entries[k].second);
    }
  }
  data.validate();
  return data;
}

InverseOptions parse_inverse_options(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw MalformedConfig(e.what(), "");
  }
  if (!doc.is_object()) throw InvalidValue("expected an object", "$");
  static const std::set<std::string> allowed = {
      "targetGridPoints", "nValues",  "extrapolationDepth", "smoothingWindow",
      "mKnown",           "degeneracyThreshold", "fitPoints",  "fitDegree",
      "fitAlternating",   "traceFormula"};
  for (const auto& [key, _] : doc.items())
    if (!allowed.count(key)) throw InvalidValue("unknown field", "$." + key);

  InverseOptions o;
  auto integer = [&](const char* key, int& target) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number_integer()) throw InvalidValue("expected an integer", std::string("$.") + key);
    target = doc[key].get<int>();
  };
  auto number = [&](const char* key) {
    if (!doc[key].is_number()) throw InvalidValue("expected a number", std::string("$.") + key);
    return doc[key].get<double>();
  };
  integer("targetGridPoints", o.target_grid_points);
  integer("extrapolationDepth", o.extrapolation_depth);
  integer("smoothingWindow", o.smoothing_window);
  integer("fitPoints", o.fit_points);
  integer("fitDegree", o.fit_degree);
  if (doc.contains("degeneracyThreshold")) o.degeneracy_threshold = number("degeneracyThreshold");
  if (doc.contains("mKnown") && !doc["mKnown"].is_null()) o.m_known = number("mKnown");
  if (doc.contains("fitAlternating")) {
    if (!doc["fitAlternating"].is_boolean()) throw InvalidValue("expected a boolean", "$.fitAlternating");
    o.fit_alternating = doc["fitAlternating"].get<bool>();
  }
  if (doc.contains("traceFormula")) {
    const json& t = doc["traceFormula"];
    if (t == "full") o.trace_formula = TraceFormula::Full;
    else if (t == "truncated") o.trace_formula = TraceFormula::Truncated;
    else throw InvalidValue("expected \"full\" or \"truncated\"", "$.traceFormula");
  }
  if (doc.contains("nValues")) {
    if (!doc["nValues"].is_array()) throw InvalidValue("expected an array", "$.nValues");
    for (std::size_t i = 0; i < doc["nValues"].size(); ++i) {
      const json& v = doc["nValues"][i];
      if (!v.is_number_integer()) throw InvalidValue("expected an integer", "$.nValues[" + std::to_string(i) + "]");
      o.n_values.push_back(v.get<int>());
    }
  }
  try {
    validate(o);
  } catch (const InvalidValue& e) {
    throw InvalidValue(e.message(), "$." + e.path());
  }
  return o;
}

json reconstruction_json(const Reconstruction& r) {
  const auto& d = r.diagnostics;
  return {{"alpha", r.alpha},
          {"beta", r.beta},
          {"m", r.m},
          {"mFromData", r.m_from_data},
          {"diagnostics",
           {{"levels", d.levels},
            {"alphaError", d.alpha_error},
            {"betaError", d.beta_error},
            {"mError", d.m_error},
            {"maxFError", d.f_error.maxCoeff()},
            {"maxGError", d.g_error.maxCoeff()}}}};
}

json inverse_options_json(const InverseOptions& o) {
  return {{"targetGridPoints", o.target_grid_points},
          {"nValues", o.n_values},
          {"extrapolationDepth", o.extrapolation_depth},
          {"smoothingWindow", o.smoothing_window},
          {"mKnown", o.m_known ? json(*o.m_known) : json(nullptr)},
          {"degeneracyThreshold", o.degeneracy_threshold},
          {"fitPoints", o.fit_points},
          {"fitDegree", o.fit_degree},
          {"fitAlternating", o.fit_alternating},
          {"traceFormula", o.trace_formula == TraceFormula::Full ? "full" : "truncated"}};
}

std::string RunReport::to_json() const {
  json m = json::object();
  for (const auto& [k, v] : metrics) m[k] = std::isfinite(v) ? json(v) : json(nullptr);
  json doc = {{"command", command}, {"inputs", inputs}, {"outputs", outputs}, {"metrics", m}};
  return doc.dump(2) + "\n";
}

}  // namespace dnodal
