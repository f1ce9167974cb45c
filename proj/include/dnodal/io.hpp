#pragma once

#include <json.hpp>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dnodal/forward.hpp"
#include "dnodal/inverse.hpp"

namespace dnodal {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

std::string read_file(const std::string& path);
/// Writes to a sibling temporary and renames over path. Throws IoError.
void write_file_atomic(const std::string& path, std::string_view content);

// CSV tables; LF line endings, fixed column order.
std::string trajectory_csv(const Trajectory& t);
std::string eigenvalues_csv(const std::vector<Eigenvalue>& evs);
std::string nodes_csv(const std::vector<NodalSet>& sets);
std::string reconstruction_csv(const Reconstruction& r);

/// Parses `n,j,x` rows (header required). Throws MalformedConfig/InvalidValue.
NodalData parse_nodal_csv(std::string_view text);

/// JSON options document; unknown fields are rejected.
InverseOptions parse_inverse_options(std::string_view text);

/// Inverse of parse_inverse_options; every field is written.
nlohmann::json inverse_options_json(const InverseOptions& opts);

nlohmann::json reconstruction_json(const Reconstruction& r);

struct RunReport {
  std::string command;
  nlohmann::json inputs = nlohmann::json::object();
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, double>> metrics;

  void metric(std::string name, double value) { metrics.emplace_back(std::move(name), value); }
  std::string to_json() const;
};

}  // namespace dnodal
