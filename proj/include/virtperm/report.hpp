#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace virtperm {

// Outcome of one experiment run.  Reports are a pure function of (name,
// params, seed): rerunning with the same triple reproduces every statistic
// bit for bit, regardless of thread count.
struct ExperimentReport {
  std::string name;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> statistics;
  bool pass = false;
  double tolerance = 0.0;
  std::optional<std::string> samples_csv;  // optional raw-sample payload

  std::optional<double> statistic(std::string_view label) const;

  nlohmann::json to_json() const;
  static ExperimentReport from_json(const nlohmann::json& j);
  std::string to_json_string() const;  // dump(2) + newline; deterministic
  std::string to_csv() const;          // label,value lines
};

// A per-size series extracted from statistic labels of the form
// "name@N=123", keyed by series name, each sorted by N.
std::map<std::string, std::vector<std::pair<long long, double>>>
extract_series(const ExperimentReport& report);

// Standalone SVG 1.1 line chart of the report's per-size series (log-scale
// values when every series is a failure probability).  Deterministic bytes;
// a report without any series is rejected.
std::string render_plot_svg(const ExperimentReport& report);
void render_plot(const ExperimentReport& report, const std::string& path);

}  // namespace virtperm
