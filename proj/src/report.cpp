#include "virtperm/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "virtperm/format.hpp"

namespace virtperm {

std::optional<double> ExperimentReport::statistic(
    std::string_view label) const {
  for (const auto& [name_, value] : statistics) {
    if (name_ == label) return value;
  }
  return std::nullopt;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["params"] = params;
  j["seed"] = seed;
  nlohmann::json stats = nlohmann::json::array();
  for (const auto& [label, value] : statistics) {
    stats.push_back(nlohmann::json::array({label, value}));
  }
  j["statistics"] = stats;
  j["pass"] = pass;
  j["tolerance"] = tolerance;
  if (samples_csv) j["samples"] = *samples_csv;
  return j;
}

ExperimentReport ExperimentReport::from_json(const nlohmann::json& j) {
  ExperimentReport report;
  report.name = j.at("name").get<std::string>();
  report.params = j.at("params").get<std::map<std::string, std::string>>();
  report.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& entry : j.at("statistics")) {
    if (!entry.is_array() || entry.size() != 2) {
      throw std::invalid_argument("bad statistic entry: " + entry.dump());
    }
    report.statistics.emplace_back(entry[0].get<std::string>(),
                                   entry[1].get<double>());
  }
  report.pass = j.at("pass").get<bool>();
  report.tolerance = j.at("tolerance").get<double>();
  if (j.contains("samples")) {
    report.samples_csv = j.at("samples").get<std::string>();
  }
  return report;
}

std::string ExperimentReport::to_json_string() const {
  return to_json().dump(2) + "\n";
}

std::string ExperimentReport::to_csv() const {
  std::string out = "statistic,value\n";
  for (const auto& [label, value] : statistics) {
    out += label;
    out += ',';
    out += format_double(value);
    out += '\n';
  }
  return out;
}

std::map<std::string, std::vector<std::pair<long long, double>>>
extract_series(const ExperimentReport& report) {
  std::map<std::string, std::vector<std::pair<long long, double>>> series;
  for (const auto& [label, value] : report.statistics) {
    auto at = label.find("@N=");
    if (at == std::string::npos) continue;
    std::string name_ = label.substr(0, at);
    long long n = 0;
    try {
      n = parse_int(label.substr(at + 3));
    } catch (const std::invalid_argument&) {
      continue;
    }
    series[name_].emplace_back(n, value);
  }
  for (auto& [name_, points] : series) {
    std::sort(points.begin(), points.end());
  }
  return series;
}

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string sci3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#17becf"};

}  // namespace

std::string render_plot_svg(const ExperimentReport& report) {
  auto series = extract_series(report);
  if (series.empty()) {
    throw std::invalid_argument(
        "report has no per-size statistic series to plot");
  }
  bool log_y = std::all_of(series.begin(), series.end(), [](const auto& s) {
    return s.first.rfind("p_fail", 0) == 0;
  });
  constexpr double kFloor = 1e-6;  // keeps zero probabilities plottable

  std::vector<long long> sizes;
  for (const auto& [name_, points] : series) {
    for (const auto& [n, v] : points) sizes.push_back(n);
  }
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  auto transform = [&](double v) {
    return log_y ? std::log10(std::max(v, kFloor)) : v;
  };
  double lo = 1e300, hi = -1e300;
  for (const auto& [name_, points] : series) {
    for (const auto& [n, v] : points) {
      lo = std::min(lo, transform(v));
      hi = std::max(hi, transform(v));
    }
  }
  if (!log_y) lo = std::min(lo, 0.0);
  if (hi <= lo) hi = lo + 1.0;
  double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  const double width = 720, height = 480;
  const double left = 80, right = 40, top = 40, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto x_of = [&](long long n) {
    auto it = std::lower_bound(sizes.begin(), sizes.end(), n);
    double idx = static_cast<double>(it - sizes.begin());
    double span = sizes.size() > 1 ? static_cast<double>(sizes.size() - 1) : 1;
    return left + plot_w * idx / span;
  };
  auto y_of = [&](double v) {
    return top + plot_h * (1.0 - (transform(v) - lo) / (hi - lo));
  };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "width=\"" + fixed2(width) + "\" height=\"" + fixed2(height) +
         "\" viewBox=\"0 0 " + fixed2(width) + " " + fixed2(height) + "\">\n";
  svg += "<rect width=\"" + fixed2(width) + "\" height=\"" + fixed2(height) +
         "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed2(width / 2) + "\" y=\"24\" "
         "text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">" +
         report.name + "</text>\n";

  // Axes.
  svg += "<line x1=\"" + fixed2(left) + "\" y1=\"" + fixed2(top) +
         "\" x2=\"" + fixed2(left) + "\" y2=\"" + fixed2(top + plot_h) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fixed2(left) + "\" y1=\"" + fixed2(top + plot_h) +
         "\" x2=\"" + fixed2(left + plot_w) + "\" y2=\"" +
         fixed2(top + plot_h) + "\" stroke=\"black\"/>\n";

  // Y ticks.
  for (int i = 0; i <= 4; ++i) {
    double t = lo + (hi - lo) * i / 4.0;
    double y = top + plot_h * (1.0 - static_cast<double>(i) / 4.0);
    double label = log_y ? std::pow(10.0, t) : t;
    svg += "<line x1=\"" + fixed2(left - 5) + "\" y1=\"" + fixed2(y) +
           "\" x2=\"" + fixed2(left) + "\" y2=\"" + fixed2(y) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed2(left - 8) + "\" y=\"" + fixed2(y + 4) +
           "\" text-anchor=\"end\" font-family=\"monospace\" "
           "font-size=\"11\">" + sci3(label) + "</text>\n";
  }
  // X ticks: one per size.
  for (long long n : sizes) {
    double x = x_of(n);
    svg += "<line x1=\"" + fixed2(x) + "\" y1=\"" + fixed2(top + plot_h) +
           "\" x2=\"" + fixed2(x) + "\" y2=\"" + fixed2(top + plot_h + 5) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed2(x) + "\" y=\"" + fixed2(top + plot_h + 20) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" "
           "font-size=\"11\">" + std::to_string(n) + "</text>\n";
  }
  svg += "<text x=\"" + fixed2(left + plot_w / 2) + "\" y=\"" +
         fixed2(height - 16) +
         "\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"12\">N</text>\n";

  int color = 0;
  double legend_y = top + 14;
  for (const auto& [name_, points] : series) {
    const char* stroke = kPalette[color % 6];
    std::string poly;
    for (const auto& [n, v] : points) {
      if (!poly.empty()) poly += ' ';
      poly += fixed2(x_of(n)) + "," + fixed2(y_of(v));
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) +
           "\" stroke-width=\"2\" points=\"" + poly + "\"/>\n";
    for (const auto& [n, v] : points) {
      svg += "<circle cx=\"" + fixed2(x_of(n)) + "\" cy=\"" +
             fixed2(y_of(v)) + "\" r=\"3\" fill=\"" + stroke + "\"/>\n";
    }
    svg += "<text x=\"" + fixed2(left + plot_w - 4) + "\" y=\"" +
           fixed2(legend_y) +
           "\" text-anchor=\"end\" font-family=\"monospace\" "
           "font-size=\"12\" fill=\"" + stroke + "\">" + name_ + "</text>\n";
    legend_y += 16;
    ++color;
  }
  svg += "</svg>\n";
  return svg;
}

void render_plot(const ExperimentReport& report, const std::string& path) {
  std::string svg = render_plot_svg(report);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  out << svg;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace virtperm
