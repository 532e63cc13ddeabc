#include "virtperm/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "virtperm/format.hpp"

namespace virtperm {

namespace {

bool close_locations(double a, double b) {
  return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a));
}

}  // namespace

std::int64_t PointProcess::total_multiplicity() const {
  if (zero_infinite()) {
    throw std::invalid_argument(
        "total multiplicity undefined: infinite mass at zero");
  }
  std::int64_t total = *zero_multiplicity;
  for (const auto& [loc, mult] : atoms) total += mult;
  return total;
}

std::int64_t PointProcess::multiplicity_near(double location) const {
  if (location == 0.0) {
    if (zero_infinite()) {
      throw std::invalid_argument("multiplicity at zero is infinite");
    }
    return *zero_multiplicity;
  }
  for (const auto& [loc, mult] : atoms) {
    if (close_locations(loc, location)) return mult;
  }
  return 0;
}

nlohmann::json PointProcess::to_json() const {
  nlohmann::json j;
  if (zero_infinite()) {
    j["zero"] = "inf";
  } else {
    j["zero"] = *zero_multiplicity;
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [loc, mult] : atoms) {
    arr.push_back(nlohmann::json::array({loc, mult}));
  }
  j["atoms"] = arr;
  return j;
}

PointProcess PointProcess::from_json(const nlohmann::json& j) {
  PointProcess pp;
  const auto& zero = j.at("zero");
  if (zero.is_string()) {
    if (zero.get<std::string>() != "inf") {
      throw std::invalid_argument("bad zero multiplicity: " + zero.dump());
    }
    pp.zero_multiplicity = std::nullopt;
  } else {
    pp.zero_multiplicity = zero.get<std::int64_t>();
  }
  for (const auto& atom : j.at("atoms")) {
    if (!atom.is_array() || atom.size() != 2) {
      throw std::invalid_argument("bad atom entry: " + atom.dump());
    }
    pp.atoms.emplace_back(atom[0].get<double>(), atom[1].get<std::int64_t>());
  }
  return pp;
}

std::string PointProcess::to_csv() const {
  std::string out = "location,multiplicity\n";
  bool zero_written = false;
  auto write_zero = [&] {
    out += "0,";
    out += zero_infinite() ? "inf" : std::to_string(*zero_multiplicity);
    out += '\n';
    zero_written = true;
  };
  for (const auto& [loc, mult] : atoms) {
    if (!zero_written && loc > 0.0) write_zero();
    out += format_double(loc);
    out += ',';
    out += std::to_string(mult);
    out += '\n';
  }
  if (!zero_written) write_zero();
  return out;
}

PointProcess build_point_process(
    std::vector<std::pair<double, std::int64_t>> raw,
    std::optional<std::int64_t> zero_multiplicity) {
  for (const auto& [loc, mult] : raw) {
    if (loc == 0.0) {
      throw std::invalid_argument(
          "zero location must be passed as the zero multiplicity");
    }
    if (mult <= 0) throw std::invalid_argument("multiplicity must be >= 1");
  }
  std::sort(raw.begin(), raw.end());
  PointProcess pp;
  pp.zero_multiplicity = zero_multiplicity;
  for (const auto& [loc, mult] : raw) {
    if (!pp.atoms.empty() && close_locations(pp.atoms.back().first, loc)) {
      pp.atoms.back().second += mult;
    } else {
      pp.atoms.emplace_back(loc, mult);
    }
  }
  return pp;
}

}  // namespace virtperm
