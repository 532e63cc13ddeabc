#include "virtperm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "virtperm/format.hpp"

namespace virtperm {

namespace {

void check_position(const LambdaSequence& lambda, const Position& pos) {
  if (const auto* c = std::get_if<OnCircle>(&pos)) {
    double perim = lambda.perimeter(c->circle);  // throws on bad index
    if (!(c->coord >= 0.0) || c->coord >= perim) {
      throw std::invalid_argument("arc coordinate " + format_double(c->coord) +
                                  " outside [0," + format_double(perim) +
                                  ") on circle " + std::to_string(c->circle));
    }
  } else {
    if (std::get<FixedAtom>(pos).atom < 0) {
      throw std::invalid_argument("atom ids must be non-negative");
    }
  }
}

}  // namespace

PointConfig::PointConfig(LambdaSequence lambda,
                         std::map<ElementId, Position> points)
    : lambda_(std::move(lambda)), points_(std::move(points)) {
  std::set<std::pair<int, double>> circle_seen;
  std::set<ElementId> atom_seen;
  for (const auto& [id, pos] : points_) {
    if (id < 0) throw std::invalid_argument("element ids must be non-negative");
    check_position(lambda_, pos);
    if (const auto* c = std::get_if<OnCircle>(&pos)) {
      if (!circle_seen.emplace(c->circle, c->coord).second) {
        throw std::invalid_argument("two points share circle " +
                                    std::to_string(c->circle) +
                                    " coordinate " + format_double(c->coord));
      }
    } else {
      if (!atom_seen.insert(std::get<FixedAtom>(pos).atom).second) {
        throw std::invalid_argument("two points share a fixed atom");
      }
    }
  }
}

const Position& PointConfig::at(ElementId id) const {
  auto it = points_.find(id);
  if (it == points_.end()) {
    throw std::invalid_argument("element " + std::to_string(id) +
                                " has no position in this configuration");
  }
  return it->second;
}

std::vector<ElementId> PointConfig::ids() const {
  std::vector<ElementId> out;
  out.reserve(points_.size());
  for (const auto& [id, pos] : points_) out.push_back(id);
  return out;
}

PointConfig PointConfig::with_position(ElementId id,
                                       const Position& pos) const {
  auto points = points_;
  points[id] = pos;
  return PointConfig(lambda_, std::move(points));
}

nlohmann::json PointConfig::to_json() const {
  nlohmann::json j;
  j["lambda"] = lambda_.values();
  j["dust"] = lambda_.dust();
  nlohmann::json pts = nlohmann::json::object();
  for (const auto& [id, pos] : points_) {
    nlohmann::json entry;
    if (const auto* c = std::get_if<OnCircle>(&pos)) {
      entry["circle"] = c->circle;
      entry["coord"] = c->coord;
    } else {
      entry["atom"] = std::get<FixedAtom>(pos).atom;
    }
    pts[std::to_string(id)] = entry;
  }
  j["points"] = pts;
  return j;
}

PointConfig PointConfig::from_json(const nlohmann::json& j) {
  auto lambda =
      LambdaSequence::from_values(j.at("lambda").get<std::vector<double>>());
  std::map<ElementId, Position> points;
  for (const auto& [key, entry] : j.at("points").items()) {
    ElementId id = static_cast<ElementId>(parse_int(key));
    if (entry.contains("atom")) {
      points[id] = FixedAtom{entry.at("atom").get<ElementId>()};
    } else {
      points[id] = OnCircle{entry.at("circle").get<int>(),
                            entry.at("coord").get<double>()};
    }
  }
  return PointConfig(std::move(lambda), std::move(points));
}

PointConfig sample_positions(const LambdaSequence& lambda,
                             std::span<const ElementId> ids,
                             const SplitRng& rng) {
  std::vector<ElementId> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0) {
      throw std::invalid_argument("element ids must be non-negative");
    }
    if (i > 0 && sorted[i] == sorted[i - 1]) {
      throw std::invalid_argument("duplicate element id " +
                                  std::to_string(sorted[i]));
    }
  }
  std::map<ElementId, Position> points;
  std::set<std::pair<int, double>> taken;
  for (ElementId id : sorted) {
    SplitRng own = rng.split(static_cast<std::uint64_t>(id));
    for (;;) {
      // One uniform mass coordinate picks both the circle and the arc
      // position; the tail of the unit interval is the dust.
      double u = own.next_unit();
      int k = lambda.circle_at_mass(u);
      if (k == 0) {
        points[id] = FixedAtom{id};  // ids are unique, so atoms are too
        break;
      }
      double coord = u - lambda.offset(k);
      double perim = lambda.perimeter(k);
      if (coord >= perim) coord = std::nextafter(perim, 0.0);
      if (coord < 0.0) coord = 0.0;
      if (taken.emplace(k, coord).second) {
        points[id] = OnCircle{k, coord};
        break;
      }
      // Exact collision with an earlier id: redraw this id.
    }
  }
  return PointConfig(lambda, std::move(points));
}

Permutation induced_permutation(const PointConfig& config,
                                std::span<const ElementId> subset) {
  std::vector<ElementId> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i] == sorted[i - 1]) {
      throw std::invalid_argument("duplicate element id " +
                                  std::to_string(sorted[i]));
    }
  }
  const int circles = config.lambda().circle_count();
  std::vector<std::vector<std::pair<double, ElementId>>> by_circle(circles);
  std::vector<ElementId> image(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Position& pos = config.at(sorted[i]);
    image[i] = sorted[i];  // fixed unless rerouted below
    if (const auto* c = std::get_if<OnCircle>(&pos)) {
      by_circle[c->circle - 1].emplace_back(c->coord, sorted[i]);
    }
  }
  auto slot = [&](ElementId id) {
    return static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), id) - sorted.begin());
  };
  for (auto& members : by_circle) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end());
    for (std::size_t i = 0; i < members.size(); ++i) {
      ElementId from = members[i].second;
      ElementId to = members[(i + 1) % members.size()].second;
      image[slot(from)] = to;
    }
  }
  return Permutation::from_image(std::move(sorted), image);
}

Permutation sample_ewens_crp(int n, double theta, SplitRng& rng) {
  if (n < 1) throw std::invalid_argument("need at least one element");
  if (!(theta >= 0.0)) {
    throw std::invalid_argument("Ewens parameter must be non-negative");
  }
  // next[x] is the cycle successor of x among the elements inserted so far.
  std::vector<ElementId> next(n);
  next[0] = 0;
  for (int t = 1; t < n; ++t) {
    double u = rng.next_unit();
    if (u * (theta + t) < theta) {
      next[t] = t;  // opens its own cycle
    } else {
      int after = static_cast<int>(rng.next_below(t));
      next[t] = next[after];
      next[after] = t;
    }
  }
  std::vector<ElementId> elements(n);
  for (int i = 0; i < n; ++i) elements[i] = i;
  return Permutation::from_image(std::move(elements), next);
}

}  // namespace virtperm
