#pragma once

#include <map>
#include <span>
#include <variant>
#include <vector>

#include "json.hpp"
#include "virtperm/lambda.hpp"
#include "virtperm/permutation.hpp"
#include "virtperm/rng.hpp"

namespace virtperm {

// A point on circle `circle` (1-based) at arc coordinate coord in
// [0, perimeter).
struct OnCircle {
  int circle = 0;
  double coord = 0.0;

  bool operator==(const OnCircle& other) const = default;
};

// A point on the fixed-point segment; atoms with distinct ids are distinct
// points.
struct FixedAtom {
  ElementId atom = 0;

  bool operator==(const FixedAtom& other) const = default;
};

using Position = std::variant<OnCircle, FixedAtom>;

// Finitely many labelled points of the circle space, all at pairwise
// distinct positions, together with the perimeter sequence they live on.
class PointConfig {
 public:
  PointConfig() = default;
  PointConfig(LambdaSequence lambda, std::map<ElementId, Position> points);

  const LambdaSequence& lambda() const { return lambda_; }
  const std::map<ElementId, Position>& points() const { return points_; }
  bool contains(ElementId id) const { return points_.count(id) > 0; }
  const Position& at(ElementId id) const;
  std::vector<ElementId> ids() const;

  // Returns a copy with the position of `id` replaced; the new position must
  // keep all positions distinct.
  PointConfig with_position(ElementId id, const Position& pos) const;

  nlohmann::json to_json() const;
  static PointConfig from_json(const nlohmann::json& j);

 private:
  LambdaSequence lambda_;
  std::map<ElementId, Position> points_;
};

// Drops each id independently onto the circles (circle k with probability
// perimeter(k), uniform arc coordinate) or, with the dust probability, onto
// its own fixed atom.  Every id draws from its own substream of `rng`, so
// the result does not depend on evaluation order; exact coordinate
// collisions are resolved by redrawing the larger id.
PointConfig sample_positions(const LambdaSequence& lambda,
                             std::span<const ElementId> ids,
                             const SplitRng& rng);

// The permutation of `subset` that maps each circle point to the
// counterclockwise-next subset point on its circle (coordinates increase
// counterclockwise, wrapping at the perimeter).  Points alone on their
// circle and fixed atoms map to themselves.
Permutation induced_permutation(const PointConfig& config,
                                std::span<const ElementId> subset);

// Sequential-insertion (Chinese restaurant) sampler for the Ewens measure
// with parameter theta on permutations of {0,...,n-1}: the element joining a
// table of t sitters opens a new cycle with probability theta/(theta+t) and
// otherwise sits immediately after a uniformly chosen earlier element.
Permutation sample_ewens_crp(int n, double theta, SplitRng& rng);

}  // namespace virtperm
