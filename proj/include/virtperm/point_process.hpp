#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace virtperm {

// Locally finite multiset of nonzero real locations with integer
// multiplicities, plus a separately tracked multiplicity at zero which may be
// infinite (encoded as nullopt).
struct PointProcess {
  // Sorted by location, strictly increasing, no location equal to zero.
  std::vector<std::pair<double, std::int64_t>> atoms;
  std::optional<std::int64_t> zero_multiplicity;  // nullopt = infinite

  bool zero_infinite() const { return !zero_multiplicity.has_value(); }

  // Sum of all multiplicities including the one at zero; requires the zero
  // multiplicity to be finite.
  std::int64_t total_multiplicity() const;

  // Multiplicity found within |loc - location| <= 1e-9 * (1 + |location|),
  // zero if no atom is that close.  location == 0 queries the zero atom.
  std::int64_t multiplicity_near(double location) const;

  nlohmann::json to_json() const;
  static PointProcess from_json(const nlohmann::json& j);

  // Columns location,multiplicity in ascending location order; the zero atom
  // appears in its sorted slot with multiplicity "inf" when infinite.
  std::string to_csv() const;
};

// Sorts the raw atoms and merges locations that coincide within
// |a - b| <= 1e-9 * (1 + |a|); the representative location of a merged group
// is the first one in ascending order.  Raw locations must be nonzero.
PointProcess build_point_process(
    std::vector<std::pair<double, std::int64_t>> raw,
    std::optional<std::int64_t> zero_multiplicity);

}  // namespace virtperm
