#include "virtperm/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "virtperm/format.hpp"

namespace virtperm {

namespace {

void check_elements(const std::vector<ElementId>& sorted) {
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0) {
      throw std::invalid_argument("element ids must be non-negative");
    }
    if (i > 0 && sorted[i] == sorted[i - 1]) {
      throw std::invalid_argument("duplicate element id " +
                                  std::to_string(sorted[i]));
    }
  }
}

}  // namespace

int Permutation::index_of(ElementId x) const {
  auto it = std::lower_bound(elems_.begin(), elems_.end(), x);
  if (it == elems_.end() || *it != x) return -1;
  return static_cast<int>(it - elems_.begin());
}

int Permutation::require_index(ElementId x) const {
  int i = index_of(x);
  if (i < 0) {
    throw std::invalid_argument("element " + std::to_string(x) +
                                " is not in the permutation's domain");
  }
  return i;
}

bool Permutation::contains(ElementId x) const { return index_of(x) >= 0; }

ElementId Permutation::apply(ElementId x) const {
  return elems_[img_[require_index(x)]];
}

Permutation Permutation::identity(std::vector<ElementId> elements) {
  std::sort(elements.begin(), elements.end());
  check_elements(elements);
  Permutation p;
  p.elems_ = std::move(elements);
  p.img_.resize(p.elems_.size());
  std::iota(p.img_.begin(), p.img_.end(), 0);
  return p;
}

Permutation Permutation::from_image(std::vector<ElementId> elements,
                                    const std::vector<ElementId>& image) {
  if (elements.size() != image.size()) {
    throw std::invalid_argument("element and image lists differ in length");
  }
  std::vector<std::size_t> order(elements.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return elements[a] < elements[b];
  });
  Permutation p;
  p.elems_.reserve(elements.size());
  for (std::size_t i : order) p.elems_.push_back(elements[i]);
  check_elements(p.elems_);
  p.img_.assign(elements.size(), -1);
  std::vector<char> hit(elements.size(), 0);
  for (std::size_t slot = 0; slot < order.size(); ++slot) {
    int target = p.index_of(image[order[slot]]);
    if (target < 0) {
      throw std::invalid_argument("image value " +
                                  std::to_string(image[order[slot]]) +
                                  " is outside the element set");
    }
    if (hit[target]) {
      throw std::invalid_argument("image is not a bijection: value " +
                                  std::to_string(image[order[slot]]) +
                                  " repeats");
    }
    hit[target] = 1;
    p.img_[slot] = target;
  }
  return p;
}

Permutation Permutation::from_cycles(const CycleDecomposition& cycles) {
  std::vector<ElementId> elements;
  std::vector<ElementId> image;
  for (const auto& cycle : cycles) {
    if (cycle.empty()) throw std::invalid_argument("empty cycle");
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      elements.push_back(cycle[i]);
      image.push_back(cycle[(i + 1) % cycle.size()]);
    }
  }
  return from_image(std::move(elements), image);  // rejects overlapping cycles
}

Permutation Permutation::parse_cycles(std::string_view text) {
  CycleDecomposition cycles;
  for (const auto& line : split(text, '\n')) {
    std::vector<ElementId> cycle;
    for (const auto& token : split(line, ' ')) {
      if (token.empty()) continue;
      long long id = parse_int(token);
      if (id < 0 || id > std::numeric_limits<int>::max()) {
        throw std::invalid_argument("element id out of range: " + token);
      }
      cycle.push_back(static_cast<ElementId>(id));
    }
    if (!cycle.empty()) cycles.push_back(std::move(cycle));
  }
  return from_cycles(cycles);
}

std::string Permutation::to_cycle_text() const {
  std::string out;
  for (const auto& cycle : cycle_decomposition(*this)) {
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(cycle[i]);
    }
    out += '\n';
  }
  return out;
}

CycleDecomposition cycle_decomposition(const Permutation& p) {
  const auto& elems = p.elements();
  std::vector<char> seen(elems.size(), 0);
  CycleDecomposition cycles;
  // Scanning in ascending element order makes every cycle start at its
  // minimal element and orders cycles by that element.
  for (int i = 0; i < static_cast<int>(elems.size()); ++i) {
    if (seen[i]) continue;
    std::vector<ElementId> cycle;
    int j = i;
    do {
      seen[j] = 1;
      cycle.push_back(elems[j]);
      j = p.image_index(j);
    } while (j != i);
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

Permutation project(const Permutation& p, std::span<const ElementId> keep) {
  std::vector<ElementId> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  check_elements(kept);
  for (ElementId x : kept) {
    if (!p.contains(x)) {
      throw std::invalid_argument("projection target contains " +
                                  std::to_string(x) +
                                  ", which the permutation does not act on");
    }
  }
  CycleDecomposition cycles;
  for (const auto& cycle : cycle_decomposition(p)) {
    std::vector<ElementId> filtered;
    for (ElementId x : cycle) {
      if (std::binary_search(kept.begin(), kept.end(), x)) {
        filtered.push_back(x);
      }
    }
    if (!filtered.empty()) cycles.push_back(std::move(filtered));
  }
  return Permutation::from_cycles(cycles);
}

Permutation power(const Permutation& p, long long k) {
  const auto& elems = p.elements();
  std::vector<ElementId> image(elems.size());
  for (const auto& cycle : cycle_decomposition(p)) {
    const long long len = static_cast<long long>(cycle.size());
    const std::size_t shift = static_cast<std::size_t>(((k % len) + len) % len);
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      auto it = std::lower_bound(elems.begin(), elems.end(), cycle[i]);
      image[it - elems.begin()] = cycle[(i + shift) % cycle.size()];
    }
  }
  return Permutation::from_image(elems, image);
}

Permutation conjugate(const Permutation& p, const Permutation& g) {
  if (p.elements() != g.elements()) {
    throw std::invalid_argument(
        "conjugation requires both permutations to act on the same elements");
  }
  const auto& elems = p.elements();
  const int n = static_cast<int>(elems.size());
  std::vector<ElementId> image(n);
  // (g p g^-1)(g(x)) = g(p(x)) for every x, expressed on indices.
  for (int i = 0; i < n; ++i) {
    image[g.image_index(i)] = elems[g.image_index(p.image_index(i))];
  }
  return Permutation::from_image(elems, image);
}

bool same_cycle(const Permutation& p, ElementId x, ElementId y) {
  p.apply(y);  // validates y
  ElementId cur = x;
  do {
    if (cur == y) return true;
    cur = p.apply(cur);
  } while (cur != x);
  return false;
}

long long shift_count(const Permutation& p, ElementId x, ElementId y) {
  p.apply(y);  // validates y
  long long k = 0;
  ElementId cur = x;
  do {
    if (cur == y) return k;
    cur = p.apply(cur);
    ++k;
  } while (cur != x);
  throw std::domain_error("elements " + std::to_string(x) + " and " +
                          std::to_string(y) + " lie in different cycles");
}

double ewens_log_pmf(const Permutation& p, double theta) {
  if (!(theta >= 0.0)) {
    throw std::invalid_argument("Ewens parameter must be non-negative");
  }
  const auto n_elems = static_cast<long long>(p.size());
  if (n_elems == 0) {
    throw std::invalid_argument("Ewens measure needs a non-empty domain");
  }
  const auto n_cycles = static_cast<long long>(cycle_decomposition(p).size());
  if (theta == 0.0) {
    // Limit of the formula below: mass 1/(N-1)! on each single N-cycle.
    if (n_cycles != 1) return -std::numeric_limits<double>::infinity();
    return -std::lgamma(static_cast<double>(n_elems));
  }
  double log_p = static_cast<double>(n_cycles - 1) * std::log(theta);
  for (long long j = 1; j < n_elems; ++j) {
    log_p -= std::log(theta + static_cast<double>(j));
  }
  return log_p;
}

PointProcess rescaled_eigenangles(const Permutation& p, double window) {
  if (!(window > 0.0)) {
    throw std::invalid_argument("window half-width must be positive");
  }
  const double n = static_cast<double>(p.size());
  std::vector<std::pair<double, std::int64_t>> raw;
  std::int64_t zero_mult = 0;
  for (const auto& cycle : cycle_decomposition(p)) {
    const long long len = static_cast<long long>(cycle.size());
    ++zero_mult;
    // Angles 2*pi*m/len in (-pi, pi], scaled by n.  Computing the rational
    // m*n/len first makes mathematically equal locations from different
    // cycle lengths bit-identical.
    for (long long m = 1; 2 * m <= len; ++m) {
      double loc = 2.0 * std::numbers::pi *
                   (static_cast<double>(m) * n / static_cast<double>(len));
      if (loc > window) break;
      raw.emplace_back(loc, 1);
    }
    for (long long m = 1; 2 * m <= len - 1; ++m) {
      double loc = -2.0 * std::numbers::pi *
                   (static_cast<double>(m) * n / static_cast<double>(len));
      if (loc < -window) break;
      raw.emplace_back(loc, 1);
    }
  }
  return build_point_process(std::move(raw), zero_mult);
}

std::int64_t lexicographic_rank(const Permutation& p) {
  const int n = static_cast<int>(p.size());
  if (n > 20) {
    throw std::invalid_argument("rank overflows past 20 elements");
  }
  std::int64_t factorial = 1;
  for (int i = 2; i <= n; ++i) factorial *= i;
  std::int64_t rank = 0;
  for (int i = 0; i < n; ++i) {
    factorial /= (n - i);
    int smaller = 0;
    for (int j = i + 1; j < n; ++j) {
      if (p.image_index(j) < p.image_index(i)) ++smaller;
    }
    rank += smaller * factorial;
  }
  return rank;
}

}  // namespace virtperm
