#include "virtperm/flow.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "virtperm/format.hpp"

namespace virtperm {

namespace {

void check_circle_point(const PointConfig& config, const OnCircle& c) {
  double perim = config.lambda().perimeter(c.circle);
  if (!(c.coord >= 0.0) || c.coord >= perim) {
    throw std::invalid_argument("arc coordinate " + format_double(c.coord) +
                                " outside [0," + format_double(perim) +
                                ") on circle " + std::to_string(c.circle));
  }
}

}  // namespace

double mod_interval(double x, double period) {
  if (!(period > 0.0)) {
    throw std::invalid_argument("period must be positive");
  }
  double r = x - period * std::floor(x / period);
  if (r >= period || r < 0.0) r = 0.0;  // edge of the floating-point grid
  return r;
}

double asymptotic_length(const PointConfig& config, ElementId x) {
  const Position& pos = config.at(x);
  if (const auto* c = std::get_if<OnCircle>(&pos)) {
    return config.lambda().perimeter(c->circle);
  }
  return 0.0;
}

double distance(const PointConfig& config, const Position& p,
                const Position& q) {
  const auto* cp = std::get_if<OnCircle>(&p);
  const auto* cq = std::get_if<OnCircle>(&q);
  if (cp && cq) {
    check_circle_point(config, *cp);
    check_circle_point(config, *cq);
    if (cp->circle != cq->circle) return 1.0;
    double perim = config.lambda().perimeter(cp->circle);
    double a = mod_interval(cq->coord - cp->coord, perim);
    return std::min(a, perim - a);
  }
  if (!cp && !cq) {
    return std::get<FixedAtom>(p) == std::get<FixedAtom>(q) ? 0.0 : 1.0;
  }
  return 1.0;
}

ArcClass delta_arc(const PointConfig& config, const Position& p,
                   const Position& q) {
  const auto* cp = std::get_if<OnCircle>(&p);
  const auto* cq = std::get_if<OnCircle>(&q);
  if (!cp || !cq) {
    throw std::domain_error("arc from/to a fixed point is undefined");
  }
  check_circle_point(config, *cp);
  check_circle_point(config, *cq);
  if (cp->circle != cq->circle) {
    throw std::domain_error("arc between circles " +
                            std::to_string(cp->circle) + " and " +
                            std::to_string(cq->circle) + " is undefined");
  }
  double perim = config.lambda().perimeter(cp->circle);
  return ArcClass{cp->circle, mod_interval(cq->coord - cp->coord, perim)};
}

Position flow_apply(const PointConfig& config, const Position& p,
                    double alpha) {
  if (const auto* c = std::get_if<OnCircle>(&p)) {
    check_circle_point(config, *c);
    double perim = config.lambda().perimeter(c->circle);
    return OnCircle{c->circle, mod_interval(c->coord + alpha, perim)};
  }
  return p;
}

PointProcess generator_spectrum(const LambdaSequence& lambda, double window) {
  if (!(window > 0.0)) {
    throw std::invalid_argument("window half-width must be positive");
  }
  std::vector<std::pair<double, std::int64_t>> raw;
  for (double perim : lambda.values()) {
    const double step = 2.0 * std::numbers::pi / perim;
    for (long long m = 1; static_cast<double>(m) * step <= window; ++m) {
      double loc = static_cast<double>(m) * step;
      raw.emplace_back(loc, 1);
      raw.emplace_back(-loc, 1);
    }
  }
  std::optional<std::int64_t> zero;
  if (lambda.dust() > 0.0) {
    zero = std::nullopt;  // constants on the dust give an infinite eigenspace
  } else {
    zero = lambda.circle_count();
  }
  return build_point_process(std::move(raw), zero);
}

std::complex<double> eigenfunction_value(const PointConfig& config,
                                         const Position& base,
                                         const Position& target, double a) {
  const auto* cb = std::get_if<OnCircle>(&base);
  if (!cb) {
    throw std::invalid_argument(
        "eigenfunctions are anchored at circle points");
  }
  check_circle_point(config, *cb);
  double perim = config.lambda().perimeter(cb->circle);
  double cycles = a * perim / (2.0 * std::numbers::pi);
  if (std::abs(cycles - std::round(cycles)) > 1e-9) {
    throw std::invalid_argument(
        "eigenvalue parameter " + format_double(a) +
        " is not an integer multiple of 2*pi/perimeter on circle " +
        std::to_string(cb->circle));
  }
  const auto* ct = std::get_if<OnCircle>(&target);
  if (!ct || ct->circle != cb->circle) return {0.0, 0.0};
  check_circle_point(config, *ct);
  double delta = mod_interval(ct->coord - cb->coord, perim);
  return std::polar(1.0, a * delta);
}

}  // namespace virtperm
