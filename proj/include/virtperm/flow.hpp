#pragma once

#include <complex>

#include "virtperm/point_process.hpp"
#include "virtperm/sampler.hpp"

namespace virtperm {

// Oriented arc length from one circle point to another, reduced modulo the
// perimeter of their common circle.
struct ArcClass {
  int circle = 0;
  double value = 0.0;  // in [0, perimeter)

  bool operator==(const ArcClass& other) const = default;
};

// x modulo period, in [0, period).
double mod_interval(double x, double period);

// Perimeter of the circle carrying element x, or 0 for a fixed atom.  This
// is the limiting relative cycle length of x in large induced permutations.
double asymptotic_length(const PointConfig& config, ElementId x);

// Metric of the circle space: arc distance min(|a|, perimeter - |a|) on a
// common circle, 0 between identical fixed atoms, 1 otherwise.
double distance(const PointConfig& config, const Position& p,
                const Position& q);

// Counterclockwise arc from p to q; both must lie on the same circle,
// otherwise std::domain_error (callers branch on equivalence with it).
ArcClass delta_arc(const PointConfig& config, const Position& p,
                   const Position& q);

// Rotation by alpha on every circle, identity on fixed atoms.
Position flow_apply(const PointConfig& config, const Position& p,
                    double alpha);

// Spectrum of i times the rotation-flow generator, restricted to
// [-window, window]: atoms at the nonzero multiples of 2*pi/perimeter(k)
// with multiplicity the number of circles sharing that value; the
// multiplicity at zero is the circle count when there is no dust and
// infinite otherwise.
PointProcess generator_spectrum(const LambdaSequence& lambda, double window);

// Value at `target` of the generator eigenfunction anchored at `base`
// (which must be a circle point) for eigenvalue parameter a:
// exp(i*a*delta(base,target)) on base's circle and 0 elsewhere.
// a*perimeter/(2*pi) must be within 1e-9 of an integer.
std::complex<double> eigenfunction_value(const PointConfig& config,
                                         const Position& base,
                                         const Position& target, double a);

}  // namespace virtperm
