#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "virtperm/rng.hpp"

namespace virtperm {

// Non-increasing circle perimeters in (0,1] with total mass at most 1; the
// remainder ("dust") is the length of the segment of fixed points.
class LambdaSequence {
 public:
  LambdaSequence() = default;  // no circles, dust 1

  // Validates, sorts descending and computes the dust.  Rejects values
  // outside (0,1] and totals above 1 + 1e-12; a total within 1e-12 of 1 is
  // clamped to dust 0.
  static LambdaSequence from_values(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  double dust() const { return dust_; }
  int circle_count() const { return static_cast<int>(values_.size()); }
  double total_mass() const { return cum_.empty() ? 0.0 : cum_.back(); }

  // 1-based circle index.
  double perimeter(int k) const;
  // Start of circle k when the circles are laid end to end from 0.
  double offset(int k) const;
  // Circle containing mass coordinate u in [0, total_mass), or 0 when u
  // falls in the dust.
  int circle_at_mass(double u) const;

  bool operator==(const LambdaSequence& other) const = default;

 private:
  std::vector<double> values_;
  std::vector<double> cum_;  // cum_[i] = values_[0] + ... + values_[i]
  double dust_ = 1.0;
};

// Stick-breaking (GEM) draw from the Poisson-Dirichlet family: fractions are
// Beta(1, theta); generation stops after `truncation` sticks or once the
// remaining mass drops below `tail_epsilon`, and the remainder is folded
// into the dust.  Values are returned sorted descending.
LambdaSequence sample_gem(double theta, int truncation, double tail_epsilon,
                          SplitRng& rng);

struct PoissonDirichletLaw {
  double theta = 1.0;
  int truncation = 256;
  double tail_epsilon = 1e-6;

  bool operator==(const PoissonDirichletLaw& other) const = default;
};

// Either a fixed sequence or a Poisson-Dirichlet draw per use.
using LambdaLaw = std::variant<LambdaSequence, PoissonDirichletLaw>;

LambdaSequence draw_lambda(const LambdaLaw& law, SplitRng& rng);

// Flat string encoding used in experiment reports and for replay: a fixed
// law stores "lambda"; a Poisson-Dirichlet law stores "theta", "truncation"
// and "tail_epsilon".
std::map<std::string, std::string> lambda_law_params(const LambdaLaw& law);
LambdaLaw lambda_law_from_params(
    const std::map<std::string, std::string>& params);
std::string describe_lambda_law(const LambdaLaw& law);

}  // namespace virtperm
