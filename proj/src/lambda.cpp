#include "virtperm/lambda.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "virtperm/format.hpp"

namespace virtperm {

LambdaSequence LambdaSequence::from_values(std::vector<double> values) {
  for (double v : values) {
    if (!(v > 0.0)) {
      throw std::invalid_argument("circle perimeter must be positive, got " +
                                  format_double(v));
    }
    if (v > 1.0) {
      throw std::invalid_argument("circle perimeter must be at most 1, got " +
                                  format_double(v));
    }
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  LambdaSequence seq;
  seq.values_ = std::move(values);
  seq.cum_.reserve(seq.values_.size());
  double sum = 0.0;
  for (double v : seq.values_) {
    sum += v;
    seq.cum_.push_back(sum);
  }
  if (sum > 1.0 + 1e-12) {
    throw std::invalid_argument("circle perimeters sum to " +
                                format_double(sum) + " > 1");
  }
  seq.dust_ = 1.0 - sum;
  if (seq.dust_ < 1e-12) seq.dust_ = 0.0;
  return seq;
}

double LambdaSequence::perimeter(int k) const {
  if (k < 1 || k > circle_count()) {
    throw std::invalid_argument("circle index " + std::to_string(k) +
                                " out of range 1.." +
                                std::to_string(circle_count()));
  }
  return values_[k - 1];
}

double LambdaSequence::offset(int k) const {
  perimeter(k);  // range check
  return k == 1 ? 0.0 : cum_[k - 2];
}

int LambdaSequence::circle_at_mass(double u) const {
  if (cum_.empty() || u >= cum_.back()) return 0;
  auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  return static_cast<int>(it - cum_.begin()) + 1;
}

LambdaSequence sample_gem(double theta, int truncation, double tail_epsilon,
                          SplitRng& rng) {
  if (!(theta > 0.0)) {
    throw std::invalid_argument("stick-breaking needs theta > 0");
  }
  if (truncation < 1) {
    throw std::invalid_argument("truncation must be at least 1");
  }
  if (!(tail_epsilon > 0.0 && tail_epsilon < 1.0)) {
    throw std::invalid_argument("tail epsilon must lie in (0,1)");
  }
  std::vector<double> sticks;
  double remaining = 1.0;
  for (int i = 0; i < truncation && remaining >= tail_epsilon; ++i) {
    // Beta(1, theta) by inversion.
    double u = rng.next_unit();
    double w = -std::expm1(std::log1p(-u) / theta);
    double stick = remaining * w;
    if (stick > 0.0) sticks.push_back(stick);
    remaining *= (1.0 - w);
  }
  return LambdaSequence::from_values(std::move(sticks));
}

LambdaSequence draw_lambda(const LambdaLaw& law, SplitRng& rng) {
  if (const auto* fixed = std::get_if<LambdaSequence>(&law)) return *fixed;
  const auto& pd = std::get<PoissonDirichletLaw>(law);
  return sample_gem(pd.theta, pd.truncation, pd.tail_epsilon, rng);
}

std::map<std::string, std::string> lambda_law_params(const LambdaLaw& law) {
  std::map<std::string, std::string> params;
  if (const auto* fixed = std::get_if<LambdaSequence>(&law)) {
    params["lambda"] = join_doubles(fixed->values());
  } else {
    const auto& pd = std::get<PoissonDirichletLaw>(law);
    params["theta"] = format_double(pd.theta);
    params["truncation"] = std::to_string(pd.truncation);
    params["tail_epsilon"] = format_double(pd.tail_epsilon);
  }
  return params;
}

LambdaLaw lambda_law_from_params(
    const std::map<std::string, std::string>& params) {
  if (auto it = params.find("lambda"); it != params.end()) {
    return LambdaSequence::from_values(parse_double_list(it->second));
  }
  if (auto it = params.find("theta"); it != params.end()) {
    PoissonDirichletLaw pd;
    pd.theta = parse_double(it->second);
    if (auto t = params.find("truncation"); t != params.end()) {
      pd.truncation = static_cast<int>(parse_int(t->second));
    }
    if (auto e = params.find("tail_epsilon"); e != params.end()) {
      pd.tail_epsilon = parse_double(e->second);
    }
    return pd;
  }
  throw std::invalid_argument("parameters name neither lambda nor theta");
}

std::string describe_lambda_law(const LambdaLaw& law) {
  if (const auto* fixed = std::get_if<LambdaSequence>(&law)) {
    return "fixed(" + join_doubles(fixed->values()) + ")";
  }
  const auto& pd = std::get<PoissonDirichletLaw>(law);
  return "poisson-dirichlet(theta=" + format_double(pd.theta) + ")";
}

}  // namespace virtperm
