#include "virtperm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "virtperm/format.hpp"

namespace virtperm {

double ks_statistic(std::vector<double> samples) {
  if (samples.empty()) {
    throw std::invalid_argument("KS statistic needs at least one sample");
  }
  for (double v : samples) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("sample " + format_double(v) +
                                  " outside the unit interval");
    }
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double above = (static_cast<double>(i) + 1.0) / n - samples[i];
    double below = samples[i] - static_cast<double>(i) / n;
    sup = std::max(sup, std::max(above, below));
  }
  return sup;
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    double term = std::exp(-2.0 * j * j * x * x);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_critical_constant(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("level must lie in (0,1)");
  }
  double lo = 1e-3, hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (kolmogorov_survival(mid) > level) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ChiSquareResult chi_square(std::span<const std::int64_t> observed,
                           std::span<const double> expected_probs,
                           std::int64_t total) {
  if (observed.empty() || observed.size() != expected_probs.size()) {
    throw std::invalid_argument(
        "observed and expected categories do not match");
  }
  std::int64_t observed_total =
      std::accumulate(observed.begin(), observed.end(), std::int64_t{0});
  if (observed_total != total) {
    throw std::invalid_argument("observed counts sum to " +
                                std::to_string(observed_total) + ", not " +
                                std::to_string(total));
  }
  double prob_total =
      std::accumulate(expected_probs.begin(), expected_probs.end(), 0.0);
  if (std::abs(prob_total - 1.0) > 1e-9) {
    throw std::invalid_argument("expected probabilities sum to " +
                                format_double(prob_total));
  }
  double statistic = 0.0;
  int support = 0;  // structural zeros carry no degrees of freedom
  for (std::size_t i = 0; i < observed.size(); ++i) {
    double p = expected_probs[i];
    if (p < 0.0) {
      throw std::invalid_argument("negative expected probability");
    }
    if (p == 0.0) {
      if (observed[i] != 0) {
        throw std::invalid_argument(
            "observations in a zero-probability category");
      }
      continue;
    }
    ++support;
    double expect = static_cast<double>(total) * p;
    double diff = static_cast<double>(observed[i]) - expect;
    statistic += diff * diff / expect;
  }
  return {statistic, support - 1};
}

ChiSquareResult chi_square_two_sample(std::span<const std::int64_t> a,
                                      std::span<const std::int64_t> b) {
  if (a.empty() || a.size() != b.size()) {
    throw std::invalid_argument("samples have mismatched categories");
  }
  double na = static_cast<double>(
      std::accumulate(a.begin(), a.end(), std::int64_t{0}));
  double nb = static_cast<double>(
      std::accumulate(b.begin(), b.end(), std::int64_t{0}));
  if (na <= 0.0 || nb <= 0.0) {
    throw std::invalid_argument("both samples must be non-empty");
  }
  double statistic = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double ai = static_cast<double>(a[i]);
    double bi = static_cast<double>(b[i]);
    if (ai + bi == 0.0) continue;
    ++cells;
    double diff = ai * nb - bi * na;
    statistic += diff * diff / (na * nb * (ai + bi));
  }
  return {statistic, cells - 1};
}

double chi_square_critical_0001(int dof) {
  if (dof < 1) throw std::invalid_argument("dof must be positive");
  constexpr double z_999 = 3.090232306167813;  // standard normal quantile
  double h = 2.0 / (9.0 * static_cast<double>(dof));
  double t = 1.0 - h + z_999 * std::sqrt(h);
  return static_cast<double>(dof) * t * t * t;
}

}  // namespace virtperm
