#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace virtperm {

// Asymptotic critical constant for the Kolmogorov-Smirnov test against a
// continuous law at level 1e-3; the threshold on n samples is this divided
// by sqrt(n).
inline constexpr double kKsCritical0001 = 1.949;

// Sup-distance between the empirical CDF of the samples (values in [0,1])
// and the uniform CDF.
double ks_statistic(std::vector<double> samples);

// P(sup |empirical - true| > x / sqrt(n)) in the large-n limit:
// 2 * sum_{j>=1} (-1)^(j-1) exp(-2 j^2 x^2).
double kolmogorov_survival(double x);

// Solves kolmogorov_survival(c) == level.
double ks_critical_constant(double level);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
};

// Pearson statistic sum (observed - total*p)^2 / (total*p) over categories
// with p > 0; expected probabilities must sum to 1 within 1e-9 and observed
// counts to `total`.  A zero-probability category with observations is an
// error.  dof = (categories with p > 0) - 1.
ChiSquareResult chi_square(std::span<const std::int64_t> observed,
                           std::span<const double> expected_probs,
                           std::int64_t total);

// Two-sample Pearson statistic over shared categories; cells empty in both
// samples are skipped and dof counts the remaining cells minus one.
ChiSquareResult chi_square_two_sample(std::span<const std::int64_t> a,
                                      std::span<const std::int64_t> b);

// Upper 1e-3 quantile of the chi-square law via the Wilson-Hilferty cube
// approximation (relative error well under 1% for the dof used here).
double chi_square_critical_0001(int dof);

}  // namespace virtperm
