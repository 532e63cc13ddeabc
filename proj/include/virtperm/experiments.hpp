#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "virtperm/lambda.hpp"
#include "virtperm/report.hpp"
#include "virtperm/test_function.hpp"

namespace virtperm {

// The requested quantity is undefined for the sampled inputs (for example,
// no two equivalent elements exist because nearly all mass is dust).
struct DegenerateInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentOptions {
  int threads = 0;             // <= 0 picks a machine-dependent count
  bool attach_samples = false;  // include raw samples in the report
};

// How experiments that sweep a size grid obtain their configurations.
enum class GridMode {
  kResamplePerSize,  // fresh configuration for every (trial, N)
  kReuseConfig,      // one configuration per trial, nested prefixes of it
};

GridMode grid_mode_from_string(const std::string& s);
std::string to_string(GridMode mode);

// Per trial: sample a configuration of n points, draw a uniformly random
// ordered pair of equivalent elements and record their arc offset divided by
// the circle perimeter.  Pass iff the pooled ratios look uniform on [0,1]
// (KS below the asymptotic 1e-3 critical value).  Throws
// DegenerateInputError when some trial finds no equivalent pair within the
// retry budget.
ExperimentReport run_delta_uniformity(const LambdaLaw& law, int n, int trials,
                                      std::uint64_t seed,
                                      const ExperimentOptions& options = {});

// Per trial and size N: compare the alpha*N-fold induced permutation step
// against the rotation flow by alpha, point by point.  p_fail(N) is the
// probability that any of the N elements lands at distance >= epsilon from
// its flowed position.  Pass iff p_fail is non-increasing along the grid and
// below 0.01 at the largest size.
ExperimentReport run_flow_convergence(const LambdaLaw& law, double alpha,
                                      const std::vector<long long>& n_grid,
                                      double epsilon, int trials,
                                      std::uint64_t seed,
                                      GridMode mode = GridMode::kResamplePerSize,
                                      const ExperimentOptions& options = {});

// Linear eigenvalue statistics of induced permutations, rescaled by N,
// against the generator spectrum of the perimeter sequence.  Pass iff the
// mean absolute error is non-increasing along the grid and ends below the
// tolerance (default 0.05 * (1 + limit)).  f must vanish at 0 whenever the
// sequence carries dust.
ExperimentReport run_eigenangle_convergence(
    const LambdaSequence& lambda, const PiecewiseLinear& f,
    const std::vector<long long>& n_grid, int trials, std::uint64_t seed,
    GridMode mode = GridMode::kResamplePerSize,
    std::optional<double> tolerance = std::nullopt,
    const ExperimentOptions& options = {});

// Chi-square check, over all n! outcomes (n <= 6), of the induced
// permutation of n points under a Poisson-Dirichlet(theta) perimeter draw
// against the exact Ewens probabilities, and the same for the
// sequential-insertion sampler; also reports the two-sample statistic
// between the two samplers.  Pass iff neither one-sample test rejects at
// level 1e-3.
ExperimentReport run_marginal_check(int n, double theta, int trials,
                                    std::uint64_t seed,
                                    const ExperimentOptions& options = {});

// Relative frequency of the tracked circle among the first N elements, with
// one designated element conditioned onto that circle.  Pass iff at the
// largest N at least 99% of trials fall within 1.5 * 3 standard deviations
// of the circle's perimeter.
ExperimentReport run_cycle_length_convergence(
    const LambdaSequence& lambda, int circle,
    const std::vector<long long>& n_grid, int trials, std::uint64_t seed,
    GridMode mode = GridMode::kReuseConfig,
    const ExperimentOptions& options = {});

// Samples configurations of random size up to max_size and checks that
// induced permutations of nested subsets I within J within K project onto
// one another exactly.  Pass iff there are zero failures.
ExperimentReport run_projection_consistency(
    const LambdaLaw& law, int configs, int max_size, std::uint64_t seed,
    const ExperimentOptions& options = {});

// Re-executes the run recorded in a report from its (name, params, seed);
// the result is bit-identical to the original for any thread count.
ExperimentReport rerun_report(const ExperimentReport& report,
                              const ExperimentOptions& options = {});

}  // namespace virtperm
