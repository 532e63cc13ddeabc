#include "virtperm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

#include "virtperm/flow.hpp"
#include "virtperm/format.hpp"
#include "virtperm/sampler.hpp"
#include "virtperm/stats.hpp"

namespace virtperm {

namespace {

// Substream purposes; grid indices are added to these, so keep them far
// apart.
constexpr std::uint64_t kLambdaStream = 0x1000;
constexpr std::uint64_t kConfigStream = 0x2000;
constexpr std::uint64_t kPairStream = 0x3000;
constexpr std::uint64_t kCrpStream = 0x4000;
constexpr std::uint64_t kSubsetStream = 0x5000;
constexpr std::uint64_t kConditionStream = 0x6000;
constexpr std::uint64_t kAttemptStream = 0x10000;

int resolve_threads(int requested, int trials) {
  int threads = requested;
  if (threads <= 0) {
    unsigned hc = std::thread::hardware_concurrency();
    threads = static_cast<int>(std::clamp(hc, 1u, 8u));
  }
  return std::max(1, std::min(threads, trials));
}

// Runs body(0..trials-1), possibly in parallel.  Bodies must only write to
// their own trial's slots; every aggregate is computed sequentially
// afterwards, so results never depend on the thread count.
void run_trials(int trials, int threads_requested,
                const std::function<void(int)>& body) {
  int threads = resolve_threads(threads_requested, trials);
  if (threads <= 1) {
    for (int t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  int first_error_trial = trials;
  auto worker = [&] {
    for (;;) {
      int t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= trials) return;
      try {
        body(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (t < first_error_trial) {
          first_error_trial = t;
          first_error = std::current_exception();
        }
        next.store(trials, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<ElementId> iota_ids(long long n) {
  std::vector<ElementId> ids(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) ids[i] = static_cast<ElementId>(i);
  return ids;
}

void check_grid(const std::vector<long long>& grid) {
  if (grid.empty()) throw std::invalid_argument("size grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1) throw std::invalid_argument("grid sizes must be >= 1");
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw std::invalid_argument("grid sizes must be strictly increasing");
    }
  }
}

void check_trials(int trials) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
}

std::string size_label(const std::string& stat, long long n) {
  return stat + "@N=" + std::to_string(n);
}

bool non_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) return false;
  }
  return true;
}

// Resamples the position of `id` until it lies on `circle` (rejection from
// the unconditioned law), keeping every other point fixed.
PointConfig condition_on_circle(const PointConfig& config, ElementId id,
                                int circle, SplitRng rng) {
  const LambdaSequence& lambda = config.lambda();
  lambda.perimeter(circle);  // range check
  if (const auto* c = std::get_if<OnCircle>(&config.at(id));
      c && c->circle == circle) {
    return config;
  }
  std::set<double> taken;
  for (const auto& [other, pos] : config.points()) {
    if (other == id) continue;
    if (const auto* c = std::get_if<OnCircle>(&pos)) {
      if (c->circle == circle) taken.insert(c->coord);
    }
  }
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    double u = rng.next_unit();
    int k = lambda.circle_at_mass(u);
    if (k != circle) continue;
    double coord = u - lambda.offset(k);
    double perim = lambda.perimeter(k);
    if (coord >= perim) coord = std::nextafter(perim, 0.0);
    if (coord < 0.0) coord = 0.0;
    if (taken.count(coord)) continue;  // exact collision, redraw
    return config.with_position(id, OnCircle{k, coord});
  }
  throw DegenerateInputError("could not condition element " +
                             std::to_string(id) + " onto circle " +
                             std::to_string(circle));
}

const std::string& require_param(const ExperimentReport& report,
                                 const std::string& key) {
  auto it = report.params.find(key);
  if (it == report.params.end()) {
    throw std::invalid_argument("report lacks parameter '" + key + "'");
  }
  return it->second;
}

}  // namespace

GridMode grid_mode_from_string(const std::string& s) {
  if (s == "resample") return GridMode::kResamplePerSize;
  if (s == "reuse") return GridMode::kReuseConfig;
  throw std::invalid_argument("unknown grid mode '" + s +
                              "' (expected resample or reuse)");
}

std::string to_string(GridMode mode) {
  return mode == GridMode::kResamplePerSize ? "resample" : "reuse";
}

ExperimentReport run_delta_uniformity(const LambdaLaw& law, int n, int trials,
                                      std::uint64_t seed,
                                      const ExperimentOptions& options) {
  if (n < 2) throw std::invalid_argument("need at least two elements");
  check_trials(trials);
  constexpr int kConfigAttempts = 256;

  std::vector<double> ratios(trials, 0.0);
  std::vector<char> degenerate(trials, 0);
  const auto ids = iota_ids(n);
  run_trials(trials, options.threads, [&](int t) {
    SplitRng trial_rng = SplitRng(seed).split(static_cast<std::uint64_t>(t));
    bool found = false;
    for (int attempt = 0; attempt < kConfigAttempts && !found; ++attempt) {
      SplitRng ar = trial_rng.split(kAttemptStream + attempt);
      SplitRng lambda_rng = ar.split(kLambdaStream);
      LambdaSequence lambda = draw_lambda(law, lambda_rng);
      PointConfig config = sample_positions(lambda, ids, ar.split(kConfigStream));
      // Ordered pairs of distinct elements sharing a circle.
      std::vector<std::vector<ElementId>> members(lambda.circle_count());
      for (const auto& [id, pos] : config.points()) {
        if (const auto* c = std::get_if<OnCircle>(&pos)) {
          members[c->circle - 1].push_back(id);
        }
      }
      std::uint64_t total_pairs = 0;
      for (const auto& m : members) {
        total_pairs += static_cast<std::uint64_t>(m.size()) *
                       (m.size() > 0 ? m.size() - 1 : 0);
      }
      if (total_pairs == 0) continue;  // no equivalent pair in this draw
      SplitRng pick = ar.split(kPairStream);
      std::uint64_t j = pick.next_below(total_pairs);
      for (const auto& m : members) {
        std::uint64_t here =
            static_cast<std::uint64_t>(m.size()) *
            (m.size() > 0 ? m.size() - 1 : 0);
        if (j >= here) {
          j -= here;
          continue;
        }
        std::size_t a = static_cast<std::size_t>(j / (m.size() - 1));
        std::size_t b = static_cast<std::size_t>(j % (m.size() - 1));
        if (b >= a) ++b;
        ArcClass arc = delta_arc(config, config.at(m[a]), config.at(m[b]));
        ratios[t] = arc.value / lambda.perimeter(arc.circle);
        found = true;
        break;
      }
    }
    if (!found) degenerate[t] = 1;
  });
  for (int t = 0; t < trials; ++t) {
    if (degenerate[t]) {
      throw DegenerateInputError(
          "no equivalent pair found within the retry budget (trial " +
          std::to_string(t) + "); the law is concentrated on the dust");
    }
  }

  double ks = ks_statistic(ratios);
  double critical = kKsCritical0001 / std::sqrt(static_cast<double>(trials));

  ExperimentReport report;
  report.name = "delta_uniformity";
  report.params = lambda_law_params(law);
  report.params["n"] = std::to_string(n);
  report.params["trials"] = std::to_string(trials);
  report.seed = seed;
  report.statistics = {{"ks", ks}, {"ks_critical", critical}};
  report.tolerance = critical;
  report.pass = ks < critical;
  if (options.attach_samples) {
    std::string csv = "ratio\n";
    for (double r : ratios) {
      csv += format_double(r);
      csv += '\n';
    }
    report.samples_csv = std::move(csv);
  }
  return report;
}

ExperimentReport run_flow_convergence(const LambdaLaw& law, double alpha,
                                      const std::vector<long long>& n_grid,
                                      double epsilon, int trials,
                                      std::uint64_t seed, GridMode mode,
                                      const ExperimentOptions& options) {
  check_grid(n_grid);
  check_trials(trials);
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0,1)");
  }
  const std::size_t grid_size = n_grid.size();
  const long long n_max = n_grid.back();
  std::vector<char> failed(static_cast<std::size_t>(trials) * grid_size, 0);

  run_trials(trials, options.threads, [&](int t) {
    SplitRng trial_rng = SplitRng(seed).split(static_cast<std::uint64_t>(t));
    PointConfig shared_config;
    if (mode == GridMode::kReuseConfig) {
      SplitRng lambda_rng = trial_rng.split(kLambdaStream);
      LambdaSequence lambda = draw_lambda(law, lambda_rng);
      shared_config =
          sample_positions(lambda, iota_ids(n_max), trial_rng.split(kConfigStream));
    }
    for (std::size_t gi = 0; gi < grid_size; ++gi) {
      const long long n = n_grid[gi];
      PointConfig local;
      const PointConfig* config = nullptr;
      if (mode == GridMode::kResamplePerSize) {
        SplitRng lambda_rng = trial_rng.split(kLambdaStream + gi);
        LambdaSequence lambda = draw_lambda(law, lambda_rng);
        local = sample_positions(lambda, iota_ids(n),
                                 trial_rng.split(kConfigStream + gi));
        config = &local;
      } else {
        config = &shared_config;
      }
      const auto prefix = iota_ids(n);
      Permutation sigma = induced_permutation(*config, prefix);
      const long long steps = std::llround(alpha * static_cast<double>(n));
      Permutation shifted = power(sigma, steps);
      const auto& elems = shifted.elements();
      bool fail = false;
      for (std::size_t i = 0; i < elems.size() && !fail; ++i) {
        const Position& from = config->at(elems[i]);
        const Position& to = config->at(elems[shifted.image_index(
            static_cast<int>(i))]);
        if (distance(*config, to, flow_apply(*config, from, alpha)) >=
            epsilon) {
          fail = true;
        }
      }
      failed[static_cast<std::size_t>(t) * grid_size + gi] = fail ? 1 : 0;
    }
  });

  std::vector<double> p_fail(grid_size, 0.0);
  for (std::size_t gi = 0; gi < grid_size; ++gi) {
    long long count = 0;
    for (int t = 0; t < trials; ++t) {
      count += failed[static_cast<std::size_t>(t) * grid_size + gi];
    }
    p_fail[gi] = static_cast<double>(count) / static_cast<double>(trials);
  }
  constexpr double kFailCap = 0.01;

  ExperimentReport report;
  report.name = "flow_convergence";
  report.params = lambda_law_params(law);
  report.params["alpha"] = format_double(alpha);
  report.params["epsilon"] = format_double(epsilon);
  report.params["n_grid"] = join_ints(n_grid);
  report.params["trials"] = std::to_string(trials);
  report.params["mode"] = to_string(mode);
  report.seed = seed;
  for (std::size_t gi = 0; gi < grid_size; ++gi) {
    report.statistics.emplace_back(size_label("p_fail", n_grid[gi]),
                                   p_fail[gi]);
  }
  report.tolerance = kFailCap;
  report.pass = non_increasing(p_fail) && p_fail.back() < kFailCap;
  return report;
}

ExperimentReport run_eigenangle_convergence(const LambdaSequence& lambda,
                                            const PiecewiseLinear& f,
                                            const std::vector<long long>& n_grid,
                                            int trials, std::uint64_t seed,
                                            GridMode mode,
                                            std::optional<double> tolerance,
                                            const ExperimentOptions& options) {
  check_grid(n_grid);
  check_trials(trials);
  if (f.at_zero() != 0.0 && lambda.dust() > 0.0) {
    throw std::invalid_argument(
        "f(0) != 0 with positive dust makes the limit statistic infinite");
  }
  const double window = f.support_radius();
  const double limit = linear_statistic(generator_spectrum(lambda, window), f);
  const double tol = tolerance.value_or(0.05 * (1.0 + limit));

  const std::size_t grid_size = n_grid.size();
  const long long n_max = n_grid.back();
  std::vector<double> stats(static_cast<std::size_t>(trials) * grid_size, 0.0);

  run_trials(trials, options.threads, [&](int t) {
    SplitRng trial_rng = SplitRng(seed).split(static_cast<std::uint64_t>(t));
    PointConfig shared_config;
    if (mode == GridMode::kReuseConfig) {
      shared_config = sample_positions(lambda, iota_ids(n_max),
                                       trial_rng.split(kConfigStream));
    }
    for (std::size_t gi = 0; gi < grid_size; ++gi) {
      const long long n = n_grid[gi];
      PointConfig local;
      const PointConfig* config = nullptr;
      if (mode == GridMode::kResamplePerSize) {
        local = sample_positions(lambda, iota_ids(n),
                                 trial_rng.split(kConfigStream + gi));
        config = &local;
      } else {
        config = &shared_config;
      }
      Permutation sigma = induced_permutation(*config, iota_ids(n));
      double value = linear_statistic(rescaled_eigenangles(sigma, window), f);
      stats[static_cast<std::size_t>(t) * grid_size + gi] = value;
    }
  });

  std::vector<double> mean_stat(grid_size, 0.0);
  std::vector<double> mae(grid_size, 0.0);
  for (std::size_t gi = 0; gi < grid_size; ++gi) {
    double sum = 0.0, abs_err = 0.0;
    for (int t = 0; t < trials; ++t) {
      double v = stats[static_cast<std::size_t>(t) * grid_size + gi];
      sum += v;
      abs_err += std::abs(v - limit);
    }
    mean_stat[gi] = sum / static_cast<double>(trials);
    mae[gi] = abs_err / static_cast<double>(trials);
  }

  ExperimentReport report;
  report.name = "eigenangle_convergence";
  report.params["lambda"] = join_doubles(lambda.values());
  report.params["f_knots"] = join_doubles(f.knots());
  report.params["f_values"] = join_doubles(f.values());
  report.params["n_grid"] = join_ints(n_grid);
  report.params["trials"] = std::to_string(trials);
  report.params["mode"] = to_string(mode);
  report.params["tolerance"] = format_double(tol);
  report.seed = seed;
  report.statistics.emplace_back("limit", limit);
  for (std::size_t gi = 0; gi < grid_size; ++gi) {
    report.statistics.emplace_back(size_label("mean_stat", n_grid[gi]),
                                   mean_stat[gi]);
  }
  for (std::size_t gi = 0; gi < grid_size; ++gi) {
    report.statistics.emplace_back(size_label("mae", n_grid[gi]), mae[gi]);
  }
  report.tolerance = tol;
  report.pass = non_increasing(mae) && mae.back() < tol;
  return report;
}

ExperimentReport run_marginal_check(int n, double theta, int trials,
                                    std::uint64_t seed,
                                    const ExperimentOptions& options) {
  if (n < 1 || n > 6) {
    throw std::invalid_argument(
        "marginal check enumerates n! outcomes and needs n in 1..6");
  }
  if (!(theta >= 0.0)) {
    throw std::invalid_argument("Ewens parameter must be non-negative");
  }
  check_trials(trials);

  std::int64_t n_fact = 1;
  for (int i = 2; i <= n; ++i) n_fact *= i;
  const auto ids = iota_ids(n);
  std::vector<double> probs(static_cast<std::size_t>(n_fact), 0.0);
  {
    std::vector<ElementId> image(ids.begin(), ids.end());
    std::int64_t rank = 0;
    do {
      Permutation p = Permutation::from_image(ids, image);
      double log_p = ewens_log_pmf(p, theta);
      probs[rank] = std::isinf(log_p) ? 0.0 : std::exp(log_p);
      ++rank;
    } while (std::next_permutation(image.begin(), image.end()));
  }

  std::vector<std::int64_t> rank_circle(trials, 0), rank_crp(trials, 0);
  run_trials(trials, options.threads, [&](int t) {
    SplitRng trial_rng = SplitRng(seed).split(static_cast<std::uint64_t>(t));
    LambdaSequence lambda;
    if (theta > 0.0) {
      SplitRng lambda_rng = trial_rng.split(kLambdaStream);
      lambda = sample_gem(theta, 256, 1e-6, lambda_rng);
    } else {
      lambda = LambdaSequence::from_values({1.0});  // theta -> 0 limit
    }
    PointConfig config =
        sample_positions(lambda, ids, trial_rng.split(kConfigStream));
    rank_circle[t] = lexicographic_rank(induced_permutation(config, ids));
    SplitRng crp_rng = trial_rng.split(kCrpStream);
    rank_crp[t] = lexicographic_rank(sample_ewens_crp(n, theta, crp_rng));
  });

  std::vector<std::int64_t> counts_circle(probs.size(), 0),
      counts_crp(probs.size(), 0);
  for (int t = 0; t < trials; ++t) {
    ++counts_circle[rank_circle[t]];
    ++counts_crp[rank_crp[t]];
  }
  auto circle = chi_square(counts_circle, probs, trials);
  auto crp = chi_square(counts_crp, probs, trials);
  auto cross = chi_square_two_sample(counts_circle, counts_crp);
  // n == 1 leaves no freedom; both statistics are exactly zero then.
  double critical =
      circle.dof > 0 ? chi_square_critical_0001(circle.dof) : 0.0;

  ExperimentReport report;
  report.name = "marginal_check";
  report.params["n"] = std::to_string(n);
  report.params["theta"] = format_double(theta);
  report.params["trials"] = std::to_string(trials);
  report.seed = seed;
  report.statistics = {
      {"chi_square_circle", circle.statistic},
      {"chi_square_crp", crp.statistic},
      {"chi_square_two_sample", cross.statistic},
      {"dof", static_cast<double>(circle.dof)},
      {"critical", critical},
  };
  report.tolerance = critical;
  report.pass =
      circle.statistic <= critical && crp.statistic <= critical;
  return report;
}

ExperimentReport run_cycle_length_convergence(const LambdaSequence& lambda,
                                              int circle,
                                              const std::vector<long long>& n_grid,
                                              int trials, std::uint64_t seed,
                                              GridMode mode,
                                              const ExperimentOptions& options) {
  if (lambda.circle_count() < 1) {
    throw std::invalid_argument("need at least one circle to track");
  }
  const double perim = lambda.perimeter(circle);  // validates index
  check_grid(n_grid);
  check_trials(trials);

  const std::size_t grid_size = n_grid.size();
  const long long n_max = n_grid.back();
  std::vector<double> ratios(static_cast<std::size_t>(trials) * grid_size,
                             0.0);

  auto prefix_ratios = [&](const PointConfig& config, std::size_t upto,
                           int t) {
    // config holds ids 0..n-1; walk them in order, checkpointing at grid
    // sizes.  upto limits how many grid entries this configuration serves.
    long long on_circle = 0;
    std::size_t gi = 0;
    for (const auto& [id, pos] : config.points()) {
      if (const auto* c = std::get_if<OnCircle>(&pos)) {
        if (c->circle == circle) ++on_circle;
      }
      while (gi < upto && static_cast<long long>(id) + 1 == n_grid[gi]) {
        ratios[static_cast<std::size_t>(t) * grid_size + gi] =
            static_cast<double>(on_circle) / static_cast<double>(n_grid[gi]);
        ++gi;
      }
    }
  };

  run_trials(trials, options.threads, [&](int t) {
    SplitRng trial_rng = SplitRng(seed).split(static_cast<std::uint64_t>(t));
    if (mode == GridMode::kReuseConfig) {
      PointConfig config = sample_positions(lambda, iota_ids(n_max),
                                            trial_rng.split(kConfigStream));
      config = condition_on_circle(config, 0, circle,
                                   trial_rng.split(kConditionStream));
      prefix_ratios(config, grid_size, t);
    } else {
      for (std::size_t gi = 0; gi < grid_size; ++gi) {
        PointConfig config =
            sample_positions(lambda, iota_ids(n_grid[gi]),
                             trial_rng.split(kConfigStream + gi));
        config = condition_on_circle(config, 0, circle,
                                     trial_rng.split(kConditionStream + gi));
        long long on_circle = 0;
        for (const auto& [id, pos] : config.points()) {
          if (const auto* c = std::get_if<OnCircle>(&pos)) {
            if (c->circle == circle) ++on_circle;
          }
        }
        ratios[static_cast<std::size_t>(t) * grid_size + gi] =
            static_cast<double>(on_circle) / static_cast<double>(n_grid[gi]);
      }
    }
  });

  std::vector<double> mean_abs_err(grid_size, 0.0);
  for (std::size_t gi = 0; gi < grid_size; ++gi) {
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
      sum += std::abs(ratios[static_cast<std::size_t>(t) * grid_size + gi] -
                      perim);
    }
    mean_abs_err[gi] = sum / static_cast<double>(trials);
  }
  const double slack =
      1.5 * 3.0 *
      std::sqrt(perim * (1.0 - perim) / static_cast<double>(n_max));
  long long within_slack = 0, within_005 = 0;
  for (int t = 0; t < trials; ++t) {
    double err = std::abs(
        ratios[static_cast<std::size_t>(t) * grid_size + grid_size - 1] -
        perim);
    if (err <= slack) ++within_slack;
    if (err < 0.05) ++within_005;
  }
  double frac_slack =
      static_cast<double>(within_slack) / static_cast<double>(trials);
  double frac_005 =
      static_cast<double>(within_005) / static_cast<double>(trials);

  ExperimentReport report;
  report.name = "cycle_length_convergence";
  report.params["lambda"] = join_doubles(lambda.values());
  report.params["circle"] = std::to_string(circle);
  report.params["n_grid"] = join_ints(n_grid);
  report.params["trials"] = std::to_string(trials);
  report.params["mode"] = to_string(mode);
  report.seed = seed;
  for (std::size_t gi = 0; gi < grid_size; ++gi) {
    report.statistics.emplace_back(size_label("mean_abs_err", n_grid[gi]),
                                   mean_abs_err[gi]);
  }
  report.statistics.emplace_back("slack", slack);
  report.statistics.emplace_back("frac_within_slack", frac_slack);
  report.statistics.emplace_back("frac_within_0.05", frac_005);
  report.tolerance = 0.99;
  report.pass = frac_slack >= 0.99;
  return report;
}

ExperimentReport run_projection_consistency(const LambdaLaw& law, int configs,
                                            int max_size, std::uint64_t seed,
                                            const ExperimentOptions& options) {
  if (configs < 1) throw std::invalid_argument("need at least one config");
  if (max_size < 3) {
    throw std::invalid_argument("need room for a nested triple (max size 3+)");
  }

  std::vector<char> failed(configs, 0);
  run_trials(configs, options.threads, [&](int c) {
    SplitRng rng = SplitRng(seed).split(static_cast<std::uint64_t>(c));
    SplitRng lambda_rng = rng.split(kLambdaStream);
    LambdaSequence lambda = draw_lambda(law, lambda_rng);
    SplitRng size_rng = rng.split(kSubsetStream);
    long long size =
        3 + static_cast<long long>(size_rng.next_below(max_size - 2));
    const auto all = iota_ids(size);
    PointConfig config =
        sample_positions(lambda, all, rng.split(kConfigStream));
    std::vector<ElementId> mid, inner;
    for (ElementId id : all) {
      if (size_rng.next_unit() < 0.7) mid.push_back(id);
    }
    for (ElementId id : mid) {
      if (size_rng.next_unit() < 0.7) inner.push_back(id);
    }
    Permutation outer_perm = induced_permutation(config, all);
    Permutation mid_perm = induced_permutation(config, mid);
    Permutation inner_perm = induced_permutation(config, inner);
    bool ok = project(outer_perm, mid) == mid_perm &&
              project(mid_perm, inner) == inner_perm &&
              project(outer_perm, inner) == inner_perm;
    failed[c] = ok ? 0 : 1;
  });

  long long failures = 0;
  for (char f : failed) failures += f;

  ExperimentReport report;
  report.name = "projection_consistency";
  report.params = lambda_law_params(law);
  report.params["configs"] = std::to_string(configs);
  report.params["max_size"] = std::to_string(max_size);
  report.seed = seed;
  report.statistics = {
      {"configs", static_cast<double>(configs)},
      {"failures", static_cast<double>(failures)},
  };
  report.tolerance = 0.0;
  report.pass = failures == 0;
  return report;
}

ExperimentReport rerun_report(const ExperimentReport& report,
                              const ExperimentOptions& options) {
  ExperimentOptions opts = options;
  opts.attach_samples = report.samples_csv.has_value();
  const auto& params = report.params;
  auto int_param = [&](const std::string& key) {
    return parse_int(require_param(report, key));
  };
  if (report.name == "delta_uniformity") {
    return run_delta_uniformity(lambda_law_from_params(params),
                                static_cast<int>(int_param("n")),
                                static_cast<int>(int_param("trials")),
                                report.seed, opts);
  }
  if (report.name == "flow_convergence") {
    return run_flow_convergence(
        lambda_law_from_params(params),
        parse_double(require_param(report, "alpha")),
        parse_int_list(require_param(report, "n_grid")),
        parse_double(require_param(report, "epsilon")),
        static_cast<int>(int_param("trials")), report.seed,
        grid_mode_from_string(require_param(report, "mode")), opts);
  }
  if (report.name == "eigenangle_convergence") {
    PiecewiseLinear f(parse_double_list(require_param(report, "f_knots")),
                      parse_double_list(require_param(report, "f_values")));
    return run_eigenangle_convergence(
        LambdaSequence::from_values(
            parse_double_list(require_param(report, "lambda"))),
        f, parse_int_list(require_param(report, "n_grid")),
        static_cast<int>(int_param("trials")), report.seed,
        grid_mode_from_string(require_param(report, "mode")),
        parse_double(require_param(report, "tolerance")), opts);
  }
  if (report.name == "marginal_check") {
    return run_marginal_check(static_cast<int>(int_param("n")),
                              parse_double(require_param(report, "theta")),
                              static_cast<int>(int_param("trials")),
                              report.seed, opts);
  }
  if (report.name == "cycle_length_convergence") {
    return run_cycle_length_convergence(
        LambdaSequence::from_values(
            parse_double_list(require_param(report, "lambda"))),
        static_cast<int>(int_param("circle")),
        parse_int_list(require_param(report, "n_grid")),
        static_cast<int>(int_param("trials")), report.seed,
        grid_mode_from_string(require_param(report, "mode")), opts);
  }
  if (report.name == "projection_consistency") {
    return run_projection_consistency(lambda_law_from_params(params),
                                      static_cast<int>(int_param("configs")),
                                      static_cast<int>(int_param("max_size")),
                                      report.seed, opts);
  }
  throw std::invalid_argument("unknown experiment '" + report.name + "'");
}

}  // namespace virtperm
