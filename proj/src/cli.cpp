#include "virtperm/cli.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "virtperm/experiments.hpp"
#include "virtperm/flow.hpp"
#include "virtperm/format.hpp"
#include "virtperm/lambda.hpp"
#include "virtperm/permutation.hpp"
#include "virtperm/point_process.hpp"
#include "virtperm/report.hpp"
#include "virtperm/rng.hpp"
#include "virtperm/sampler.hpp"
#include "virtperm/test_function.hpp"

namespace virtperm {
namespace {

constexpr std::uint64_t kDefaultSeed = 0xC1C1E5;
constexpr double kPi = 3.141592653589793238462643383279502884;

// Substream labels for the sampling utilities, distinct from the labels the
// experiment runners use so a utility draw never aliases a trial stream.
constexpr std::uint64_t kCliLambdaStream = 1;
constexpr std::uint64_t kCliPointStream = 2;

struct LawFlags {
  std::optional<double> theta;
  std::string lambda_csv;
  int truncation = 256;
  double tail_epsilon = 1e-6;
};

// Adds --lambda (and, unless fixed_only, the --theta family) to a
// subcommand.  The two ways of choosing the cycle-fraction law are mutually
// exclusive.
void add_law_flags(CLI::App* cmd, LawFlags& f, bool fixed_only = false) {
  auto* lam = cmd->add_option(
      "--lambda", f.lambda_csv,
      "fixed cycle-fraction sequence, comma separated (e.g. 0.5,0.3,0.2)");
  if (fixed_only) {
    lam->required();
    return;
  }
  auto* th = cmd->add_option("--theta", f.theta,
                             "Poisson-Dirichlet concentration; redraws the "
                             "fraction sequence each trial");
  th->excludes(lam);
  lam->excludes(th);
  cmd->add_option("--truncation", f.truncation,
                  "stick-breaking truncation depth")
      ->capture_default_str();
  cmd->add_option("--tail-epsilon", f.tail_epsilon,
                  "fold the tail into dust once its mass drops below this")
      ->capture_default_str();
}

LambdaLaw law_from_flags(const LawFlags& f) {
  if (!f.lambda_csv.empty()) {
    return LambdaSequence::from_values(parse_double_list(f.lambda_csv));
  }
  if (!f.theta.has_value()) {
    throw std::invalid_argument("exactly one of --theta or --lambda is required");
  }
  PoissonDirichletLaw law;
  law.theta = *f.theta;
  law.truncation = f.truncation;
  law.tail_epsilon = f.tail_epsilon;
  return law;
}

struct OutputFlags {
  std::string out_path;  // empty writes to stdout
  std::string format = "json";
  std::string plot_path;
};

void add_output_flags(CLI::App* cmd, OutputFlags& f, bool with_csv,
                      bool with_plot) {
  cmd->add_option("--out", f.out_path,
                  "write here instead of standard output");
  if (with_csv) {
    cmd->add_option("--format", f.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
  }
  if (with_plot) {
    cmd->add_option("--plot", f.plot_path,
                    "also render the per-size statistics as an SVG file");
  }
}

void emit(const OutputFlags& o, const std::string& text) {
  if (o.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.out_path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + o.out_path);
  }
  out << text;
}

int finish_report(const ExperimentReport& report, const OutputFlags& o) {
  emit(o, o.format == "csv" ? report.to_csv() : report.to_json_string());
  if (!o.plot_path.empty()) {
    render_plot(report, o.plot_path);
  }
  return report.pass ? 0 : 2;
}

std::vector<ElementId> first_ids(long long n) {
  if (n < 1) {
    throw std::invalid_argument("need at least one point");
  }
  std::vector<ElementId> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

// Every JSON the utilities emit carries this stamp so `replay` can re-execute
// the run from the file alone and compare byte for byte.
nlohmann::json run_stamp(const std::string& name,
                         const std::map<std::string, std::string>& params,
                         std::uint64_t seed) {
  nlohmann::json j;
  j["name"] = name;
  j["params"] = params;
  j["seed"] = seed;
  return j;
}

PointConfig sampled_config(const LambdaLaw& law, long long n,
                           std::uint64_t seed) {
  SplitRng root(seed);
  SplitRng lam_rng = root.split(kCliLambdaStream);
  LambdaSequence lambda = draw_lambda(law, lam_rng);
  return sample_positions(lambda, first_ids(n), root.split(kCliPointStream));
}

nlohmann::json exec_sample(const std::map<std::string, std::string>& params,
                           std::uint64_t seed) {
  LambdaLaw law = lambda_law_from_params(params);
  long long n = parse_int(params.at("n"));
  nlohmann::json j = sampled_config(law, n, seed).to_json();
  j["run"] = run_stamp("sample", params, seed);
  return j;
}

nlohmann::json exec_spectrum(const std::map<std::string, std::string>& params,
                             std::uint64_t seed) {
  LambdaSequence lambda =
      LambdaSequence::from_values(parse_double_list(params.at("lambda")));
  double window = parse_double(params.at("window"));
  nlohmann::json j = generator_spectrum(lambda, window).to_json();
  j["run"] = run_stamp("spectrum", params, seed);
  return j;
}

nlohmann::json exec_eigenangles(
    const std::map<std::string, std::string>& params, std::uint64_t seed) {
  double window = parse_double(params.at("window"));
  Permutation perm;
  if (auto it = params.find("perm"); it != params.end()) {
    perm = Permutation::parse_cycles(it->second);
  } else {
    LambdaLaw law = lambda_law_from_params(params);
    long long n = parse_int(params.at("n"));
    PointConfig config = sampled_config(law, n, seed);
    perm = induced_permutation(config, config.ids());
  }
  nlohmann::json j = rescaled_eigenangles(perm, window).to_json();
  j["run"] = run_stamp("eigenangles", params, seed);
  return j;
}

nlohmann::json exec_named(const std::string& name,
                          const std::map<std::string, std::string>& params,
                          std::uint64_t seed) {
  if (name == "sample") return exec_sample(params, seed);
  if (name == "spectrum") return exec_spectrum(params, seed);
  if (name == "eigenangles") return exec_eigenangles(params, seed);
  throw std::invalid_argument("unknown run name: " + name);
}

int do_replay(const std::string& path, int threads, const OutputFlags& o) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open replay file: " + path);
  }
  nlohmann::json original = nlohmann::json::parse(in);

  if (original.contains("statistics")) {
    ExperimentReport report = ExperimentReport::from_json(original);
    ExperimentOptions options;
    options.threads = threads;
    ExperimentReport rerun = rerun_report(report, options);
    if (rerun.to_json().dump() != original.dump()) {
      std::cerr << "replay mismatch: " << path << '\n';
      return 1;
    }
    emit(o, rerun.to_json_string());
    return rerun.pass ? 0 : 2;
  }

  if (original.contains("run")) {
    const nlohmann::json& stamp = original.at("run");
    nlohmann::json rebuilt = exec_named(
        stamp.at("name").get<std::string>(),
        stamp.at("params").get<std::map<std::string, std::string>>(),
        stamp.at("seed").get<std::uint64_t>());
    if (rebuilt.dump() != original.dump()) {
      std::cerr << "replay mismatch: " << path << '\n';
      return 1;
    }
    emit(o, rebuilt.dump(2) + "\n");
    return 0;
  }

  throw std::invalid_argument("not a replayable output: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{
      "virtual permutations: circle samplers, flow spectra and convergence "
      "experiments"};
  app.require_subcommand(0, 1);

  std::string replay_path;
  app.add_option("--replay", replay_path,
                 "re-execute a previously written JSON output and verify it "
                 "reproduces byte for byte");
  int replay_threads = 0;
  app.add_option("--threads", replay_threads,
                 "worker threads for --replay (0 = auto)")
      ->capture_default_str();

  // sample: one point configuration.
  auto* sample_cmd = app.add_subcommand(
      "sample", "draw a labelled point configuration and print it as JSON");
  LawFlags sample_law;
  add_law_flags(sample_cmd, sample_law);
  long long sample_n = 16;
  sample_cmd->add_option("--n", sample_n, "number of labelled points")
      ->capture_default_str();
  std::uint64_t sample_seed = kDefaultSeed;
  sample_cmd->add_option("--seed", sample_seed, "root seed")
      ->capture_default_str();
  OutputFlags sample_out;
  add_output_flags(sample_cmd, sample_out, false, false);
  std::string sample_perm_out;
  sample_cmd->add_option(
      "--perm-out", sample_perm_out,
      "also write the induced permutation of all points as cycle text");

  // spectrum: closed-form generator spectrum.
  auto* spectrum_cmd = app.add_subcommand(
      "spectrum",
      "generator spectrum of the rotation flow for a fixed fraction sequence");
  LawFlags spectrum_law;
  add_law_flags(spectrum_cmd, spectrum_law, /*fixed_only=*/true);
  double spectrum_window = 50.0;
  spectrum_cmd
      ->add_option("--window", spectrum_window,
                   "keep eigenvalue locations with |x| <= window")
      ->capture_default_str();
  OutputFlags spectrum_out;
  add_output_flags(spectrum_cmd, spectrum_out, true, false);

  // eigenangles: rescaled eigenangle process of one permutation.
  auto* eig_cmd = app.add_subcommand(
      "eigenangles",
      "rescaled eigenangle point process of a permutation (sampled or from "
      "a file)");
  std::string eig_perm_file;
  eig_cmd->add_option("--perm-file", eig_perm_file,
                      "read the permutation from a cycle-text file instead "
                      "of sampling one");
  LawFlags eig_law;
  add_law_flags(eig_cmd, eig_law);
  long long eig_n = 100;
  eig_cmd->add_option("--n", eig_n, "points to sample when no file is given")
      ->capture_default_str();
  std::optional<double> eig_window;
  eig_cmd->add_option("--window", eig_window,
                      "keep locations with |x| <= window (default pi * n)");
  std::uint64_t eig_seed = kDefaultSeed;
  eig_cmd->add_option("--seed", eig_seed, "root seed")->capture_default_str();
  OutputFlags eig_out;
  add_output_flags(eig_cmd, eig_out, true, false);

  // marginal: exact finite-marginal check.
  auto* marginal_cmd = app.add_subcommand(
      "marginal",
      "chi-square check of n-point marginals against the exchangeable cycle "
      "law, for both samplers");
  long long marginal_n = 4;
  marginal_cmd->add_option("--n", marginal_n, "marginal size (1..6)")
      ->capture_default_str();
  double marginal_theta = 1.0;
  marginal_cmd->add_option("--theta", marginal_theta, "concentration (>= 0)")
      ->capture_default_str();
  long long marginal_trials = 20000;
  marginal_cmd->add_option("--trials", marginal_trials, "sampled permutations")
      ->capture_default_str();
  std::uint64_t marginal_seed = kDefaultSeed;
  marginal_cmd->add_option("--seed", marginal_seed, "root seed")
      ->capture_default_str();
  int marginal_threads = 0;
  marginal_cmd->add_option("--threads", marginal_threads,
                           "worker threads (0 = auto)")
      ->capture_default_str();
  OutputFlags marginal_out;
  add_output_flags(marginal_cmd, marginal_out, true, false);

  // uniformity: KS test of arc-offset ratios.
  auto* uni_cmd = app.add_subcommand(
      "uniformity",
      "KS test that arc offsets between equivalent points are uniform over "
      "the cycle length");
  LawFlags uni_law;
  add_law_flags(uni_cmd, uni_law);
  long long uni_n = 64;
  uni_cmd->add_option("--n", uni_n, "points per configuration")
      ->capture_default_str();
  long long uni_trials = 20000;
  uni_cmd->add_option("--trials", uni_trials, "configurations to draw")
      ->capture_default_str();
  std::uint64_t uni_seed = kDefaultSeed;
  uni_cmd->add_option("--seed", uni_seed, "root seed")->capture_default_str();
  int uni_threads = 0;
  uni_cmd->add_option("--threads", uni_threads, "worker threads (0 = auto)")
      ->capture_default_str();
  bool uni_samples = false;
  uni_cmd->add_flag("--samples", uni_samples,
                    "attach the raw offset ratios to the report");
  OutputFlags uni_out;
  add_output_flags(uni_cmd, uni_out, true, false);

  // cycle-converge: relative cycle length along a size grid.
  auto* cyc_cmd = app.add_subcommand(
      "cycle-converge",
      "convergence of the tracked circle's relative cycle length to its "
      "fraction");
  LawFlags cyc_law;
  add_law_flags(cyc_cmd, cyc_law, /*fixed_only=*/true);
  int cyc_circle = 1;
  cyc_cmd->add_option("--circle", cyc_circle, "tracked circle (1-based)")
      ->capture_default_str();
  std::string cyc_grid = "100,1000,10000";
  cyc_cmd->add_option("--n-grid", cyc_grid, "comma-separated sizes")
      ->capture_default_str();
  long long cyc_trials = 200;
  cyc_cmd->add_option("--trials", cyc_trials, "trials per size")
      ->capture_default_str();
  std::string cyc_mode = "reuse";
  cyc_cmd->add_option("--mode", cyc_mode, "configuration reuse across sizes")
      ->check(CLI::IsMember({"reuse", "resample"}))
      ->capture_default_str();
  std::uint64_t cyc_seed = kDefaultSeed;
  cyc_cmd->add_option("--seed", cyc_seed, "root seed")->capture_default_str();
  int cyc_threads = 0;
  cyc_cmd->add_option("--threads", cyc_threads, "worker threads (0 = auto)")
      ->capture_default_str();
  OutputFlags cyc_out;
  add_output_flags(cyc_cmd, cyc_out, true, true);

  // flow-converge: discrete shift vs continuous flow.
  auto* flow_cmd = app.add_subcommand(
      "flow-converge",
      "probability that the alpha*N-fold shift strays from the rotation "
      "flow, along a size grid");
  LawFlags flow_law;
  add_law_flags(flow_cmd, flow_law);
  double flow_alpha = 0.25;
  flow_cmd->add_option("--alpha", flow_alpha, "flow displacement")
      ->capture_default_str();
  double flow_epsilon = 0.05;
  flow_cmd->add_option("--epsilon", flow_epsilon, "distance threshold")
      ->capture_default_str();
  std::string flow_grid = "100,1000,10000";
  flow_cmd->add_option("--n-grid", flow_grid, "comma-separated sizes")
      ->capture_default_str();
  long long flow_trials = 200;
  flow_cmd->add_option("--trials", flow_trials, "trials per size")
      ->capture_default_str();
  std::string flow_mode = "resample";
  flow_cmd->add_option("--mode", flow_mode, "configuration reuse across sizes")
      ->check(CLI::IsMember({"reuse", "resample"}))
      ->capture_default_str();
  std::uint64_t flow_seed = kDefaultSeed;
  flow_cmd->add_option("--seed", flow_seed, "root seed")->capture_default_str();
  int flow_threads = 0;
  flow_cmd->add_option("--threads", flow_threads, "worker threads (0 = auto)")
      ->capture_default_str();
  OutputFlags flow_out;
  add_output_flags(flow_cmd, flow_out, true, true);

  // eigenangle-converge: linear statistics vs generator spectrum.
  auto* spec_cmd = app.add_subcommand(
      "eigenangle-converge",
      "linear eigenangle statistics of induced permutations against the "
      "generator spectrum, along a size grid");
  LawFlags spec_law;
  add_law_flags(spec_cmd, spec_law, /*fixed_only=*/true);
  std::string spec_knots = "3.14159,6.28319,9.42478";
  spec_cmd
      ->add_option("--f-knots", spec_knots,
                   "test-function knots, comma separated, increasing")
      ->capture_default_str();
  std::string spec_values = "0,1,0";
  spec_cmd
      ->add_option("--f-values", spec_values,
                   "test-function values at the knots (0 at both ends)")
      ->capture_default_str();
  std::string spec_grid = "50,200,1000";
  spec_cmd->add_option("--n-grid", spec_grid, "comma-separated sizes")
      ->capture_default_str();
  long long spec_trials = 200;
  spec_cmd->add_option("--trials", spec_trials, "trials per size")
      ->capture_default_str();
  std::string spec_mode = "resample";
  spec_cmd->add_option("--mode", spec_mode, "configuration reuse across sizes")
      ->check(CLI::IsMember({"reuse", "resample"}))
      ->capture_default_str();
  std::optional<double> spec_tolerance;
  spec_cmd->add_option("--tolerance", spec_tolerance,
                       "absolute error budget at the largest size (default "
                       "0.05 * (1 + limit))");
  std::uint64_t spec_seed = kDefaultSeed;
  spec_cmd->add_option("--seed", spec_seed, "root seed")->capture_default_str();
  int spec_threads = 0;
  spec_cmd->add_option("--threads", spec_threads, "worker threads (0 = auto)")
      ->capture_default_str();
  OutputFlags spec_out;
  add_output_flags(spec_cmd, spec_out, true, true);

  // consistency: exact projection property.
  auto* cons_cmd = app.add_subcommand(
      "consistency",
      "projection consistency of induced permutations across nested subsets");
  LawFlags cons_law;
  add_law_flags(cons_cmd, cons_law);
  long long cons_configs = 200;
  cons_cmd->add_option("--configs", cons_configs, "configurations to test")
      ->capture_default_str();
  long long cons_max_size = 40;
  cons_cmd->add_option("--max-size", cons_max_size, "largest configuration")
      ->capture_default_str();
  std::uint64_t cons_seed = kDefaultSeed;
  cons_cmd->add_option("--seed", cons_seed, "root seed")->capture_default_str();
  OutputFlags cons_out;
  add_output_flags(cons_cmd, cons_out, true, false);

  // replay: subcommand twin of --replay.
  auto* replay_cmd = app.add_subcommand(
      "replay", "re-execute a JSON output and verify it reproduces");
  std::string replay_file;
  replay_cmd->add_option("file", replay_file, "JSON produced by this tool")
      ->required();
  int replay_cmd_threads = 0;
  replay_cmd->add_option("--threads", replay_cmd_threads,
                         "worker threads (0 = auto)")
      ->capture_default_str();
  OutputFlags replay_out;
  add_output_flags(replay_cmd, replay_out, false, false);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("virtperm");
  for (const std::string& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!replay_path.empty()) {
      return do_replay(replay_path, replay_threads, OutputFlags{});
    }
    if (replay_cmd->parsed()) {
      return do_replay(replay_file, replay_cmd_threads, replay_out);
    }

    if (sample_cmd->parsed()) {
      std::map<std::string, std::string> params =
          lambda_law_params(law_from_flags(sample_law));
      params["n"] = std::to_string(sample_n);
      nlohmann::json j = exec_sample(params, sample_seed);
      emit(sample_out, j.dump(2) + "\n");
      if (!sample_perm_out.empty()) {
        PointConfig config = PointConfig::from_json(j);
        std::ofstream out(sample_perm_out, std::ios::binary);
        if (!out) {
          throw std::runtime_error("cannot open output file: " +
                                   sample_perm_out);
        }
        out << induced_permutation(config, config.ids()).to_cycle_text();
      }
      return 0;
    }

    if (spectrum_cmd->parsed()) {
      std::map<std::string, std::string> params;
      params["lambda"] = join_doubles(parse_double_list(spectrum_law.lambda_csv));
      params["window"] = format_double(spectrum_window);
      if (spectrum_out.format == "csv") {
        LambdaSequence lambda =
            LambdaSequence::from_values(parse_double_list(params.at("lambda")));
        emit(spectrum_out, generator_spectrum(lambda, spectrum_window).to_csv());
      } else {
        emit(spectrum_out, exec_spectrum(params, 0).dump(2) + "\n");
      }
      return 0;
    }

    if (eig_cmd->parsed()) {
      std::map<std::string, std::string> params;
      long long n = eig_n;
      if (!eig_perm_file.empty()) {
        std::string text = read_file(eig_perm_file);
        Permutation perm = Permutation::parse_cycles(text);
        params["perm"] = perm.to_cycle_text();
        n = static_cast<long long>(perm.size());
      } else {
        params = lambda_law_params(law_from_flags(eig_law));
        params["n"] = std::to_string(eig_n);
      }
      double window = eig_window.value_or(kPi * static_cast<double>(n));
      params["window"] = format_double(window);
      nlohmann::json j = exec_eigenangles(params, eig_seed);
      if (eig_out.format == "csv") {
        j.erase("run");
        emit(eig_out, PointProcess::from_json(j).to_csv());
      } else {
        emit(eig_out, j.dump(2) + "\n");
      }
      return 0;
    }

    if (marginal_cmd->parsed()) {
      ExperimentOptions options;
      options.threads = marginal_threads;
      return finish_report(
          run_marginal_check(static_cast<int>(marginal_n), marginal_theta,
                             static_cast<int>(marginal_trials), marginal_seed,
                             options),
          marginal_out);
    }

    if (uni_cmd->parsed()) {
      ExperimentOptions options;
      options.threads = uni_threads;
      options.attach_samples = uni_samples;
      return finish_report(
          run_delta_uniformity(law_from_flags(uni_law),
                               static_cast<int>(uni_n),
                               static_cast<int>(uni_trials), uni_seed, options),
          uni_out);
    }

    if (cyc_cmd->parsed()) {
      ExperimentOptions options;
      options.threads = cyc_threads;
      return finish_report(
          run_cycle_length_convergence(
              LambdaSequence::from_values(parse_double_list(cyc_law.lambda_csv)),
              cyc_circle, parse_int_list(cyc_grid),
              static_cast<int>(cyc_trials), cyc_seed,
              grid_mode_from_string(cyc_mode), options),
          cyc_out);
    }

    if (flow_cmd->parsed()) {
      ExperimentOptions options;
      options.threads = flow_threads;
      return finish_report(
          run_flow_convergence(law_from_flags(flow_law), flow_alpha,
                               parse_int_list(flow_grid), flow_epsilon,
                               static_cast<int>(flow_trials), flow_seed,
                               grid_mode_from_string(flow_mode), options),
          flow_out);
    }

    if (spec_cmd->parsed()) {
      ExperimentOptions options;
      options.threads = spec_threads;
      PiecewiseLinear f(parse_double_list(spec_knots),
                        parse_double_list(spec_values));
      return finish_report(
          run_eigenangle_convergence(
              LambdaSequence::from_values(parse_double_list(spec_law.lambda_csv)),
              f, parse_int_list(spec_grid), static_cast<int>(spec_trials),
              spec_seed, grid_mode_from_string(spec_mode), spec_tolerance,
              options),
          spec_out);
    }

    if (cons_cmd->parsed()) {
      return finish_report(
          run_projection_consistency(law_from_flags(cons_law),
                                     static_cast<int>(cons_configs),
                                     static_cast<int>(cons_max_size),
                                     cons_seed),
          cons_out);
    }

    std::cerr << app.help();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace virtperm
