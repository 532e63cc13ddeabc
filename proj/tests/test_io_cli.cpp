#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "virtperm/cli.hpp"
#include "virtperm/experiments.hpp"
#include "virtperm/format.hpp"
#include "virtperm/lambda.hpp"
#include "virtperm/point_process.hpp"
#include "virtperm/report.hpp"
#include "virtperm/sampler.hpp"

using namespace virtperm;

namespace {

namespace fs = std::filesystem;

// Runs the CLI in-process, capturing standard output.
int run_capture(const std::vector<std::string>& args, std::string* out) {
  std::ostringstream captured;
  std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
  int code = run_cli(args);
  std::cout.rdbuf(old);
  if (out != nullptr) *out = captured.str();
  return code;
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("virtperm_test_" + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("number formatting round trips and parsing is strict") {
  for (double v : {0.1, 1.0 / 3.0, 1e-9, -2.5, 12345678.9, 0.0}) {
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK_THROWS_AS(parse_double("0.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_int("7.5"), std::invalid_argument);
  CHECK(parse_int("-12") == -12);

  CHECK(parse_double_list("0.5,0.3") == std::vector<double>{0.5, 0.3});
  CHECK(parse_int_list("100,1000") == std::vector<long long>{100, 1000});
  CHECK(join_doubles({0.5, 0.25}) == "0.5,0.25");
  CHECK(join_ints({3, 4}) == "3,4");
  CHECK_THROWS_AS(parse_double_list("0.5,,0.3"), std::invalid_argument);
}

TEST_CASE("point process JSON keeps the infinite zero marker") {
  PointProcess finite = build_point_process({{-2.0, 1}, {3.5, 4}}, 2);
  CHECK(PointProcess::from_json(finite.to_json()).atoms == finite.atoms);
  CHECK(PointProcess::from_json(finite.to_json()).zero_multiplicity == 2);

  PointProcess endless = build_point_process({{1.0, 1}}, std::nullopt);
  nlohmann::json j = endless.to_json();
  CHECK(j.at("zero") == "inf");
  CHECK(PointProcess::from_json(j).zero_infinite());

  j["zero"] = "sometimes";
  CHECK_THROWS_AS(PointProcess::from_json(j), std::invalid_argument);
}

TEST_CASE("point configuration JSON round trips") {
  LambdaSequence lam = LambdaSequence::from_values({0.5, 0.3});
  std::map<ElementId, Position> pts;
  pts[0] = OnCircle{1, 0.25};
  pts[1] = OnCircle{2, 0.05};
  pts[7] = FixedAtom{3};
  PointConfig config(lam, pts);

  PointConfig back = PointConfig::from_json(config.to_json());
  CHECK(back.lambda() == config.lambda());
  CHECK(back.points() == config.points());

  nlohmann::json j = config.to_json();
  j["points"]["1"] = {{"circle", 9}, {"coord", 0.0}};
  CHECK_THROWS_AS(PointConfig::from_json(j), std::invalid_argument);
}

TEST_CASE("experiment reports serialize fully and extract their series") {
  ExperimentReport report;
  report.name = "demo";
  report.params["trials"] = "10";
  report.seed = 424242;
  report.statistics = {{"p_fail@N=100", 0.5},
                       {"p_fail@N=1000", 0.25},
                       {"ks", 0.01}};
  report.pass = true;
  report.tolerance = 0.01949;
  report.samples_csv = "ratio\n0.5\n";

  ExperimentReport back = ExperimentReport::from_json(report.to_json());
  CHECK(back.to_json_string() == report.to_json_string());
  CHECK(back.samples_csv == report.samples_csv);
  CHECK(back.statistic("ks") == 0.01);
  CHECK_FALSE(back.statistic("nope").has_value());

  CHECK(report.to_csv() ==
        "statistic,value\np_fail@N=100,0.5\np_fail@N=1000,0.25\nks,0.01\n");

  auto series = extract_series(report);
  REQUIRE(series.count("p_fail") == 1);
  CHECK(series.at("p_fail") ==
        std::vector<std::pair<long long, double>>{{100, 0.5}, {1000, 0.25}});
  CHECK(series.count("ks") == 0);
}

TEST_CASE("plots are deterministic bytes and require a series") {
  ExperimentReport report;
  report.name = "demo";
  report.seed = 1;
  report.statistics = {{"p_fail@N=100", 0.5},
                       {"p_fail@N=1000", 0.125},
                       {"p_fail@N=10000", 0.0}};
  std::string svg = render_plot_svg(report);
  CHECK(svg == render_plot_svg(report));
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);

  fs::path out = temp_file("plot.svg");
  render_plot(report, out.string());
  CHECK(slurp(out) == svg);
  fs::remove(out);

  ExperimentReport flat;
  flat.name = "flat";
  flat.statistics = {{"ks", 0.5}};
  CHECK_THROWS_AS(render_plot_svg(flat), std::invalid_argument);
  CHECK_THROWS_AS(render_plot(report, "/nonexistent-dir/x.svg"),
                  std::runtime_error);
}

TEST_CASE("usage errors exit 1, help exits 0") {
  CHECK(run_capture({"--help"}, nullptr) == 0);
  CHECK(run_capture({"uniformity", "--help"}, nullptr) == 0);
  CHECK(run_capture({"definitely-not-a-subcommand"}, nullptr) == 1);
  CHECK(run_capture({"uniformity", "--bogus-flag"}, nullptr) == 1);
  CHECK(run_capture({}, nullptr) == 1);

  // A fraction law must come from exactly one source.
  CHECK(run_capture({"uniformity", "--trials", "10"}, nullptr) == 1);
  CHECK(run_capture({"uniformity", "--theta", "1", "--lambda", "0.5,0.5"},
                    nullptr) == 1);
  // Validation errors inside the library surface as exit 1 too.
  CHECK(run_capture({"uniformity", "--lambda", "0.7,0.7"}, nullptr) == 1);
}

TEST_CASE("subcommand help lists flags with their defaults") {
  std::string text;
  CHECK(run_capture({"uniformity", "--help"}, &text) == 0);
  CHECK(text.find("--seed") != std::string::npos);
  CHECK(text.find("12698085") != std::string::npos);  // 0xC1C1E5
  CHECK(text.find("--trials") != std::string::npos);
  CHECK(text.find("20000") != std::string::npos);
  CHECK(text.find("--threads") != std::string::npos);

  CHECK(run_capture({"flow-converge", "--help"}, &text) == 0);
  CHECK(text.find("--alpha") != std::string::npos);
  CHECK(text.find("--epsilon") != std::string::npos);
  CHECK(text.find("--n-grid") != std::string::npos);
  CHECK(text.find("--mode") != std::string::npos);
  CHECK(text.find("--plot") != std::string::npos);
}

TEST_CASE("statistical failures exit 2 and passes exit 0") {
  std::string out;
  CHECK(run_capture({"uniformity", "--lambda", "1.0", "--n", "16", "--trials",
                     "400", "--seed", "3"},
                    &out) == 0);
  CHECK(nlohmann::json::parse(out).at("pass") == true);

  // A single tiny grid cannot reach the failure cap.
  CHECK(run_capture({"flow-converge", "--lambda", "1.0", "--alpha", "0.3",
                     "--n-grid", "50", "--trials", "20", "--seed", "3"},
                    &out) == 2);
  CHECK(nlohmann::json::parse(out).at("pass") == false);
}

TEST_CASE("CLI reports match direct library runs byte for byte") {
  fs::path out = temp_file("uniformity.json");
  CHECK(run_capture({"uniformity", "--lambda", "0.5,0.3", "--n", "16",
                     "--trials", "500", "--seed", "77", "--out",
                     out.string()},
                    nullptr) == 0);
  ExperimentReport direct = run_delta_uniformity(
      LambdaSequence::from_values({0.5, 0.3}), 16, 500, 77);
  CHECK(slurp(out) == direct.to_json_string());
  fs::remove(out);
}

TEST_CASE("sampled configurations replay byte for byte") {
  fs::path out = temp_file("sample.json");
  CHECK(run_capture({"sample", "--lambda", "0.6,0.4", "--n", "12", "--seed",
                     "9", "--out", out.string()},
                    nullptr) == 0);
  std::string original = slurp(out);

  std::string replayed;
  CHECK(run_capture({"replay", out.string()}, &replayed) == 0);
  CHECK(replayed == original);
  CHECK(run_capture({"--replay", out.string()}, &replayed) == 0);
  CHECK(replayed == original);

  // The emitted configuration parses and covers the requested ids.
  PointConfig config = PointConfig::from_json(nlohmann::json::parse(original));
  CHECK(config.ids().size() == 12);
  fs::remove(out);
}

TEST_CASE("induced permutation export agrees with the sampled configuration") {
  fs::path out = temp_file("sample2.json");
  fs::path perm_out = temp_file("sample2.cycles");
  CHECK(run_capture({"sample", "--lambda", "0.8,0.2", "--n", "9", "--seed",
                     "14", "--out", out.string(), "--perm-out",
                     perm_out.string()},
                    nullptr) == 0);
  PointConfig config =
      PointConfig::from_json(nlohmann::json::parse(slurp(out)));
  Permutation expected = induced_permutation(config, config.ids());
  CHECK(Permutation::parse_cycles(slurp(perm_out)) == expected);
  fs::remove(out);
  fs::remove(perm_out);
}

TEST_CASE("spectrum and eigenangle outputs replay and export CSV") {
  fs::path out = temp_file("spectrum.json");
  CHECK(run_capture({"spectrum", "--lambda", "0.5,0.5", "--window", "13",
                     "--out", out.string()},
                    nullptr) == 0);
  std::string replayed;
  CHECK(run_capture({"replay", out.string()}, &replayed) == 0);
  CHECK(replayed == slurp(out));

  std::string csv;
  CHECK(run_capture({"spectrum", "--lambda", "0.5,0.5", "--window", "13",
                     "--format", "csv"},
                    &csv) == 0);
  CHECK(csv.rfind("location,multiplicity\n", 0) == 0);
  fs::remove(out);

  // Eigenangles of a permutation read from a cycle-text fixture.
  fs::path cycles = temp_file("fixture.cycles");
  {
    std::ofstream f(cycles);
    f << "0 1 2 3\n";
  }
  fs::path eig = temp_file("eig.json");
  CHECK(run_capture({"eigenangles", "--perm-file", cycles.string(),
                     "--window", "7", "--out", eig.string()},
                    nullptr) == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(eig));
  CHECK(j.at("zero") == 1);
  CHECK(j.at("atoms").size() == 2);
  CHECK(run_capture({"replay", eig.string()}, &replayed) == 0);
  CHECK(replayed == slurp(eig));

  // Sampled eigenangles replay as well.
  fs::path eig2 = temp_file("eig2.json");
  CHECK(run_capture({"eigenangles", "--theta", "1", "--n", "40", "--seed",
                     "5", "--out", eig2.string()},
                    nullptr) == 0);
  CHECK(run_capture({"replay", eig2.string()}, &replayed) == 0);
  CHECK(replayed == slurp(eig2));
  fs::remove(cycles);
  fs::remove(eig);
  fs::remove(eig2);
}

TEST_CASE("experiment reports replay through the CLI and reject tampering") {
  fs::path out = temp_file("marginal.json");
  CHECK(run_capture({"marginal", "--n", "3", "--theta", "1", "--trials",
                     "2000", "--seed", "6", "--out", out.string()},
                    nullptr) == 0);
  std::string replayed;
  CHECK(run_capture({"replay", out.string()}, &replayed) == 0);
  CHECK(replayed == slurp(out));

  nlohmann::json doctored = nlohmann::json::parse(slurp(out));
  doctored["statistics"][0][1] = 123.456;
  {
    std::ofstream f(out);
    f << doctored.dump(2) << "\n";
  }
  CHECK(run_capture({"replay", out.string()}, nullptr) == 1);
  fs::remove(out);

  CHECK(run_capture({"replay", "/nonexistent/nowhere.json"}, nullptr) == 1);

  fs::path junk = temp_file("junk.json");
  {
    std::ofstream f(junk);
    f << "{\"hello\": 1}\n";
  }
  CHECK(run_capture({"replay", junk.string()}, nullptr) == 1);
  fs::remove(junk);
}

TEST_CASE("plot flag renders the same SVG as the library") {
  fs::path out = temp_file("cycle.json");
  fs::path svg = temp_file("cycle.svg");
  CHECK(run_capture({"cycle-converge", "--lambda", "0.6,0.4", "--n-grid",
                     "100,1000", "--trials", "30", "--seed", "8", "--out",
                     out.string(), "--plot", svg.string()},
                    nullptr) == 0);
  ExperimentReport report =
      ExperimentReport::from_json(nlohmann::json::parse(slurp(out)));
  CHECK(slurp(svg) == render_plot_svg(report));
  fs::remove(out);
  fs::remove(svg);
}

TEST_CASE("omitting the seed uses the documented default") {
  std::string a, b;
  CHECK(run_capture({"sample", "--lambda", "1.0", "--n", "4"}, &a) == 0);
  CHECK(run_capture({"sample", "--lambda", "1.0", "--n", "4"}, &b) == 0);
  CHECK(a == b);
  CHECK(nlohmann::json::parse(a).at("run").at("seed") == 0xC1C1E5);
}
