#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <variant>
#include <vector>

#include "virtperm/lambda.hpp"
#include "virtperm/permutation.hpp"
#include "virtperm/rng.hpp"
#include "virtperm/sampler.hpp"
#include "virtperm/stats.hpp"

using namespace virtperm;

namespace {

std::vector<ElementId> iota_ids(int n) {
  std::vector<ElementId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

}  // namespace

TEST_CASE("counter rng streams are deterministic and consumption-independent") {
  SplitRng a(5);
  SplitRng b(5);
  for (int i = 0; i < 20; ++i) {
    CHECK(a.next_u64() == b.next_u64());
    double u = a.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    b.next_unit();
  }

  // A child stream depends only on the parent's key, not on how much the
  // parent has been consumed.
  SplitRng fresh(99);
  std::uint64_t before = fresh.split(3).next_u64();
  SplitRng drained(99);
  for (int i = 0; i < 7; ++i) drained.next_u64();
  CHECK(drained.split(3).next_u64() == before);
  CHECK(SplitRng(99).split(4).next_u64() != before);

  SplitRng below(1);
  for (int i = 0; i < 1000; ++i) {
    CHECK(below.next_below(7) < 7);
  }
}

TEST_CASE("fraction sequences sort, validate and compute dust") {
  LambdaSequence lam = LambdaSequence::from_values({0.3, 0.5});
  CHECK(lam.values() == std::vector<double>{0.5, 0.3});
  CHECK(std::abs(lam.dust() - 0.2) <= 1e-12);
  CHECK(lam.circle_count() == 2);
  CHECK(lam.perimeter(1) == 0.5);
  CHECK(lam.perimeter(2) == 0.3);
  CHECK(lam.offset(2) == 0.5);

  LambdaSequence full = LambdaSequence::from_values({0.5, 0.3, 0.2});
  CHECK(full.dust() == 0.0);

  CHECK(LambdaSequence().circle_count() == 0);
  CHECK(LambdaSequence().dust() == 1.0);

  CHECK_THROWS_AS(LambdaSequence::from_values({0.7, 0.7}),
                  std::invalid_argument);
  CHECK_THROWS_AS(LambdaSequence::from_values({-0.1}), std::invalid_argument);
  CHECK_THROWS_AS(LambdaSequence::from_values({1.5}), std::invalid_argument);
  CHECK_THROWS_AS(LambdaSequence::from_values({0.0}), std::invalid_argument);

  // Mass coordinates map into circles in laying order, dust last.
  CHECK(lam.circle_at_mass(0.0) == 1);
  CHECK(lam.circle_at_mass(0.49) == 1);
  CHECK(lam.circle_at_mass(0.5) == 2);
  CHECK(lam.circle_at_mass(0.81) == 0);
  CHECK(lam.circle_at_mass(0.99) == 0);
}

TEST_CASE("stick-breaking draws stay on the simplex") {
  SplitRng rng(31337);
  for (double theta : {0.2, 1.0, 5.0}) {
    for (int round = 0; round < 2000; ++round) {
      LambdaSequence lam = sample_gem(theta, 256, 1e-6, rng);
      double sum = 0.0;
      double prev = 1.0;
      for (double v : lam.values()) {
        CHECK(v > 0.0);
        CHECK(v <= prev);
        prev = v;
        sum += v;
      }
      CHECK(std::abs(sum + lam.dust() - 1.0) <= 1e-12);
      CHECK(lam.dust() >= 0.0);
    }
  }
  CHECK_THROWS_AS(sample_gem(0.0, 256, 1e-6, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_gem(-1.0, 256, 1e-6, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_gem(1.0, 0, 1e-6, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_gem(1.0, 256, 0.0, rng), std::invalid_argument);
}

TEST_CASE("stick-breaking mean of the largest fraction near 0.6243 at theta 1") {
  SplitRng rng(2718);
  const int samples = 100000;
  double acc = 0.0;
  for (int i = 0; i < samples; ++i) {
    acc += sample_gem(1.0, 256, 1e-9, rng).values().front();
  }
  CHECK(std::abs(acc / samples - 0.6243) < 0.01);
}

TEST_CASE("tiny concentration puts almost all mass on the first stick") {
  double acc = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SplitRng rng(seed);
    acc += sample_gem(0.02, 256, 1e-6, rng).values().front();
  }
  CHECK(acc / 100.0 > 0.9);
}

TEST_CASE("position sampling respects the fraction law") {
  SplitRng rng(808);

  LambdaSequence one = LambdaSequence::from_values({1.0});
  PointConfig all_on = sample_positions(one, iota_ids(50), rng.split(1));
  for (const auto& [id, pos] : all_on.points()) {
    const auto* c = std::get_if<OnCircle>(&pos);
    REQUIRE(c != nullptr);
    CHECK(c->circle == 1);
    CHECK(c->coord >= 0.0);
    CHECK(c->coord < 1.0);
  }

  PointConfig all_dust = sample_positions(LambdaSequence(), iota_ids(50),
                                          rng.split(2));
  std::map<int, int> atoms_seen;
  for (const auto& [id, pos] : all_dust.points()) {
    const auto* a = std::get_if<FixedAtom>(&pos);
    REQUIRE(a != nullptr);
    ++atoms_seen[a->atom];
  }
  CHECK(atoms_seen.size() == 50);

  LambdaSequence mix = LambdaSequence::from_values({0.6, 0.4});
  PointConfig big = sample_positions(mix, iota_ids(100000), rng.split(3));
  int on_first = 0;
  for (const auto& [id, pos] : big.points()) {
    if (const auto* c = std::get_if<OnCircle>(&pos); c && c->circle == 1) {
      ++on_first;
    }
  }
  CHECK(std::abs(on_first / 100000.0 - 0.6) < 0.01);

  std::vector<ElementId> dup = {0, 1, 1};
  CHECK_THROWS_AS(sample_positions(mix, dup, rng.split(4)),
                  std::invalid_argument);
}

TEST_CASE("position sampling is a per-id function of the seed") {
  LambdaSequence lam = LambdaSequence::from_values({0.5, 0.3});
  SplitRng rng(5150);
  PointConfig small = sample_positions(lam, iota_ids(10), rng);
  PointConfig large = sample_positions(lam, iota_ids(200), rng);
  // Growing the id set never moves the existing points, which is what lets
  // nested-subset experiments reuse one draw.
  for (ElementId id : small.ids()) {
    CHECK(small.at(id) == large.at(id));
  }
}

TEST_CASE("point configurations validate their contents") {
  LambdaSequence lam = LambdaSequence::from_values({0.5});
  std::map<ElementId, Position> pts;
  pts[0] = OnCircle{1, 0.1};
  pts[1] = OnCircle{1, 0.1};
  CHECK_THROWS_AS(PointConfig(lam, pts), std::invalid_argument);

  pts[1] = OnCircle{1, 0.6};  // beyond the perimeter
  CHECK_THROWS_AS(PointConfig(lam, pts), std::invalid_argument);

  pts[1] = OnCircle{2, 0.1};  // no such circle
  CHECK_THROWS_AS(PointConfig(lam, pts), std::invalid_argument);

  pts[1] = FixedAtom{4};
  PointConfig ok(lam, pts);
  CHECK(ok.contains(1));
  CHECK_FALSE(ok.contains(2));
  CHECK_THROWS_AS(ok.at(2), std::invalid_argument);

  CHECK_THROWS_AS(ok.with_position(1, Position(OnCircle{1, 0.1})),
                  std::invalid_argument);
  PointConfig moved = ok.with_position(1, Position(OnCircle{1, 0.3}));
  CHECK(std::get<OnCircle>(moved.at(1)).coord == 0.3);
}

TEST_CASE("successor permutation around each circle") {
  LambdaSequence one = LambdaSequence::from_values({1.0});
  std::map<ElementId, Position> pts;
  pts[3] = OnCircle{1, 0.1};
  pts[7] = OnCircle{1, 0.5};
  pts[9] = OnCircle{1, 0.9};
  PointConfig config(one, pts);
  std::vector<ElementId> all = {3, 7, 9};
  CHECK(induced_permutation(config, all) ==
        Permutation::from_cycles({{3, 7, 9}}));

  // A point alone on its circle, and every atom, stays fixed.
  LambdaSequence two = LambdaSequence::from_values({0.5, 0.3});
  std::map<ElementId, Position> sparse;
  sparse[0] = OnCircle{1, 0.2};
  sparse[1] = OnCircle{2, 0.25};
  sparse[2] = FixedAtom{0};
  PointConfig lonely(two, sparse);
  std::vector<ElementId> ids012 = {0, 1, 2};
  CHECK(induced_permutation(lonely, ids012) == Permutation::identity(ids012));

  std::vector<ElementId> unknown = {0, 5};
  CHECK_THROWS_AS(induced_permutation(lonely, unknown), std::invalid_argument);
}

TEST_CASE("successor permutations of nested subsets are projections") {
  SplitRng rng(161);
  LambdaSequence lam = LambdaSequence::from_values({0.4, 0.3, 0.1});
  for (int round = 0; round < 100; ++round) {
    PointConfig config =
        sample_positions(lam, iota_ids(60), rng.split(round));
    std::vector<ElementId> outer = config.ids();
    SplitRng pick = rng.split(1000 + round);
    std::vector<ElementId> inner;
    for (ElementId id : outer) {
      if (pick.next_unit() < 0.5) inner.push_back(id);
    }
    if (inner.empty()) continue;
    CHECK(project(induced_permutation(config, outer), inner) ==
          induced_permutation(config, inner));
  }
}

TEST_CASE("sequential-insertion sampler edge cases") {
  SplitRng rng(424242);
  CHECK(sample_ewens_crp(1, 3.0, rng) == Permutation::identity({0}));
  CHECK_THROWS_AS(sample_ewens_crp(0, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_ewens_crp(3, -1.0, rng), std::invalid_argument);

  // theta = 0 never opens a second cycle.
  for (int round = 0; round < 200; ++round) {
    Permutation p = sample_ewens_crp(6, 0.0, rng);
    CHECK(cycle_decomposition(p).size() == 1);
  }
}

TEST_CASE("sequential-insertion sampler matches the exact pmf") {
  // theta = 0: uniform over the 6 full cycles of 4 elements, checked against
  // the pmf with its structural zeros (dof drops to 5).
  std::vector<double> probs0;
  std::vector<ElementId> ids = iota_ids(4);
  std::vector<ElementId> image = ids;
  do {
    probs0.push_back(
        std::exp(ewens_log_pmf(Permutation::from_image(ids, image), 0.0)));
  } while (std::next_permutation(image.begin(), image.end()));

  SplitRng rng(99177);
  const int trials = 30000;
  std::vector<std::int64_t> counts(24, 0);
  for (int i = 0; i < trials; ++i) {
    ++counts[lexicographic_rank(sample_ewens_crp(4, 0.0, rng))];
  }
  ChiSquareResult zero = chi_square(counts, probs0, trials);
  CHECK(zero.dof == 5);
  CHECK(zero.statistic < chi_square_critical_0001(zero.dof));

  // theta = 1: uniform over all 6 permutations of 3 elements.
  std::vector<std::int64_t> counts3(6, 0);
  for (int i = 0; i < trials; ++i) {
    ++counts3[lexicographic_rank(sample_ewens_crp(3, 1.0, rng))];
  }
  std::vector<double> uniform(6, 1.0 / 6.0);
  ChiSquareResult one = chi_square(counts3, uniform, trials);
  CHECK(one.dof == 5);
  CHECK(one.statistic < chi_square_critical_0001(one.dof));
}

TEST_CASE("fraction-law descriptions round trip") {
  LambdaLaw fixed = LambdaSequence::from_values({0.5, 0.25});
  auto fixed_params = lambda_law_params(fixed);
  CHECK(fixed_params.count("lambda") == 1);
  CHECK(lambda_law_from_params(fixed_params) == fixed);

  PoissonDirichletLaw pd;
  pd.theta = 2.5;
  pd.truncation = 128;
  pd.tail_epsilon = 1e-5;
  auto pd_params = lambda_law_params(pd);
  CHECK(pd_params.at("theta") == "2.5");
  LambdaLaw back = lambda_law_from_params(pd_params);
  const auto* got = std::get_if<PoissonDirichletLaw>(&back);
  REQUIRE(got != nullptr);
  CHECK(got->theta == 2.5);
  CHECK(got->truncation == 128);
  CHECK(got->tail_epsilon == 1e-5);

  CHECK(describe_lambda_law(fixed).find("0.5") != std::string::npos);

  std::map<std::string, std::string> junk;
  junk["flavor"] = "lemon";
  CHECK_THROWS_AS(lambda_law_from_params(junk), std::invalid_argument);
}
