#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <sstream>

#include "zeroone/simulate.hpp"

using namespace zeroone;

namespace {

std::vector<Word> all_words(std::size_t max_len) {
  std::vector<Word> out;
  for (std::size_t n = 0; n <= max_len; ++n)
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
      Word w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = (bits >> i) & 1;
      out.push_back(w);
    }
  return out;
}

double ones(const Word& w) { return std::accumulate(w.begin(), w.end(), 0.0); }

}  // namespace

TEST_CASE("sampling") {
  CHECK(ones(sample_predicate(1000, 0, 1, 0)) == 0);
  CHECK(ones(sample_predicate(1000, 1, 1, 0)) == 1000);
  const double n = 1e5;
  const Word half = sample_predicate(100'000, 0.5, 42, 3);
  CHECK(std::abs(ones(half) - n / 2) <= 4 * std::sqrt(n / 4));
  CHECK(half == sample_predicate(100'000, 0.5, 42, 3));
  CHECK(half != sample_predicate(100'000, 0.5, 42, 4));
  CHECK(half != sample_predicate(100'000, 0.5, 43, 3));

  // Sparse (geometric) path: mean count over many trials.
  double total = 0;
  for (int i = 0; i < 400; ++i) total += ones(sample_predicate(10'000, 0.01, 9, i));
  const double expected = 400 * 100.0;
  CHECK(std::abs(total - expected) <= 4 * std::sqrt(400 * 10'000 * 0.01 * 0.99));
  CHECK_THROWS_AS(sample_predicate(10, 1.5, 0, 0), DomainError);
}

TEST_CASE("scans agree with evaluation on all words of length <= 10") {
  const Sentence a = builtin("A"), b = builtin("B"), c = builtin("C"), d = builtin("D");
  std::vector<Sentence> ak;
  for (int k = 1; k <= 4; ++k) ak.push_back(builtin_consecutive(k));
  for (const Word& w : all_words(10)) {
    REQUIRE(scan_A(w) == evaluate({w, false}, a));
    REQUIRE(scan_B(w) == evaluate({w, false}, b));
    REQUIRE(scan_C(w) == evaluate({w, false}, c));
    REQUIRE(scan_D(w) == evaluate({w, false}, d));
    if (w.empty()) continue;  // a cycle has at least one element
    for (int k = 1; k <= 4; ++k) REQUIRE(scan_consecutive(w, k) == evaluate({w, true}, ak[k - 1]));
  }
}

TEST_CASE("streamed built-ins agree with scans of the sampled word") {
  for (double p : {0.02, 0.2, 0.6, 0.97})
    for (std::size_t n : {1, 2, 3, 7, 40, 300})
      for (std::uint64_t trial = 0; trial < 30; ++trial) {
        const Word w = sample_predicate(n, p, 11, trial);
        auto single = [&](const char* name) {
          TrialPlan plan;
          plan.n = n;
          plan.p = p;
          plan.seed = 11;
          plan.sentence = name;
          // Trial i of a plan uses stream i, so run trials [0, trial] and diff.
          plan.trials = trial + 1;
          const auto upto = empirical_probability(plan).successes;
          if (trial == 0) return upto == 1;
          plan.trials = trial;
          return upto - empirical_probability(plan).successes == 1;
        };
        REQUIRE(single("A") == scan_A(w));
        REQUIRE(single("B") == scan_B(w));
        REQUIRE(single("C") == scan_C(w));
        REQUIRE(single("D") == scan_D(w));
        for (int k = 1; k <= 3; ++k) REQUIRE(single(("A_" + std::to_string(k)).c_str()) == scan_consecutive(w, k));
      }
}

TEST_CASE("text sentences and built-ins give the same frequencies") {
  TrialPlan plan;
  plan.n = 60;
  plan.p = 0.1;
  plan.trials = 300;
  plan.seed = 5;
  plan.sentence = "D";
  const SweepRow fast = empirical_probability(plan);
  plan.sentence = builtin_text("D");
  const SweepRow slow = empirical_probability(plan);
  CHECK(fast.successes == slow.successes);
  CHECK(slow.standard_error == doctest::Approx(std::sqrt(slow.empirical * (1 - slow.empirical) / 300)));
  plan.sentence = "exists x. U(x) &";
  CHECK_THROWS_AS(empirical_probability(plan), SyntaxError);
}

TEST_CASE("race oracle") {
  CHECK(race_oracle_D(0.5) == doctest::Approx(2.0 / 3));
  CHECK(race_oracle_D(1) == 1);
  CHECK(race_oracle_D(1e-9) == doctest::Approx(0.5));
  CHECK_THROWS_AS(race_oracle_D(0), DomainError);
  const RaceBounds b = race_enumeration_D(0.5, 20);
  CHECK(b.value <= 2.0 / 3 + 1e-12);
  CHECK(b.value + b.undecided >= 2.0 / 3 - 1e-12);
  CHECK(b.undecided < 0.05);
  const RaceBounds c = race_enumeration_D(0.3, 22);
  CHECK(c.value <= race_oracle_D(0.3) + 1e-12);
  CHECK(c.value + c.undecided >= race_oracle_D(0.3) - 1e-12);
}

TEST_CASE("circular no-11 probability") {
  for (double p : {0.1, 0.5, 0.8})
    for (std::size_t n = 1; n <= 12; ++n) {
      double brute = 0;
      for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
        Word w(n);
        double weight = 1;
        for (std::size_t i = 0; i < n; ++i) {
          w[i] = (bits >> i) & 1;
          weight *= w[i] ? p : 1 - p;
        }
        if (!scan_consecutive(w, 2)) brute += weight;
      }
      CHECK(circular_pair_free_probability(n, p) == doctest::Approx(brute).epsilon(1e-12));
    }
  // Poisson shadow at the knife edge: n p^2 = 1.
  CHECK(circular_pair_free_probability(100'000, std::pow(1e5, -0.5)) == doctest::Approx(std::exp(-1.0)).epsilon(0.01));
}

TEST_CASE("regime sweep") {
  const auto grid = theorem1_grid(2);
  std::size_t mirrored = 0;
  for (const auto& g : grid) mirrored += g.mirrored;
  CHECK(grid.size() == 13);
  CHECK(mirrored == 6);
  SweepConfig config;
  config.k = 2;
  config.ns = {2000};
  config.trials = 50;
  config.seed = 1;
  const auto rows = regime_sweep(config);
  CHECK(rows.size() == grid.size() * 3);
  for (const auto& r : rows) {
    CHECK(r.error.empty());
    CHECK(r.successes <= r.trials);
  }
  // p << 1/n: nothing; 1 - p << 1/n: everything.
  CHECK(rows.front().empirical < 0.2);
  CHECK(rows.back().empirical > 0.8);
  std::ostringstream os;
  write_sweep_csv(os, rows);
  CHECK(os.str().rfind("n,alpha,p,sentence,trials,successes,empirical,se,regime", 0) == 0);
  // Same seed, same table.
  std::ostringstream again;
  write_sweep_csv(again, regime_sweep(config));
  CHECK(os.str() == again.str());
}

TEST_CASE("interval statistics and the probe at small depth") {
  const ValueSystem vs = ValueSystem::build(1, 1);
  CHECK(splitting_block(vs, 1).size() == 2);
  const IntervalStats st = interval_statistics(3000, std::pow(3000.0, -0.6), 1, vs, 40, 3);
  CHECK(st.ratio_min > 0);
  CHECK(st.ratio_max < 2);
  CHECK(st.block_fraction > 0.8);

  ProbeConfig config;
  config.n = 3000;
  config.p = std::pow(3000.0, -0.6);
  config.t = 1;
  config.k = 1;
  config.trials = 60;
  config.seed = 2;
  config.delta = 0.1;
  const ProbeSummary s = theorem2_probe(config);
  CHECK(s.r_classes == 1);
  CHECK(s.classified <= 60);
  CHECK(s.catalog_disagreements <= s.pairs_checked);
  REQUIRE(s.solved.size() == 1);
  CHECK(s.solved[0] == doctest::Approx(1));
  std::ostringstream os;
  write_probe(os, s);
  CHECK(os.str().rfind("zeroone-probe 1", 0) == 0);
}
