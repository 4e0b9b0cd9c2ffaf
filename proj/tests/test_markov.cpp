#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "zeroone/markov.hpp"

using namespace zeroone;

TEST_CASE("level 1 closed form") {
  const ValueSystem vs = ValueSystem::build(2, 1);
  const auto d = kvalue_distribution(vs, 1, 0.1);
  CHECK(d.probability(0) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(d.probability(2) == doctest::Approx(0.081).epsilon(1e-14));
  CHECK(d.probability(9) == doctest::Approx(std::pow(0.9, 9)).epsilon(1e-14));
  CHECK(d.probability.sum() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(kvalue_distribution(vs, 1, 0.0), DomainError);
  CHECK_THROWS_AS(kvalue_distribution(vs, 1, 1.0), DomainError);

  // Monte Carlo: zero runs before a one are geometric.
  std::mt19937_64 rng(2024);
  std::bernoulli_distribution bit(0.1);
  std::vector<int> counts(10);
  const int samples = 100'000;
  for (int i = 0; i < samples; ++i) {
    std::size_t z = 0;
    while (!bit(rng)) ++z;
    ++counts[std::min<std::size_t>(z, 9)];
  }
  for (int v = 0; v < 10; ++v) {
    const double q = d.probability(v);
    const double sigma = std::sqrt(q * (1 - q) / samples);
    CHECK(std::abs(counts[v] / double(samples) - q) <= 4 * sigma);
  }
}

TEST_CASE("distributions sum to one") {
  const ValueSystem vs = ValueSystem::build(1, 3);
  for (double p : {0.5, 0.1, 0.01}) {
    for (int j = 1; j <= 3; ++j) {
      const auto d = kvalue_distribution(vs, j, p);
      CHECK(d.probability.sum() == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(d.mass_defect < 1e-9);
      CHECK((d.probability.array() >= 0).all());
    }
  }
}

TEST_CASE("level 2 against direct sampling") {
  const ValueSystem vs = ValueSystem::build(1, 2);
  const double p = 0.3;
  const auto d = kvalue_distribution(vs, 2, p);
  std::mt19937_64 rng(7);
  std::bernoulli_distribution bit(p);
  std::vector<int> counts(vs.values(2).size());
  const int samples = 50'000;
  Word w;
  for (int i = 0; i < samples; ++i) {
    w.clear();
    std::optional<Interval> iv;
    // Grow the word until the first 2-interval completes.
    while (!(iv = vs.interval_at(w, 0, 2))) w.push_back(bit(rng) ? 1 : 0);
    ++counts[iv->value];
  }
  for (std::size_t v = 0; v < counts.size(); ++v) {
    const double q = d.probability(static_cast<Eigen::Index>(v));
    const double sigma = std::sqrt(q * (1 - q) / samples) + 1e-12;
    CHECK(std::abs(counts[v] / double(samples) - q) <= 4.5 * sigma);
  }
}

TEST_CASE("step distributions") {
  const ValueSystem vs = ValueSystem::build(1, 2);
  const auto d1 = kvalue_distribution(vs, 1, 0.2);
  const auto chain = value_chain(vs, 1, d1);
  const auto f0 = step_distribution(chain, 0);
  CHECK(f0(0) == 1.0);
  CHECK(f0.sum() == 1.0);
  for (std::size_t u : {1u, 5u, 40u}) CHECK(step_distribution(chain, u).sum() == doctest::Approx(1.0));
  // Rows of the transition matrix are stochastic.
  const auto P = chain.transition();
  const Eigen::VectorXd rows = P * Eigen::VectorXd::Ones(P.cols());
  CHECK((rows.array() - 1.0).abs().maxCoeff() < 1e-12);
  // The stop mechanism: Pr[L_u] = (1-p*)^u p* sums to one.
  double total = 0;
  for (int u = 0; u < 2000; ++u) total += std::pow(1 - chain.stop, u) * chain.stop;
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("transient states decay geometrically in the limit chain") {
  const ValueSystem vs = ValueSystem::build(1, 3);
  const auto lim = limit_coefficients<double>(vs, 2);
  const auto chain = limit_chain(vs, 2, lim);
  const Monoid& m = *chain.monoid;
  double previous = 1;
  for (std::size_t u = 4; u <= 64; u *= 2) {
    const auto f = step_distribution(chain, u);
    double mass = 0;
    for (Element x = 0; x < m.size(); ++x)
      if (!m.persistent(x)) mass += f(x);
    CHECK(mass <= previous);
    previous = mass;
  }
  CHECK(previous < 1e-6);
}

TEST_CASE("limit coefficients") {
  const ValueSystem vs = ValueSystem::build(2, 2);
  const auto lim = limit_coefficients<double>(vs, 2);
  double persistent_mass = 0;
  for (ValueId v : vs.persistent_values(2)) {
    persistent_mass += lim.coefficient(v);
    CHECK(lim.coefficient(v) == doctest::Approx(1.0 / 9));
  }
  CHECK(persistent_mass == doctest::Approx(1.0));
  for (ValueId v : vs.transient_values(2)) CHECK(lim.coefficient(v) == doctest::Approx(1.0));
  CHECK(lim.c == doctest::Approx(27.0));

  std::vector<double> gaps;
  std::vector<double> ratios;
  for (double p : {1e-2, 1e-3, 1e-4}) {
    const auto d = kvalue_distribution(vs, 2, p);
    double gap = 0;
    for (ValueId v : vs.persistent_values(2))
      gap = std::max(gap, std::abs(d.probability(v) - lim.coefficient(v)));
    gaps.push_back(gap);
    double worst = 0;
    for (ValueId v : vs.transient_values(2))
      worst = std::max(worst, std::abs(d.probability(v) / p / lim.coefficient(v) - 1));
    ratios.push_back(worst);
  }
  CHECK(gaps[1] < gaps[0]);
  CHECK(gaps[2] < gaps[1]);
  CHECK(ratios[2] < 0.05);

  const ValueSystem three = ValueSystem::build(1, 3);
  const auto lim3 = limit_coefficients<double>(three, 3);
  double mass3 = 0;
  for (ValueId v : three.persistent_values(3)) mass3 += lim3.coefficient(v);
  CHECK(mass3 == doctest::Approx(1.0));
}

TEST_CASE("chain persistence matches the monoid") {
  for (int t = 1; t <= 2; ++t) {
    const Monoid m = Monoid::generate(Alphabet::binary(), t);
    ChainSpec<double> chain;
    chain.monoid = &m;
    chain.step = Eigen::VectorXd::Constant(2, 0.5);
    const auto closed = minimal_closed_states(chain.transition());
    for (Element x = 0; x < m.size(); ++x) CHECK(closed[x] == is_persistent(m, x));
    // Aperiodicity: some x + j a is a fixed point of + a.
    for (Element x : m.persistent_elements())
      for (Letter a = 0; a < 2; ++a) {
        Element y = x;
        for (int j = 0; j < 9; ++j) y = m.right(y, a);
        CHECK(m.right(y, a) == y);
        CHECK(m.persistent(y));
      }
  }
}

TEST_CASE("absorption") {
  const Monoid m = Monoid::generate(Alphabet::binary(), 2);
  Eigen::VectorXd letters(2);
  letters << 0.3, 0.7;
  const auto result = absorption(m, letters);
  CHECK(result.probability.sum() == doctest::Approx(1.0).epsilon(1e-9));

  std::mt19937_64 rng(99);
  std::bernoulli_distribution one(0.7);
  std::vector<int> hits(result.probability.size());
  const int runs = 20'000;
  for (int r = 0; r < runs; ++r) {
    Element x = m.identity();
    while (!m.persistent(x)) x = m.right(x, one(rng) ? 1 : 0);
    ++hits[result.classes.r_of[x]];
  }
  for (std::size_t c = 0; c < hits.size(); ++c) {
    const double q = result.probability(static_cast<Eigen::Index>(c));
    CHECK(std::abs(hits[c] / double(runs) - q) <= 3.5 * std::sqrt(q * (1 - q) / runs) + 1e-12);
  }

  const Monoid unary = Monoid::generate(Alphabet({"1"}), 2);
  const auto single = absorption(unary, Eigen::VectorXd(Eigen::VectorXd::Ones(1)));
  REQUIRE(single.probability.size() == 1);
  CHECK(single.probability(0) == doctest::Approx(1.0));
  Eigen::VectorXd bad(2);
  bad << 0.5, 0.6;
  CHECK_THROWS_AS(absorption(m, bad), DomainError);
}

TEST_CASE("templated on the scalar") {
  const ValueSystem vs = ValueSystem::build(1, 2);
  const auto ld = kvalue_distribution<long double>(vs, 2, 0.1L);
  const auto d = kvalue_distribution<double>(vs, 2, 0.1);
  for (Eigen::Index v = 0; v < d.probability.size(); ++v)
    CHECK(static_cast<double>(ld.probability(v)) == doctest::Approx(d.probability(v)).epsilon(1e-10));
}
