#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>

#include "zeroone/cycles.hpp"
#include "zeroone/logic.hpp"

using namespace zeroone;

namespace {

bool holds(const std::string& sentence, const std::string& bits, bool circular = false) {
  const Word w = binary_word(bits);
  return evaluate({w, circular}, parse(sentence));
}

bool holds(const Sentence& s, const Word& w, bool circular = false) {
  return evaluate({w, circular}, s);
}

std::vector<Word> all_words(std::size_t max_len, std::size_t min_len = 0) {
  std::vector<Word> out;
  for (std::size_t n = min_len; n <= max_len; ++n)
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
      Word w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = (bits >> i) & 1;
      out.push_back(w);
    }
  return out;
}

// Random linear sentence with quantifier depth <= depth.
std::string random_formula(std::mt19937_64& rng, int depth, std::vector<std::string>& vars, int size) {
  std::uniform_int_distribution<int> pick(0, 9);
  auto any_var = [&] {
    std::uniform_int_distribution<std::size_t> v(0, vars.size() - 1);
    return vars[v(rng)];
  };
  const int choice = pick(rng);
  if ((vars.empty() || choice < 4) && depth > 0) {
    const std::string name = "v" + std::to_string(vars.size());
    vars.push_back(name);
    const std::string body = random_formula(rng, depth - 1, vars, size - 1);
    vars.pop_back();
    return std::string(choice % 2 ? "(exists " : "(forall ") + name + ". " + body + ")";
  }
  if (vars.empty()) return choice % 2 ? "true" : "false";
  if (size > 0 && choice < 7) {
    const std::string l = random_formula(rng, depth, vars, size - 1);
    const std::string r = random_formula(rng, depth, vars, size - 1);
    const char* ops[] = {" & ", " | ", " -> "};
    return "(" + l + ops[choice % 3] + r + ")";
  }
  if (choice == 7) return "!" + random_formula(rng, depth, vars, size - 1);
  switch (pick(rng) % 4) {
    case 0: return "U(" + any_var() + ")";
    case 1: return any_var() + " = " + any_var();
    case 2: return any_var() + " <= " + any_var();
    default: return any_var() + " < " + any_var();
  }
}

}  // namespace

TEST_CASE("parsing the named sentences") {
  const Sentence a = parse("exists x. U(x)");
  CHECK(qdepth(a) == 1);
  CHECK(structurally_equal(a, builtin("A")));
  CHECK(structurally_equal(parse("exists x. U(x) & forall y. !(y < x)"), builtin("B")));
  CHECK(qdepth(builtin("C")) == 3);
  const Sentence consecutive101 = parse(
      "exists x. exists y. exists z. U(x) & !U(y) & U(z) & x < y & y < z & "
      "!(exists w. ((x < w & w < y) | (y < w & w < z)))");
  CHECK(qdepth(consecutive101) == 4);
  CHECK(holds(consecutive101, binary_word("0010100")));
  CHECK_FALSE(holds(consecutive101, binary_word("1001")));
  CHECK(qdepth(builtin("A_2")) == 3);
  CHECK(qdepth(builtin("A_1")) == 1);
  CHECK(qdepth(builtin("D")) == 5);
  CHECK(builtin("A_3").vocabulary() == Vocabulary::circular);
  CHECK(builtin("D").vocabulary() == Vocabulary::linear);
  CHECK(structurally_equal(builtin("A3"), builtin_consecutive(3)));
}

TEST_CASE("syntax errors") {
  CHECK_THROWS_AS(parse("exists x."), SyntaxError);
  CHECK_THROWS_AS(parse("exists x. U(y)"), SyntaxError);
  CHECK_THROWS_AS(parse("exists x. exists y. exists z. x <= y & C(x, y, z)"), SyntaxError);
  CHECK_THROWS_AS(parse("exists x. U(x) &"), SyntaxError);
  CHECK_THROWS_AS(parse("exists U. true"), SyntaxError);
  CHECK_THROWS_AS(parse("exists x. U(x) $"), SyntaxError);
  CHECK_THROWS_AS(builtin("E"), DomainError);
  CHECK_THROWS_AS(builtin("A_0"), DomainError);
  try {
    parse("exists x. U(q)");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 12);
  }
}

TEST_CASE("evaluation examples") {
  CHECK(holds("exists x. U(x)", "0010"));
  CHECK_FALSE(holds("exists x. U(x)", "000"));
  CHECK(holds(builtin("B"), binary_word("100")));
  CHECK_FALSE(holds(builtin("B"), binary_word("010")));
  CHECK(holds(builtin("C"), binary_word("0110")));
  CHECK_FALSE(holds(builtin("C"), binary_word("1010")));
  CHECK(holds(builtin("D"), binary_word("0110101")));
  CHECK_FALSE(holds(builtin("D"), binary_word("1010011")));
  CHECK_FALSE(holds(builtin("D"), binary_word("10001")));
  // 101 at position 1 comes first; a later 11 must not matter.
  CHECK_FALSE(holds(builtin("D"), binary_word("0101110")));
  CHECK(holds("forall x. x = x", ""));
  CHECK_FALSE(holds("exists x. x = x", ""));
  CHECK(holds("exists x. exists y. exists z. C(x, y, z)", "000", true));
  CHECK_FALSE(holds("exists x. exists y. exists z. C(x, y, z)", "00", true));

  const Word w = binary_word("0101");
  CHECK_THROWS_AS(evaluate({w, true}, builtin("D")), MismatchError);
  CHECK_THROWS_AS(evaluate({w, false}, builtin("A_2")), MismatchError);
  const Word big(400, 0);
  CHECK_THROWS_AS(evaluate({big, false}, parse("forall x. forall y. forall z. forall u. !(x = y & y = z & z = u & U(u))"),
                           {.work_cap = 100'000}),
                  GuardError);
}

TEST_CASE("A_2 agrees with C on cycles") {
  // On a cycle, A_2 is "two cyclically adjacent ones"; C is its linear
  // shadow.  They agree on every word whose wrap-around pair is not 1...1.
  const Sentence a2 = builtin("A_2");
  const Sentence c = builtin("C");
  for (const Word& w : all_words(8, 1)) {
    const bool wrap = w.size() >= 2 && w.front() == 1 && w.back() == 1;
    if (!wrap) CHECK(holds(a2, w, true) == holds(c, w));
    else CHECK(holds(a2, w, true));
  }
}

TEST_CASE("printing round-trips") {
  for (const char* name : {"A", "B", "C", "D", "A_1", "A_2", "A_4"}) {
    const Sentence s = builtin(name);
    CHECK(structurally_equal(parse(print(s)), s));
    CHECK(print(parse(print(s))) == print(s));
  }
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> vars;
    const Sentence s = parse(random_formula(rng, 3, vars, 5));
    CHECK(structurally_equal(parse(print(s)), s));
  }
}

TEST_CASE("equivalent words agree on sentences of bounded depth") {
  std::mt19937_64 rng(77);
  for (int t = 1; t <= 3; ++t) {
    TypeStore store(2);
    std::map<EfType, std::vector<Word>> classes;
    for (const Word& w : all_words(t == 3 ? 9 : 8)) classes[store.ef_type(w, t)].push_back(w);
    std::vector<Sentence> sentences;
    while (sentences.size() < 50) {
      std::vector<std::string> vars;
      Sentence s = parse(random_formula(rng, t, vars, 6));
      if (qdepth(s) <= t) sentences.push_back(std::move(s));
    }
    for (const char* name : {"A", "B", "C", "D"}) {
      Sentence s = builtin(name);
      if (qdepth(s) <= t) sentences.push_back(std::move(s));
    }
    for (const auto& [type, words] : classes)
      for (const Sentence& s : sentences) {
        const bool first = holds(s, words.front());
        for (std::size_t i = 1; i < words.size(); i += 7) REQUIRE(holds(s, words[i]) == first);
      }
  }
}

TEST_CASE("circular sentences are rotation invariant") {
  std::mt19937_64 rng(8);
  std::bernoulli_distribution bit(0.5);
  for (int k = 1; k <= 3; ++k) {
    const Sentence s = builtin_consecutive(k);
    for (int trial = 0; trial < 40; ++trial) {
      Word w(1 + trial % 9);
      for (auto& a : w) a = bit(rng);
      const bool base = holds(s, w, true);
      for (std::size_t r = 1; r < w.size(); ++r) CHECK(holds(s, rotate(w, r), true) == base);
    }
  }
}
