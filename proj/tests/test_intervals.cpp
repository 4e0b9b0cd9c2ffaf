#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "zeroone/intervals.hpp"

using namespace zeroone;

namespace {

Word zeros_then_one(std::size_t z) {
  Word w(z, 0);
  w.push_back(1);
  return w;
}

void append(Word& w, const Word& piece) { w.insert(w.end(), piece.begin(), piece.end()); }

Word random_bits(std::mt19937_64& rng, std::size_t n, double p) {
  std::bernoulli_distribution bit(p);
  Word w(n);
  for (auto& a : w) a = bit(rng) ? 1 : 0;
  return w;
}

}  // namespace

TEST_CASE("level 1 values") {
  const ValueSystem vs = ValueSystem::build(2, 1);
  CHECK(vs.s() == 9);
  CHECK(vs.values(1).size() == 10);
  CHECK(vs.transient_values(1).size() == 9);
  REQUIRE(vs.persistent_values(1).size() == 1);
  CHECK(vs.value(1, vs.persistent_values(1)[0]).name == "b");

  const Word w = binary_word("001");
  const Decomposition d = decompose(w, 1, vs);
  REQUIRE(d.intervals.size() == 1);
  CHECK(d.intervals[0].start == 0);
  CHECK(d.intervals[0].end == 3);
  CHECK(vs.value(1, d.intervals[0].value).name == "a3");
  CHECK_FALSE(d.tail);

  const Decomposition none = decompose(binary_word("000"), 1, vs);
  CHECK(none.intervals.empty());
  CHECK(none.tail == 0u);
  CHECK(decompose(Word{}, 1, vs).intervals.empty());
  CHECK_THROWS_AS(decompose(Word{2}, 1, vs), MismatchError);
}

TEST_CASE("a one is a transient interval at every level") {
  const ValueSystem vs = ValueSystem::build(1, 3);
  const Word w = binary_word("0001000");
  for (int j = 1; j <= 3; ++j) {
    const auto iv = vs.interval_at(w, 3, j);
    REQUIRE(iv);
    CHECK(iv->end == 4);
    CHECK_FALSE(vs.value(j, iv->value).persistent);
  }
}

TEST_CASE("level 2 structure") {
  const ValueSystem vs = ValueSystem::build(2, 2);
  // Strings of b collapse at three copies at depth 2, so jb (j < 3) are the
  // transient prefixes and B = 3b is the persistent one.
  CHECK(vs.string_monoid(1).size() == 4);
  CHECK(vs.transient_values(2).size() == 27);
  CHECK(vs.persistent_values(2).size() == 9);
  for (ValueId v : vs.persistent_values(2)) CHECK(vs.value(2, v).name.rfind("B+a", 0) == 0);

  Word w;
  append(w, zeros_then_one(9));
  append(w, zeros_then_one(9));
  append(w, zeros_then_one(1));
  const Decomposition d = decompose(w, 2, vs);
  REQUIRE(d.intervals.size() == 1);
  const Value& v = vs.value(2, d.intervals[0].value);
  CHECK(v.name == "2b+a2");
  CHECK_FALSE(v.persistent);
  CHECK(vs.store().ef_type(w, 2) == v.type);
}

TEST_CASE("value soundness") {
  std::mt19937_64 rng(21);
  const ValueSystem vs2 = ValueSystem::build(2, 2);
  const ValueSystem vs1 = ValueSystem::build(1, 3);
  for (int trial = 0; trial < 30; ++trial) {
    const Word w = random_bits(rng, 400, 0.15);
    for (int j = 1; j <= 2; ++j) {
      const Decomposition d = decompose(w, j, vs2);
      for (const Interval& iv : d.intervals) {
        const auto piece = std::span<const Letter>(w).subspan(iv.start, iv.end - iv.start);
        REQUIRE(vs2.store().fold(piece, 2) == vs2.value(j, iv.value).type);
      }
    }
    const Decomposition d3 = decompose(w, 3, vs1);
    for (const Interval& iv : d3.intervals) {
      const auto piece = std::span<const Letter>(w).subspan(iv.start, iv.end - iv.start);
      REQUIRE(vs1.store().fold(piece, 1) == vs1.value(3, iv.value).type);
    }
  }
  for (int j = 1; j <= 3; ++j)
    for (const Value& v : vs1.values(j)) CHECK(vs1.store().ef_type(v.representative, 1) == v.type);
}

TEST_CASE("decomposition covers a prefix and is deterministic") {
  std::mt19937_64 rng(4);
  const ValueSystem vs = ValueSystem::build(1, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const Word w = random_bits(rng, 300, 0.3);
    for (int j = 1; j <= 3; ++j) {
      const Decomposition d = decompose(w, j, vs);
      std::size_t pos = 0;
      for (const Interval& iv : d.intervals) {
        CHECK(iv.start == pos);
        CHECK(iv.end > iv.start);
        pos = iv.end;
      }
      if (d.tail) CHECK(*d.tail == pos);
      else CHECK(pos == w.size());
      const Decomposition again = decompose(w, j, vs);
      CHECK(again.intervals.size() == d.intervals.size());
    }
  }
}

TEST_CASE("k consecutive ones stop the k-interval") {
  std::mt19937_64 rng(9);
  const ValueSystem vs = ValueSystem::build(1, 3);
  for (int k = 1; k <= 3; ++k)
    for (int trial = 0; trial < 50; ++trial) {
      Word w = random_bits(rng, 60, 0.2);
      const std::size_t at = 30;
      for (int i = 0; i < k; ++i) w[at + i] = 1;
      for (std::size_t start = 0; start <= at; ++start) {
        const auto iv = vs.interval_at(w, start, k);
        REQUIRE(iv);
        CHECK(iv->end <= at + k);
      }
    }
}

TEST_CASE("super intervals") {
  const ValueSystem vs = ValueSystem::build(2, 2);
  auto interval_with_bs = [](int count) {
    Word w;
    for (int i = 0; i < count; ++i) append(w, zeros_then_one(9 + i));
    append(w, zeros_then_one(0));
    return w;
  };
  // Three b's saturate; dropping one leaves 2b, which is transient.
  const Word three = interval_with_bs(3);
  const Decomposition d3 = decompose(three, 2, vs);
  REQUIRE(d3.intervals.size() == 1);
  CHECK(vs.value(2, d3.intervals[0].value).persistent);
  CHECK_FALSE(is_super(d3, 0, three, vs));
  const Word four = interval_with_bs(4);
  CHECK(is_super(decompose(four, 2, vs), 0, four, vs));
  const Word nine = interval_with_bs(9);
  CHECK(is_super(decompose(nine, 2, vs), 0, nine, vs));

  // Level-1 system: the level-1 run itself is inspected only in full scope.
  const ValueSystem one = ValueSystem::build(2, 1);
  Word w = zeros_then_one(9);
  append(w, zeros_then_one(0));
  const Decomposition d = decompose(w, 1, one);
  CHECK(is_super(d, 0, w, one));
  CHECK_FALSE(is_super(d, 0, w, one, SuperScope::full));
  Word many;
  for (int i = 0; i < 5; ++i) append(many, zeros_then_one(10));
  CHECK(is_super(decompose(many, 1, one), 0, many, one, SuperScope::full));
}

TEST_CASE("glue") {
  const ValueSystem vs1 = ValueSystem::build(2, 1);
  const ValueId b = glue(Word(4, 0), zeros_then_one(9), 1, vs1);
  CHECK(vs1.value(1, b).name == "b");
  CHECK(glue(Word{}, zeros_then_one(12), 1, vs1) == b);
  CHECK_THROWS_AS(glue(Word{}, zeros_then_one(2), 1, vs1), DomainError);
  CHECK_THROWS_AS(glue(binary_word("01"), zeros_then_one(9), 1, vs1), DomainError);

  const ValueSystem vs = ValueSystem::build(2, 2);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> count(0, 6), zeros(0, 14), small(0, 8);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Word tail;
    const int nb = count(rng);
    for (int i = 0; i < nb; ++i) append(tail, zeros_then_one(9 + zeros(rng)));
    tail.insert(tail.end(), static_cast<std::size_t>(zeros(rng)), 0);
    Word succ;
    const int ns = 4 + count(rng);
    for (int i = 0; i < ns; ++i) append(succ, zeros_then_one(9 + zeros(rng)));
    append(succ, zeros_then_one(static_cast<std::size_t>(small(rng))));
    const ValueId v = glue(tail, succ, 2, vs);
    CHECK(vs.value(2, v).persistent);
    const Word whole = concat(tail, succ);
    CHECK(decompose(whole, 2, vs).intervals.at(0).value == v);
    ++checked;
  }
  CHECK(checked == 200);
  CHECK(glue(Word{}, [&] {
          Word s;
          for (int i = 0; i < 4; ++i) append(s, zeros_then_one(9));
          append(s, zeros_then_one(0));
          return s;
        }(), 2, vs) == vs.pair_value(2, 3, 0));
}

TEST_CASE("cap exceeded surfaces") {
  CHECK_THROWS_AS(ValueSystem::build(2, 3), CapExceeded);
  const ValueSystem vs = ValueSystem::build(2, 2);
  CHECK_THROWS_AS(vs.string_monoid(2), CapExceeded);
}

TEST_CASE("text outputs") {
  const ValueSystem vs = ValueSystem::build(1, 2);
  std::ostringstream csv;
  const Word w = binary_word("0001100");
  write_decomposition_csv(csv, decompose(w, 1, vs), w, vs);
  CHECK(csv.str() == "start,end,value_id,persistent,super\n0,4,3,1,1\n4,5,0,0,1\n5,7,-,-,-\n");
  std::ostringstream out;
  write_value_system(out, vs);
  CHECK(out.str().find("level 2 values 6 persistent 3 transient 3") != std::string::npos);
}
