#pragma once

// The leveled value system of 0/1 words and the k-interval decomposition.
//
// Level 1: the interval starting at i runs up to and including the next 1.
// Its value is a_m (m-1 zeroes, m <= s) or b (at least s zeroes), s = 3^t;
// b is the only persistent 1-value.
//
// Level j+1: successive j-intervals are taken until the first one with a
// transient value y.  The (j+1)-value is (alpha, y), where alpha is the
// depth-t class of the string of persistent j-values read as a word over
// the alphabet P_j.  (alpha, y) is persistent iff alpha is.
//
// Positions are 0-based and intervals half-open.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zeroone/monoid.hpp"
#include "zeroone/word_types.hpp"

namespace zeroone {

using ValueId = std::uint32_t;

struct Value {
  int level = 1;
  ValueId index = 0;
  bool persistent = false;
  std::size_t zeros = 0;    // level 1: zeroes before the one (b stores s)
  Element prefix = 0;       // level >= 2: alpha, in string_monoid(level - 1)
  ValueId tail = 0;         // level >= 2: y, a transient (level-1)-value
  EfType type;              // depth-t type of every interval with this value
  Word representative;      // an interval realizing the value
  std::string name;
};

struct Interval {
  std::size_t start = 0;
  std::size_t end = 0;
  ValueId value = 0;
};

struct Decomposition {
  int level = 1;
  std::size_t length = 0;
  std::vector<Interval> intervals;
  /// Start of the trailing incomplete interval, if any symbols are left over.
  std::optional<std::size_t> tail;
};

/// Which levels `is_super` inspects.  `internal` checks levels j < K, which
/// only involve the interval itself and are what the glue argument uses.
/// `full` adds level K, read over the run of persistent K-intervals that
/// starts at the interval; it needs the string monoid over P_K.
enum class SuperScope { internal, full };

class ValueSystem {
 public:
  /// Levels 1..k at depth t.  Throws CapExceeded if a string monoid over
  /// some P_j (j < k) outgrows the cap.
  static ValueSystem build(int t, int k, MonoidOptions options = {});

  int depth() const noexcept { return depth_; }
  int levels() const noexcept { return static_cast<int>(values_.size()); }
  std::size_t s() const noexcept { return s_; }

  std::span<const Value> values(int level) const { return values_.at(level - 1); }
  const Value& value(int level, ValueId v) const { return values_.at(level - 1).at(v); }
  const std::vector<ValueId>& persistent_values(int level) const { return persistent_.at(level - 1); }
  const std::vector<ValueId>& transient_values(int level) const { return transient_.at(level - 1); }
  /// Position of a persistent value in the alphabet P_level.
  Letter letter_of(int level, ValueId v) const;
  ValueId value_of_letter(int level, Letter a) const { return persistent_values(level).at(a); }
  Alphabet persistent_alphabet(int level) const;

  /// Depth-t monoid of strings over P_level.  Built eagerly for level < k;
  /// level k is generated on first use (and may throw CapExceeded).
  const Monoid& string_monoid(int level) const;
  ValueId pair_value(int level, Element alpha, ValueId tail) const;

  TypeStore& store() const noexcept { return *store_; }

  /// The level-j interval starting at `start`, or nullopt if the word ends
  /// before it is complete.
  std::optional<Interval> interval_at(std::span<const Letter> w, std::size_t start, int level) const;

 private:
  ValueSystem() = default;

  int depth_ = 0;
  std::size_t s_ = 1;
  MonoidOptions options_;
  std::shared_ptr<TypeStore> store_;
  std::vector<std::vector<Value>> values_;
  std::vector<std::vector<ValueId>> persistent_;
  std::vector<std::vector<ValueId>> transient_;
  std::vector<std::vector<int>> letter_;          // per level: value -> letter or -1
  std::vector<std::vector<ValueId>> transient_pos_;  // per level: value -> slot in T_j
  mutable std::vector<std::shared_ptr<const Monoid>> monoids_;
};

/// Left-to-right decomposition into complete level-j intervals plus tail.
Decomposition decompose(std::span<const Letter> w, int level, const ValueSystem& vs);

bool is_super(const Decomposition& d, std::size_t index, std::span<const Letter> w,
              const ValueSystem& vs, SuperScope scope = SuperScope::internal);
std::vector<bool> super_flags(const Decomposition& d, std::span<const Letter> w,
                              const ValueSystem& vs, SuperScope scope = SuperScope::internal);

/// Value of tail ++ successor, where `tail` is an incomplete level-K
/// interval and `successor` exactly one persistent super level-K interval.
/// Computed by the inductive merge and checked against a direct scan of the
/// concatenation.  Throws DomainError if the preconditions fail.
ValueId glue(std::span<const Letter> tail, std::span<const Letter> successor, int level,
             const ValueSystem& vs);

/// CSV: start,end,value_id,persistent,super.  A trailing incomplete interval
/// is written with "-" in the last three columns.
void write_decomposition_csv(std::ostream& os, const Decomposition& d, std::span<const Letter> w,
                             const ValueSystem& vs);
void write_value_system(std::ostream& os, const ValueSystem& vs);

}  // namespace zeroone
