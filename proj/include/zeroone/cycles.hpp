#pragma once

// Cycles a_1 ... a_u with a_1 following a_u.
//
// A first move on a cycle cuts it into the linear word starting there, so
// the (t+1)-move circular type is the set of depth-t types of all
// rotations.  The API takes the linear depth t throughout.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zeroone/intervals.hpp"
#include "zeroone/monoid.hpp"
#include "zeroone/word_types.hpp"

namespace zeroone {

struct CircularType {
  int depth = 0;
  std::vector<EfType> types;  // sorted, deduplicated; ids of one store
  friend bool operator==(const CircularType&, const CircularType&) = default;
};

Word rotate(std::span<const Letter> cycle, std::size_t r);

/// Rotation types via prefix/suffix folds: O(|c|) compositions.
CircularType circular_type(TypeStore& store, std::span<const Letter> cycle, int t);
/// Same set, typing every rotation from scratch.  For cross-checks.
CircularType circular_type_direct(TypeStore& store, std::span<const Letter> cycle, int t);
/// Sorted canonical serializations; comparable across stores.
std::vector<std::string> serialize(TypeStore& store, const CircularType& c);

/// How the suffix witness enters a block of R.
enum class SuffixReading {
  /// Block = S_x followed by P_x.  The rotation starting at P_x then reads
  /// P_x ... S_x and has type p_x + y + s_x = x.
  suffix_first,
  /// Block = reverse(S_x) followed by P_x (letters of S_x reversed).
  letters_reversed,
};

struct UniversalSequence {
  Word word;
  std::vector<Element> elements;         // persistent x, in discovery order
  std::vector<PrefixSuffixWitness> witnesses;
  std::vector<std::size_t> block_start;  // start of x's block in `word`
  std::vector<std::size_t> prefix_start; // start of the P_x part
};

UniversalSequence universal_sequence(const Monoid& m,
                                     SuffixReading reading = SuffixReading::suffix_first);

/// Cut points of the wrap-around decomposition: complete level-K intervals
/// from position 0, with the trailing incomplete interval glued onto the
/// first one across the end.  nullopt when no interval completes at all.
std::optional<std::vector<std::size_t>> wrap_cuts(std::span<const Letter> cycle, int level,
                                                  const ValueSystem& vs);

/// Circular type of a 0/1 cycle predicted from its cover by intervals
/// [cuts[i], cuts[i+1]) (the last one wrapping).  Only the depth-(t+1)
/// types of the intervals and the circular type of the cycle of those
/// values are used.  Requires t >= 1.
CircularType circular_value_from_decomposition(TypeStore& store, std::span<const Letter> cycle,
                                               std::span<const std::size_t> cuts, int t);

}  // namespace zeroone
