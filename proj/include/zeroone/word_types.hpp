#pragma once

// Depth-t Ehrenfeucht types of finite words.
//
// A depth-0 type is a single unit class.  A depth-d type (d >= 1) is the set
// of triples (depth-(d-1) type of the prefix, letter, depth-(d-1) type of the
// suffix) taken over every split position of the word.  Two words have the
// same depth-d type iff Duplicator wins the d-round game on them, so the
// triple set is a canonical form for the class.
//
// Types are interned inside a TypeStore; equal classes get equal ids.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "zeroone/error.hpp"

namespace zeroone {

using Letter = std::uint16_t;
using Word = std::vector<Letter>;

/// Ordered finite set of symbols.  Letters are indices into the set.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols);

  static Alphabet binary();
  /// Symbols "0" .. "n-1".
  static Alphabet indexed(std::size_t n, std::string_view prefix = "");

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& symbol(Letter a) const { return symbols_.at(a); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  bool contains(std::span<const Letter> w) const noexcept;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> symbols_;
};

/// Parses a string of '0'/'1' characters.
Word binary_word(std::string_view bits);
std::string to_string(std::span<const Letter> w, const Alphabet& alphabet);

Word concat(std::span<const Letter> u, std::span<const Letter> v);
Word reversed(std::span<const Letter> w);

/// Handle to an interned type.  Only meaningful together with its store.
struct EfType {
  std::uint32_t id = 0;
  friend auto operator<=>(const EfType&, const EfType&) = default;
};

/// One split position of a word: prefix class, letter, suffix class.
struct Split {
  EfType prefix;
  Letter letter = 0;
  EfType suffix;
  friend auto operator<=>(const Split&, const Split&) = default;
};

/// Interning store for the depth-t types of one alphabet.
///
/// All queries are deterministic.  The store caches compositions and
/// truncations, so it is not safe to share one store between threads.
class TypeStore {
 public:
  explicit TypeStore(std::size_t alphabet_size);

  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  /// Number of interned types over all depths.
  std::size_t size() const noexcept { return nodes_.size(); }

  /// Class of the empty word (the identity O).
  EfType empty(int depth);
  EfType letter(Letter a, int depth);

  /// Type computed from the split-set definition, memoized over subword
  /// intervals.  O(depth * |w|^3) time.
  EfType ef_type(std::span<const Letter> w, int depth);
  /// Type computed by folding `compose` over the letters.  O(|w|) lookups
  /// once the store is warm; use this for long words.
  EfType fold(std::span<const Letter> w, int depth);

  EfType compose(EfType x, EfType y);
  /// j-fold sum x + ... + x, with 0 * x = O.
  EfType power(EfType x, std::size_t j);
  /// Projects a depth-d type to depth `depth` <= d.
  EfType truncate(EfType x, int depth);

  int depth(EfType x) const { return node(x).depth; }
  std::span<const Split> body(EfType x) const;
  /// Shortest word seen so far in the class.
  const Word& representative(EfType x) const { return node(x).representative; }

  /// Canonical text form.  Grammar:
  ///   type  := "." | "{" [ split { "," split } ] "}"
  ///   split := "(" type " " letter " " type ")"
  /// where "." is the depth-0 class, letters are decimal indices and the
  /// splits of a body are sorted by their own text.  Equal classes print
  /// identically regardless of interning order.
  std::string serialize(EfType x);

 private:
  struct Node {
    int depth = 0;
    std::uint32_t body_offset = 0;
    std::uint32_t body_size = 0;
    Word representative;
  };

  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint64_t>& key) const noexcept;
  };

  const Node& node(EfType x) const;
  EfType intern(int depth, std::vector<std::uint64_t>& packed,
                std::span<const Letter> representative);
  void offer_representative(EfType x, std::span<const Letter> w);
  void check_word(std::span<const Letter> w) const;

  std::size_t alphabet_size_;
  std::vector<Node> nodes_;
  std::vector<Split> arena_;
  std::unordered_map<std::vector<std::uint64_t>, std::uint32_t, KeyHash> index_;
  std::unordered_map<std::uint64_t, std::uint32_t> compose_memo_;
  std::vector<std::uint32_t> parent_;  // truncation to depth - 1
  std::unordered_map<std::uint32_t, std::string> text_;
};

/// True iff the words have the same depth-t type.
bool ef_equivalent(TypeStore& store, std::span<const Letter> w1,
                   std::span<const Letter> w2, int depth);

/// Minimal s such that j*x = s*x for every s <= j <= s + 3^t, searched over
/// s <= 3^t.
std::size_t power_collapse_index(TypeStore& store, EfType x);

/// Size limits for the exhaustive game solver.
struct GameGuard {
  std::size_t max_total_length = 24;
  int max_rounds = 3;
};

/// Position of an explicit game: the words, the indices picked so far in
/// each word and the number of rounds left.
struct GameState {
  std::span<const Letter> left;
  std::span<const Letter> right;
  std::vector<std::size_t> left_picks;
  std::vector<std::size_t> right_picks;
  int rounds_left = 0;
};

/// Exhaustive minimax over the t-round Ehrenfeucht game.  Returns true iff
/// Duplicator has a winning strategy.  Independent of TypeStore.
bool game_oracle(std::span<const Letter> w1, std::span<const Letter> w2,
                 int rounds, const GameGuard& guard = {});

/// Solves the game from an arbitrary legal position.
bool duplicator_wins(GameState& state);

}  // namespace zeroone
