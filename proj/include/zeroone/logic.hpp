#pragma once

// First-order sentences about a unary predicate U on [n], either with the
// linear order (<=) or with the cyclic order C(x, y, z).
//
// Grammar (whitespace-insensitive; docs/grammar.md has the full EBNF):
//
//   formula     := quantified | implication
//   quantified  := ("exists" | "forall") ident "." formula
//   implication := disjunction [ "->" formula ]
//   disjunction := conjunction { "|" conjunction }
//   conjunction := unary { "&" unary }
//   unary       := "!" unary | quantified | primary
//   primary     := "(" formula ")" | "true" | "false" | "U" "(" ident ")"
//                | "C" "(" ident "," ident "," ident ")"
//                | ident ( "=" | "<=" | "<" ) ident
//
// A quantifier's scope extends as far right as possible.  x < y is sugar
// for (x <= y & !x = y).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zeroone/error.hpp"
#include "zeroone/word_types.hpp"

namespace zeroone {

/// `neutral` sentences use neither <= nor C and make sense on both views.
enum class Vocabulary { neutral, linear, circular };

std::string to_string(Vocabulary v);

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

enum class Op : std::uint8_t { exists, forall, and_, or_, not_, implies, eq, le, cyc, pred, truth, falsity };

struct Node {
  Op op = Op::truth;
  int left = -1;   // first child
  int right = -1;  // second child (binary connectives)
  int var = -1;    // slot bound by a quantifier
  int args[3] = {-1, -1, -1};  // slots read by an atom
  std::size_t begin = 0, end = 0;  // source span
};

class Sentence {
 public:
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  int root() const noexcept { return root_; }
  Vocabulary vocabulary() const noexcept { return vocabulary_; }
  const std::string& variable(int slot) const { return names_.at(slot); }
  std::size_t slots() const noexcept { return names_.size(); }
  /// Slots occurring free below each node (sorted).
  const std::vector<int>& free_slots(int node) const { return free_.at(node); }

 private:
  friend class Parser;
  std::vector<Node> nodes_;
  int root_ = -1;
  Vocabulary vocabulary_ = Vocabulary::neutral;
  std::vector<std::string> names_;
  std::vector<std::vector<int>> free_;
};

Sentence parse(std::string_view text);
std::string print(const Sentence& s);
/// Same tree shape, operators, binding structure and variable names.
bool structurally_equal(const Sentence& a, const Sentence& b);
int qdepth(const Sentence& s);

/// A word viewed as a structure on [n]: U(i) iff letter i is 1, with the
/// linear order or the cyclic order.
struct ModelView {
  std::span<const Letter> word;
  bool circular = false;
};

struct EvalOptions {
  std::uint64_t work_cap = 200'000'000;
};

bool evaluate(const ModelView& m, const Sentence& s, const EvalOptions& opt = {});

/// Named sentences: "A", "B", "C", "D" and "A_k" (also "Ak") with k >= 1.
Sentence builtin(std::string_view name);
Sentence builtin_consecutive(int k);
/// Text of a built-in, before parsing.
std::string builtin_text(std::string_view name);

}  // namespace zeroone
