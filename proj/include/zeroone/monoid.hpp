#pragma once

// The finite monoid of depth-t types of words over an alphabet.
//
// Elements are numbered in breadth-first discovery order from the identity,
// extending by one letter on the right at a time, so element i's
// representative is a shortest word of its class and the numbering depends
// only on the alphabet order and the depth.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zeroone/word_types.hpp"

namespace zeroone {

using Element = std::uint32_t;

struct MonoidOptions {
  std::size_t cap = 50'000;
  /// Monoids up to this size keep the full multiplication table; larger
  /// ones multiply by walking the right Cayley graph.
  std::size_t full_table_limit = 4096;
};

class Monoid {
 public:
  /// Breadth-first closure from O under right multiplication by letters.
  /// Throws CapExceeded if more than `options.cap` elements appear.
  static Monoid generate(const Alphabet& alphabet, int depth, MonoidOptions options = {});

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return types_.size(); }
  Element identity() const noexcept { return 0; }
  Element generator(Letter a) const { return generators_.at(a); }
  const std::vector<Element>& generators() const noexcept { return generators_; }

  EfType type(Element x) const { return types_.at(x); }
  const Word& representative(Element x) const { return representatives_.at(x); }
  TypeStore& store() const noexcept { return *store_; }
  std::shared_ptr<TypeStore> shared_store() const noexcept { return store_; }

  Element right(Element x, Letter a) const { return right_[x * alphabet_.size() + a]; }
  Element left(Letter a, Element x) const { return left_[x * alphabet_.size() + a]; }
  Element multiply(Element x, Element y) const;
  /// Class of a word, by walking the right Cayley graph from O.
  Element classify(std::span<const Letter> w) const;
  /// Looks an interned type up among the elements.
  std::optional<Element> find(EfType x) const;

  bool has_full_table() const noexcept { return !table_.empty(); }

  /// Property (1) as computed from the right Cayley graph: x lies in a
  /// strongly connected component with no outgoing edges.
  bool persistent(Element x) const { return persistent_.at(x); }
  std::vector<Element> persistent_elements() const;

 private:
  Monoid() = default;

  Alphabet alphabet_{{"0"}};
  int depth_ = 0;
  std::shared_ptr<TypeStore> store_;
  std::vector<EfType> types_;
  std::vector<Word> representatives_;
  std::vector<Element> generators_;
  std::vector<Element> right_;
  std::vector<Element> left_;
  std::vector<Element> parent_;
  std::vector<Letter> last_letter_;
  std::vector<Element> table_;
  std::vector<bool> persistent_;
  std::vector<std::pair<std::uint32_t, Element>> lookup_;  // sorted (type id, element)
};

/// Property (1) evaluated directly by quantifying over the table.
bool is_persistent(const Monoid& m, Element x);

struct PersistenceReport {
  /// Per element: properties (1), (2), (3) evaluated independently.
  std::vector<std::array<bool, 3>> properties;
  /// Elements where the three properties disagree (expected empty).
  std::vector<Element> disagreements;
};

/// Exhaustive check of the three persistence properties.  O(|M|^3) in the
/// worst case; intended for monoids with a full table.
PersistenceReport check_persistence_equivalence(const Monoid& m);

struct PrefixSuffixWitness {
  Element prefix = 0;
  Element suffix = 0;
};

/// (p, s) with p + y + s = x for every y.  Throws DomainError if x is
/// transient.  Uses the constructive route through an element u minimizing
/// |R_x + u|, falling back to an exhaustive pair search.
PrefixSuffixWitness prefix_suffix_witness(const Monoid& m, Element x);
bool verify_witness(const Monoid& m, Element x, const PrefixSuffixWitness& w);

struct GreenClasses {
  std::vector<std::vector<Element>> r_classes;
  std::vector<std::vector<Element>> l_classes;
  /// Per element: index of its R-/L-class, or -1 for transient elements.
  std::vector<int> r_of;
  std::vector<int> l_of;
  /// intersection[r][l] is the unique element of R_r and L_l.
  std::vector<std::vector<Element>> intersection;
};

/// Partitions the persistent elements.  Throws std::logic_error if some
/// R_x and L_y do not meet in exactly one element.
GreenClasses green_classes(const Monoid& m);

/// Deterministic text export: elements, representatives, flags, classes and
/// (when available) the multiplication table.
void write_monoid(std::ostream& os, const Monoid& m, bool with_types = false);

}  // namespace zeroone
