#include "zeroone/cycles.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace zeroone {

namespace {

CircularType normalized(int t, std::vector<EfType> types) {
  std::sort(types.begin(), types.end());
  types.erase(std::unique(types.begin(), types.end()), types.end());
  return CircularType{t, std::move(types)};
}

}  // namespace

Word rotate(std::span<const Letter> cycle, std::size_t r) {
  if (cycle.empty()) return {};
  r %= cycle.size();
  Word out(cycle.begin() + static_cast<std::ptrdiff_t>(r), cycle.end());
  out.insert(out.end(), cycle.begin(), cycle.begin() + static_cast<std::ptrdiff_t>(r));
  return out;
}

CircularType circular_type(TypeStore& store, std::span<const Letter> cycle, int t) {
  if (cycle.empty()) throw DomainError("a cycle needs at least one position");
  const std::size_t n = cycle.size();
  // prefix[i] = type of c[0, i), suffix[i] = type of c[i, n).
  std::vector<EfType> prefix(n + 1), suffix(n + 1);
  std::vector<EfType> letters;
  for (Letter a = 0; a < store.alphabet_size(); ++a) letters.push_back(store.letter(a, t));
  prefix[0] = suffix[n] = store.empty(t);
  for (std::size_t i = 0; i < n; ++i) {
    if (cycle[i] >= letters.size()) throw MismatchError("letter outside the store's alphabet");
    prefix[i + 1] = store.compose(prefix[i], letters[cycle[i]]);
  }
  for (std::size_t i = n; i-- > 0;) suffix[i] = store.compose(letters[cycle[i]], suffix[i + 1]);
  std::vector<EfType> types;
  types.reserve(n);
  for (std::size_t i = 0; i < n; ++i) types.push_back(store.compose(suffix[i], prefix[i]));
  return normalized(t, std::move(types));
}

CircularType circular_type_direct(TypeStore& store, std::span<const Letter> cycle, int t) {
  if (cycle.empty()) throw DomainError("a cycle needs at least one position");
  std::vector<EfType> types;
  for (std::size_t r = 0; r < cycle.size(); ++r) types.push_back(store.ef_type(rotate(cycle, r), t));
  return normalized(t, std::move(types));
}

std::vector<std::string> serialize(TypeStore& store, const CircularType& c) {
  std::vector<std::string> out;
  for (EfType x : c.types) out.push_back(store.serialize(x));
  std::sort(out.begin(), out.end());
  return out;
}

UniversalSequence universal_sequence(const Monoid& m, SuffixReading reading) {
  UniversalSequence r;
  for (Element x : m.persistent_elements()) {
    const PrefixSuffixWitness w = prefix_suffix_witness(m, x);
    if (!verify_witness(m, x, w)) throw std::logic_error("universal_sequence: bad witness");
    const Word& p = m.representative(w.prefix);
    const Word& s = m.representative(w.suffix);
    r.elements.push_back(x);
    r.witnesses.push_back(w);
    r.block_start.push_back(r.word.size());
    if (reading == SuffixReading::suffix_first) r.word.insert(r.word.end(), s.begin(), s.end());
    else r.word.insert(r.word.end(), s.rbegin(), s.rend());
    r.prefix_start.push_back(r.word.size());
    r.word.insert(r.word.end(), p.begin(), p.end());
  }
  return r;
}

std::optional<std::vector<std::size_t>> wrap_cuts(std::span<const Letter> cycle, int level,
                                                  const ValueSystem& vs) {
  const Decomposition d = decompose(cycle, level, vs);
  if (d.intervals.empty()) return std::nullopt;
  std::vector<std::size_t> cuts;
  if (!d.tail) cuts.push_back(0);
  for (std::size_t i = 1; i < d.intervals.size(); ++i) cuts.push_back(d.intervals[i].start);
  if (d.tail) cuts.push_back(*d.tail);
  return cuts;
}

CircularType circular_value_from_decomposition(TypeStore& store, std::span<const Letter> cycle,
                                               std::span<const std::size_t> cuts, int t) {
  if (t < 1) throw DomainError("circular_value_from_decomposition needs t >= 1");
  const std::size_t n = cycle.size();
  if (cuts.empty()) throw DomainError("cover mismatch: no intervals");
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (cuts[i] >= n) throw DomainError("cover mismatch: cut outside the cycle");
    if (i > 0 && cuts[i] <= cuts[i - 1]) throw DomainError("cover mismatch: cuts must increase");
  }

  // Depth-(t+1) types of the intervals become the letters of a value cycle.
  const std::size_t r = cuts.size();
  std::vector<EfType> interval_type(r);
  for (std::size_t i = 0; i < r; ++i) {
    const std::size_t start = cuts[i];
    const std::size_t end = i + 1 < r ? cuts[i + 1] : cuts[0] + n;
    Word piece;
    for (std::size_t q = start; q < end; ++q) piece.push_back(cycle[q % n]);
    interval_type[i] = store.fold(piece, t + 1);
  }
  std::map<EfType, Letter> letter_of;
  std::vector<EfType> letter_type;
  Word value_cycle;
  for (EfType b : interval_type) {
    auto [it, fresh] = letter_of.emplace(b, static_cast<Letter>(letter_type.size()));
    if (fresh) letter_type.push_back(b);
    value_cycle.push_back(it->second);
  }
  if (letter_type.size() > 256) throw GuardError("too many distinct interval types");

  TypeStore values(letter_type.size());
  const CircularType theta = circular_type(values, value_cycle, t + 1);

  // A rotation starting inside interval b at the split (P, a, S) has type
  // a + S + sigma + P, where sigma sums the depth-t types of the intervals
  // after b; theta's representative fixes b and sigma.
  std::vector<EfType> out;
  for (EfType th : theta.types) {
    const Word& rep = values.representative(th);
    if (rep.empty()) throw std::logic_error("rotation class without a representative");
    EfType sigma = store.empty(t);
    for (std::size_t i = 1; i < rep.size(); ++i)
      sigma = store.compose(sigma, store.truncate(letter_type[rep[i]], t));
    const std::vector<Split> splits(store.body(letter_type[rep[0]]).begin(),
                                    store.body(letter_type[rep[0]]).end());
    for (const Split& s : splits) {
      const EfType head = store.compose(store.letter(s.letter, t), s.suffix);
      out.push_back(store.compose(store.compose(head, sigma), s.prefix));
    }
  }
  return normalized(t, std::move(out));
}

}  // namespace zeroone
