#include "zeroone/word_types.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace zeroone {

namespace {

constexpr std::uint64_t kIdBits = 28;
constexpr std::uint64_t kIdMask = (std::uint64_t{1} << kIdBits) - 1;

std::uint64_t pack(EfType prefix, Letter a, EfType suffix) {
  return (std::uint64_t{prefix.id} << 36) | (std::uint64_t{a} << 28) |
         std::uint64_t{suffix.id};
}

Split unpack(std::uint64_t v) {
  return Split{EfType{static_cast<std::uint32_t>(v >> 36)},
               static_cast<Letter>((v >> 28) & 0xff),
               EfType{static_cast<std::uint32_t>(v & kIdMask)}};
}

std::size_t pow3(int t) {
  std::size_t r = 1;
  for (int i = 0; i < t; ++i) r *= 3;
  return r;
}

}  // namespace

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw DomainError("alphabet must be nonempty");
  if (symbols_.size() > 256) throw DomainError("alphabet larger than 256 letters");
  auto sorted = symbols_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError("alphabet letters must be distinct");
}

Alphabet Alphabet::binary() { return Alphabet({"0", "1"}); }

Alphabet Alphabet::indexed(std::size_t n, std::string_view prefix) {
  std::vector<std::string> s;
  s.reserve(n);
  for (std::size_t i = 0; i < n; ++i) s.push_back(std::string(prefix) + std::to_string(i));
  return Alphabet(std::move(s));
}

bool Alphabet::contains(std::span<const Letter> w) const noexcept {
  return std::all_of(w.begin(), w.end(), [&](Letter a) { return a < symbols_.size(); });
}

Word binary_word(std::string_view bits) {
  Word w;
  w.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1')
      throw DomainError(std::string("not a binary digit: '") + c + "'");
    w.push_back(static_cast<Letter>(c - '0'));
  }
  return w;
}

std::string to_string(std::span<const Letter> w, const Alphabet& alphabet) {
  bool single = std::all_of(alphabet.symbols().begin(), alphabet.symbols().end(),
                            [](const std::string& s) { return s.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!single && i > 0) out += ' ';
    out += alphabet.symbol(w[i]);
  }
  return out;
}

Word concat(std::span<const Letter> u, std::span<const Letter> v) {
  Word w(u.begin(), u.end());
  w.insert(w.end(), v.begin(), v.end());
  return w;
}

Word reversed(std::span<const Letter> w) { return Word(w.rbegin(), w.rend()); }

// ---------------------------------------------------------------------------

std::size_t TypeStore::KeyHash::operator()(
    const std::vector<std::uint64_t>& key) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ key.size();
  for (std::uint64_t v : key) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xbf58476d1ce4e5b9ULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 31));
}

TypeStore::TypeStore(std::size_t alphabet_size) : alphabet_size_(alphabet_size) {
  if (alphabet_size == 0 || alphabet_size > 256)
    throw DomainError("alphabet size must be in [1, 256]");
  std::vector<std::uint64_t> unit;
  intern(0, unit, {});
}

const TypeStore::Node& TypeStore::node(EfType x) const {
  if (x.id >= nodes_.size()) throw DomainError("type id not in this store");
  return nodes_[x.id];
}

std::span<const Split> TypeStore::body(EfType x) const {
  const Node& n = node(x);
  return {arena_.data() + n.body_offset, n.body_size};
}

void TypeStore::check_word(std::span<const Letter> w) const {
  for (Letter a : w)
    if (a >= alphabet_size_) throw MismatchError("letter outside the store's alphabet");
}

void TypeStore::offer_representative(EfType x, std::span<const Letter> w) {
  Word& rep = nodes_[x.id].representative;
  if (w.size() < rep.size()) rep.assign(w.begin(), w.end());
}

EfType TypeStore::intern(int depth, std::vector<std::uint64_t>& packed,
                         std::span<const Letter> representative) {
  std::sort(packed.begin(), packed.end());
  packed.erase(std::unique(packed.begin(), packed.end()), packed.end());
  std::vector<std::uint64_t> key;
  key.reserve(packed.size() + 1);
  key.push_back(static_cast<std::uint64_t>(depth));
  key.insert(key.end(), packed.begin(), packed.end());

  if (auto it = index_.find(key); it != index_.end()) {
    EfType x{it->second};
    offer_representative(x, representative);
    return x;
  }
  if (nodes_.size() >= kIdMask) throw CapExceeded("type store", nodes_.size());
  EfType x{static_cast<std::uint32_t>(nodes_.size())};
  Node n;
  n.depth = depth;
  n.body_offset = static_cast<std::uint32_t>(arena_.size());
  n.body_size = static_cast<std::uint32_t>(packed.size());
  n.representative.assign(representative.begin(), representative.end());
  for (std::uint64_t v : packed) arena_.push_back(unpack(v));
  nodes_.push_back(std::move(n));
  parent_.push_back(UINT32_MAX);
  index_.emplace(std::move(key), x.id);
  return x;
}

EfType TypeStore::empty(int depth) {
  if (depth < 0) throw DomainError("depth must be >= 0");
  std::vector<std::uint64_t> none;
  return intern(depth, none, {});
}

EfType TypeStore::letter(Letter a, int depth) {
  Word w{a};
  return ef_type(w, depth);
}

EfType TypeStore::ef_type(std::span<const Letter> w, int depth) {
  if (depth < 0) throw DomainError("depth must be >= 0");
  check_word(w);
  const std::uint64_t n = w.size();
  std::unordered_map<std::uint64_t, std::uint32_t> memo;

  // Type of w[i, j) at depth e.
  std::function<EfType(int, std::uint64_t, std::uint64_t)> interval =
      [&](int e, std::uint64_t i, std::uint64_t j) -> EfType {
    if (e == 0) return EfType{0};
    const std::uint64_t key = (static_cast<std::uint64_t>(e) * (n + 1) + i) * (n + 1) + j;
    if (auto it = memo.find(key); it != memo.end()) return EfType{it->second};
    std::vector<std::uint64_t> packed;
    packed.reserve(j - i);
    for (std::uint64_t m = i; m < j; ++m)
      packed.push_back(pack(interval(e - 1, i, m), w[m], interval(e - 1, m + 1, j)));
    EfType x = intern(e, packed, w.subspan(i, j - i));
    memo.emplace(key, x.id);
    return x;
  };
  return interval(depth, 0, n);
}

EfType TypeStore::fold(std::span<const Letter> w, int depth) {
  check_word(w);
  EfType x = empty(depth);
  std::vector<EfType> letters(alphabet_size_, EfType{UINT32_MAX});
  for (Letter a : w) {
    if (letters[a].id == UINT32_MAX) letters[a] = letter(a, depth);
    x = compose(x, letters[a]);
  }
  offer_representative(x, w);
  return x;
}

EfType TypeStore::truncate(EfType x, int depth) {
  const int d = this->depth(x);
  if (depth > d) throw MismatchError("cannot truncate a type to a larger depth");
  if (depth < 0) throw DomainError("depth must be >= 0");
  while (this->depth(x) > depth) {
    if (parent_[x.id] == UINT32_MAX) {
      const int e = this->depth(x);
      EfType p{0};
      if (e > 1) {
        std::vector<Split> splits(body(x).begin(), body(x).end());
        std::vector<std::uint64_t> packed;
        packed.reserve(splits.size());
        for (const Split& s : splits)
          packed.push_back(pack(truncate(s.prefix, e - 2), s.letter, truncate(s.suffix, e - 2)));
        Word rep = nodes_[x.id].representative;
        p = intern(e - 1, packed, rep);
      }
      parent_[x.id] = p.id;
    }
    x = EfType{parent_[x.id]};
  }
  return x;
}

EfType TypeStore::compose(EfType x, EfType y) {
  const int d = depth(x);
  if (depth(y) != d) throw MismatchError("compose: depth mismatch");
  if (d == 0) return x;
  const std::uint64_t key = (std::uint64_t{x.id} << 32) | y.id;
  if (auto it = compose_memo_.find(key); it != compose_memo_.end()) return EfType{it->second};

  const EfType xt = truncate(x, d - 1);
  const EfType yt = truncate(y, d - 1);
  const std::vector<Split> xs(body(x).begin(), body(x).end());
  const std::vector<Split> ys(body(y).begin(), body(y).end());
  std::vector<std::uint64_t> packed;
  packed.reserve(xs.size() + ys.size());
  for (const Split& s : xs) packed.push_back(pack(s.prefix, s.letter, compose(s.suffix, yt)));
  for (const Split& s : ys) packed.push_back(pack(compose(xt, s.prefix), s.letter, s.suffix));
  const Word rep = concat(nodes_[x.id].representative, nodes_[y.id].representative);
  EfType z = intern(d, packed, rep);
  compose_memo_.emplace(key, z.id);
  return z;
}

EfType TypeStore::power(EfType x, std::size_t j) {
  EfType result = empty(depth(x));
  EfType base = x;
  while (j > 0) {
    if (j & 1) result = compose(result, base);
    j >>= 1;
    if (j > 0) base = compose(base, base);
  }
  return result;
}

std::string TypeStore::serialize(EfType x) {
  if (auto it = text_.find(x.id); it != text_.end()) return it->second;
  std::string out;
  if (depth(x) == 0) {
    out = ".";
  } else {
    const std::vector<Split> splits(body(x).begin(), body(x).end());
    std::vector<std::string> parts;
    parts.reserve(splits.size());
    for (const Split& s : splits)
      parts.push_back("(" + serialize(s.prefix) + " " + std::to_string(s.letter) + " " +
                      serialize(s.suffix) + ")");
    std::sort(parts.begin(), parts.end());
    out = "{";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i > 0) out += ",";
      out += parts[i];
    }
    out += "}";
  }
  text_.emplace(x.id, out);
  return out;
}

bool ef_equivalent(TypeStore& store, std::span<const Letter> w1,
                   std::span<const Letter> w2, int depth) {
  return store.ef_type(w1, depth) == store.ef_type(w2, depth);
}

std::size_t power_collapse_index(TypeStore& store, EfType x) {
  const std::size_t bound = pow3(store.depth(x));
  std::vector<EfType> powers(2 * bound + 2);
  powers[0] = store.empty(store.depth(x));
  for (std::size_t j = 1; j < powers.size(); ++j) powers[j] = store.compose(powers[j - 1], x);
  for (std::size_t s = 1; s <= bound; ++s) {
    bool stable = true;
    for (std::size_t j = s; j <= s + bound && stable; ++j) stable = powers[j] == powers[s];
    if (stable) return s;
  }
  throw std::logic_error("power sequence did not collapse within 3^t");
}

// ---------------------------------------------------------------------------

namespace {

bool consistent(const GameState& g, std::size_t i, std::size_t j) {
  if (g.left[i] != g.right[j]) return false;
  for (std::size_t q = 0; q < g.left_picks.size(); ++q) {
    if ((g.left_picks[q] < i) != (g.right_picks[q] < j)) return false;
    if ((g.left_picks[q] == i) != (g.right_picks[q] == j)) return false;
  }
  return true;
}

}  // namespace

bool duplicator_wins(GameState& g) {
  if (g.left_picks.size() != g.right_picks.size())
    throw DomainError("game state: pick lists differ in length");
  if (g.rounds_left <= 0) return true;
  for (int side = 0; side < 2; ++side) {
    const std::size_t spoiler_len = side == 0 ? g.left.size() : g.right.size();
    const std::size_t reply_len = side == 0 ? g.right.size() : g.left.size();
    for (std::size_t x = 0; x < spoiler_len; ++x) {
      bool answered = false;
      for (std::size_t y = 0; y < reply_len && !answered; ++y) {
        const std::size_t i = side == 0 ? x : y;
        const std::size_t j = side == 0 ? y : x;
        if (!consistent(g, i, j)) continue;
        g.left_picks.push_back(i);
        g.right_picks.push_back(j);
        --g.rounds_left;
        answered = duplicator_wins(g);
        ++g.rounds_left;
        g.left_picks.pop_back();
        g.right_picks.pop_back();
      }
      if (!answered) return false;
    }
  }
  return true;
}

bool game_oracle(std::span<const Letter> w1, std::span<const Letter> w2, int rounds,
                 const GameGuard& guard) {
  if (rounds < 0) throw DomainError("rounds must be >= 0");
  if (w1.size() + w2.size() > guard.max_total_length)
    throw GuardError("game_oracle: combined length " + std::to_string(w1.size() + w2.size()) +
                     " exceeds guard " + std::to_string(guard.max_total_length));
  if (rounds > guard.max_rounds)
    throw GuardError("game_oracle: " + std::to_string(rounds) + " rounds exceeds guard " +
                     std::to_string(guard.max_rounds));
  GameState g{w1, w2, {}, {}, rounds};
  return duplicator_wins(g);
}

}  // namespace zeroone
