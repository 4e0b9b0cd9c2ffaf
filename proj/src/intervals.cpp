#include "zeroone/intervals.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace zeroone {

namespace {

std::size_t pow3(int t) {
  std::size_t s = 1;
  for (int i = 0; i < t; ++i) s *= 3;
  return s;
}

std::string prefix_name(const ValueSystem& vs, int level, Element alpha) {
  // level is the level of the pair value; alpha lives over P_{level-1}.
  const Monoid& m = vs.string_monoid(level - 1);
  if (alpha == m.identity()) return "O";
  if (level == 2) {
    if (m.persistent(alpha)) return "B";
    return std::to_string(m.representative(alpha).size()) + "b";
  }
  std::string out = "[";
  const Word& rep = m.representative(alpha);
  for (std::size_t i = 0; i < rep.size(); ++i) {
    if (i) out += ' ';
    out += vs.value(level - 1, vs.value_of_letter(level - 1, rep[i])).name;
  }
  return out + "]";
}

}  // namespace

ValueSystem ValueSystem::build(int t, int k, MonoidOptions options) {
  if (t < 0) throw DomainError("depth must be >= 0");
  if (k < 1) throw DomainError("value system needs at least one level");
  ValueSystem vs;
  vs.depth_ = t;
  vs.s_ = pow3(t);
  vs.options_ = options;
  vs.store_ = std::make_shared<TypeStore>(2);
  vs.monoids_.resize(k);

  auto finish_level = [&](std::vector<Value> level_values) {
    std::vector<ValueId> pers, trans;
    std::vector<int> letter(level_values.size(), -1);
    std::vector<ValueId> slot(level_values.size(), 0);
    for (const Value& v : level_values) {
      if (v.persistent) {
        letter[v.index] = static_cast<int>(pers.size());
        pers.push_back(v.index);
      } else {
        slot[v.index] = static_cast<ValueId>(trans.size());
        trans.push_back(v.index);
      }
    }
    vs.values_.push_back(std::move(level_values));
    vs.persistent_.push_back(std::move(pers));
    vs.transient_.push_back(std::move(trans));
    vs.letter_.push_back(std::move(letter));
    vs.transient_pos_.push_back(std::move(slot));
  };

  std::vector<Value> first;
  for (std::size_t z = 0; z <= vs.s_; ++z) {
    Value v;
    v.level = 1;
    v.index = static_cast<ValueId>(z);
    v.zeros = z;
    v.persistent = z == vs.s_;
    v.representative.assign(z, 0);
    v.representative.push_back(1);
    v.type = vs.store_->fold(v.representative, t);
    v.name = v.persistent ? "b" : "a" + std::to_string(z + 1);
    first.push_back(std::move(v));
  }
  finish_level(std::move(first));

  for (int j = 1; j < k; ++j) {
    vs.monoids_[j - 1] = std::make_shared<const Monoid>(
        Monoid::generate(vs.persistent_alphabet(j), t, options));
    const Monoid& m = *vs.monoids_[j - 1];
    std::vector<Value> next;
    for (Element alpha = 0; alpha < m.size(); ++alpha) {
      Word prefix_word;
      for (Letter a : m.representative(alpha)) {
        const Word& piece = vs.value(j, vs.value_of_letter(j, a)).representative;
        prefix_word.insert(prefix_word.end(), piece.begin(), piece.end());
      }
      for (ValueId y : vs.transient_values(j)) {
        Value v;
        v.level = j + 1;
        v.index = static_cast<ValueId>(next.size());
        v.prefix = alpha;
        v.tail = y;
        v.persistent = m.persistent(alpha);
        v.representative = concat(prefix_word, vs.value(j, y).representative);
        v.type = vs.store_->fold(v.representative, t);
        next.push_back(std::move(v));
      }
    }
    finish_level(std::move(next));
    for (Value& v : vs.values_.back())
      v.name = prefix_name(vs, j + 1, v.prefix) + "+" + vs.value(j, v.tail).name;
  }
  return vs;
}

Letter ValueSystem::letter_of(int level, ValueId v) const {
  const int a = letter_.at(level - 1).at(v);
  if (a < 0) throw DomainError("value " + value(level, v).name + " is transient");
  return static_cast<Letter>(a);
}

Alphabet ValueSystem::persistent_alphabet(int level) const {
  std::vector<std::string> names;
  for (ValueId v : persistent_values(level)) names.push_back(value(level, v).name);
  return Alphabet(std::move(names));
}

const Monoid& ValueSystem::string_monoid(int level) const {
  if (level < 1 || level > levels())
    throw DomainError("no string monoid for level " + std::to_string(level));
  auto& slot = monoids_[level - 1];
  if (!slot)
    slot = std::make_shared<const Monoid>(
        Monoid::generate(persistent_alphabet(level), depth_, options_));
  return *slot;
}

ValueId ValueSystem::pair_value(int level, Element alpha, ValueId tail) const {
  if (level < 2 || level > levels()) throw DomainError("pair values start at level 2");
  const std::size_t width = transient_values(level - 1).size();
  if (value(level - 1, tail).persistent) throw DomainError("tail of a pair value must be transient");
  return static_cast<ValueId>(alpha * width + transient_pos_[level - 2][tail]);
}

std::optional<Interval> ValueSystem::interval_at(std::span<const Letter> w, std::size_t start,
                                                 int level) const {
  if (level < 1 || level > levels()) throw DomainError("level outside the value system");
  if (level == 1) {
    for (std::size_t i = start; i < w.size(); ++i) {
      if (w[i] > 1) throw MismatchError("intervals are defined on 0/1 words");
      if (w[i] == 1) {
        const std::size_t zeros = std::min(i - start, s_);
        return Interval{start, i + 1, static_cast<ValueId>(zeros)};
      }
    }
    return std::nullopt;
  }
  const Monoid& m = string_monoid(level - 1);
  Element alpha = m.identity();
  std::size_t pos = start;
  while (true) {
    const auto piece = interval_at(w, pos, level - 1);
    if (!piece) return std::nullopt;
    const Value& v = value(level - 1, piece->value);
    if (!v.persistent) return Interval{start, piece->end, pair_value(level, alpha, piece->value)};
    alpha = m.right(alpha, letter_of(level - 1, piece->value));
    pos = piece->end;
  }
}

Decomposition decompose(std::span<const Letter> w, int level, const ValueSystem& vs) {
  Decomposition d;
  d.level = level;
  d.length = w.size();
  std::size_t pos = 0;
  while (pos < w.size()) {
    const auto iv = vs.interval_at(w, pos, level);
    if (!iv) {
      d.tail = pos;
      break;
    }
    d.intervals.push_back(*iv);
    pos = iv->end;
  }
  return d;
}

namespace {

// Class of the persistent j-values read from `start` up to the first
// transient one, with the first value dropped.  nullopt if there is none.
std::optional<Element> dropped_run(std::span<const Letter> w, std::size_t start, int j,
                                   const ValueSystem& vs) {
  const Monoid& m = vs.string_monoid(j);
  std::optional<Element> alpha;
  std::size_t pos = start;
  while (pos < w.size()) {
    const auto iv = vs.interval_at(w, pos, j);
    if (!iv || !vs.value(j, iv->value).persistent) break;
    alpha = alpha ? m.right(*alpha, vs.letter_of(j, iv->value)) : m.identity();
    pos = iv->end;
  }
  return alpha;
}

}  // namespace

bool is_super(const Decomposition& d, std::size_t index, std::span<const Letter> w,
              const ValueSystem& vs, SuperScope scope) {
  if (index >= d.intervals.size()) throw DomainError("is_super: no complete interval at index");
  if (w.size() != d.length) throw MismatchError("is_super: word does not match decomposition");
  const Interval& iv = d.intervals[index];
  const auto inside = w.first(iv.end);
  for (int j = 1; j < d.level; ++j) {
    const auto alpha = dropped_run(inside, iv.start, j, vs);
    if (!alpha || !vs.string_monoid(j).persistent(*alpha)) return false;
  }
  if (scope == SuperScope::full) {
    const Monoid& m = vs.string_monoid(d.level);
    std::optional<Element> alpha;
    for (std::size_t i = index; i < d.intervals.size(); ++i) {
      const ValueId v = d.intervals[i].value;
      if (!vs.value(d.level, v).persistent) break;
      alpha = alpha ? m.right(*alpha, vs.letter_of(d.level, v)) : m.identity();
    }
    if (!alpha || !m.persistent(*alpha)) return false;
  }
  return true;
}

std::vector<bool> super_flags(const Decomposition& d, std::span<const Letter> w,
                              const ValueSystem& vs, SuperScope scope) {
  std::vector<bool> out(d.intervals.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = is_super(d, i, w, vs, scope);
  return out;
}

namespace {

ValueId glue_step(std::span<const Letter> tail, std::span<const Letter> succ, int level,
                  const ValueSystem& vs) {
  if (tail.empty()) return vs.interval_at(succ, 0, level)->value;
  if (level == 1) return static_cast<ValueId>(vs.s());

  const int j = level - 1;
  const Monoid& m = vs.string_monoid(j);
  Element alpha = m.identity();
  std::size_t q = 0;
  while (const auto iv = vs.interval_at(tail, q, j)) {
    alpha = m.right(alpha, vs.letter_of(j, iv->value));
    q = iv->end;
  }
  const auto first = vs.interval_at(succ, 0, j);
  if (!first || !vs.value(j, first->value).persistent)
    throw std::logic_error("glue: successor does not open with a persistent interval");
  const ValueId merged = q == tail.size()
                             ? first->value
                             : glue_step(tail.subspan(q), succ.first(first->end), j, vs);
  alpha = m.right(alpha, vs.letter_of(j, merged));
  std::size_t pos = first->end;
  while (true) {
    const auto iv = vs.interval_at(succ, pos, j);
    if (!vs.value(j, iv->value).persistent) return vs.pair_value(level, alpha, iv->value);
    alpha = m.right(alpha, vs.letter_of(j, iv->value));
    pos = iv->end;
  }
}

}  // namespace

ValueId glue(std::span<const Letter> tail, std::span<const Letter> successor, int level,
             const ValueSystem& vs) {
  if (vs.interval_at(tail, 0, level))
    throw DomainError("glue: the tail already contains a complete interval");
  const auto succ = vs.interval_at(successor, 0, level);
  if (!succ || succ->end != successor.size())
    throw DomainError("glue: successor is not exactly one complete interval");
  if (!vs.value(level, succ->value).persistent)
    throw DomainError("glue: successor interval is transient");
  const Decomposition d = decompose(successor, level, vs);
  if (!is_super(d, 0, successor, vs)) throw DomainError("glue: successor interval is not super");

  const ValueId v = glue_step(tail, successor, level, vs);
  const Word whole = concat(tail, successor);
  const auto direct = vs.interval_at(whole, 0, level);
  if (!direct || direct->end != whole.size() || direct->value != v)
    throw std::logic_error("glue: inductive merge disagrees with the direct scan");
  if (!vs.value(level, v).persistent) throw std::logic_error("glue: result is transient");
  return v;
}

void write_decomposition_csv(std::ostream& os, const Decomposition& d, std::span<const Letter> w,
                             const ValueSystem& vs) {
  const auto flags = super_flags(d, w, vs);
  os << "start,end,value_id,persistent,super\n";
  for (std::size_t i = 0; i < d.intervals.size(); ++i) {
    const Interval& iv = d.intervals[i];
    os << iv.start << ',' << iv.end << ',' << iv.value << ','
       << (vs.value(d.level, iv.value).persistent ? 1 : 0) << ',' << (flags[i] ? 1 : 0) << '\n';
  }
  if (d.tail) os << *d.tail << ',' << d.length << ",-,-,-\n";
}

void write_value_system(std::ostream& os, const ValueSystem& vs) {
  os << "zeroone-values 1\ndepth " << vs.depth() << "\ns " << vs.s() << "\nlevels " << vs.levels()
     << '\n';
  for (int j = 1; j <= vs.levels(); ++j) {
    os << "level " << j << " values " << vs.values(j).size() << " persistent "
       << vs.persistent_values(j).size() << " transient " << vs.transient_values(j).size() << '\n';
  }
  for (int j = 1; j <= vs.levels(); ++j)
    for (const Value& v : vs.values(j))
      os << "value " << j << ':' << v.index << ' ' << v.name << " persistent="
         << (v.persistent ? 1 : 0) << " length=" << v.representative.size() << '\n';
}

}  // namespace zeroone
