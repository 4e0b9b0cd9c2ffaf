#include "zeroone/monoid.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace zeroone {

namespace {

// Components of a graph given by `out(v)` successor lists, in Tarjan's order
// (sinks first).  Iterative so deep BFS trees do not blow the stack.
template <class Succ>
std::vector<int> strong_components(std::size_t n, std::size_t degree, Succ succ, int& count) {
  std::vector<int> comp(n, -1), low(n, 0), num(n, -1);
  std::vector<Element> stack;
  std::vector<std::pair<Element, std::size_t>> call;
  int counter = 0;
  count = 0;
  for (Element root = 0; root < n; ++root) {
    if (num[root] >= 0) continue;
    call.push_back({root, 0});
    num[root] = low[root] = counter++;
    stack.push_back(root);
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge < degree) {
        const Element w = succ(v, edge++);
        if (num[w] < 0) {
          num[w] = low[w] = counter++;
          stack.push_back(w);
          call.push_back({w, 0});
        } else if (comp[w] < 0) {
          low[v] = std::min(low[v], num[w]);
        }
        continue;
      }
      const Element done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == num[done]) {
        Element w;
        do {
          w = stack.back();
          stack.pop_back();
          comp[w] = count;
        } while (w != done);
        ++count;
      }
    }
  }
  return comp;
}

// Marks components that have no edge leaving them.
template <class Succ>
std::vector<bool> sink_components(std::size_t n, std::size_t degree, Succ succ,
                                  const std::vector<int>& comp, int count) {
  std::vector<bool> sink(count, true);
  for (Element v = 0; v < n; ++v)
    for (std::size_t e = 0; e < degree; ++e)
      if (comp[succ(v, e)] != comp[v]) sink[comp[v]] = false;
  return sink;
}

}  // namespace

Monoid Monoid::generate(const Alphabet& alphabet, int depth, MonoidOptions options) {
  if (options.cap == 0) throw DomainError("monoid cap must be positive");
  if (depth < 0) throw DomainError("depth must be >= 0");
  Monoid m;
  m.alphabet_ = alphabet;
  m.depth_ = depth;
  m.store_ = std::make_shared<TypeStore>(alphabet.size());
  TypeStore& store = *m.store_;
  const std::size_t k = alphabet.size();

  std::unordered_map<std::uint32_t, Element> index;
  auto add = [&](EfType x, Element parent, Letter a, Word rep) -> Element {
    auto [it, fresh] = index.emplace(x.id, static_cast<Element>(m.types_.size()));
    if (!fresh) return it->second;
    if (m.types_.size() >= options.cap) throw CapExceeded("monoid generation", m.types_.size() + 1);
    m.types_.push_back(x);
    m.representatives_.push_back(std::move(rep));
    m.parent_.push_back(parent);
    m.last_letter_.push_back(a);
    return it->second;
  };

  add(store.empty(depth), 0, 0, {});
  std::vector<EfType> letters;
  for (Letter a = 0; a < k; ++a) letters.push_back(store.letter(a, depth));

  // Breadth-first: element i's row of the right Cayley graph is filled when
  // it is dequeued, and new elements are appended in discovery order.
  for (Element i = 0; i < m.types_.size(); ++i) {
    for (Letter a = 0; a < k; ++a) {
      const EfType next = store.compose(m.types_[i], letters[a]);
      Word rep = m.representatives_[i];
      rep.push_back(a);
      m.right_.push_back(add(next, i, a, std::move(rep)));
    }
  }
  const std::size_t n = m.types_.size();
  for (Letter a = 0; a < k; ++a) m.generators_.push_back(m.right_[a]);

  m.left_.resize(n * k);
  for (Element x = 0; x < n; ++x)
    for (Letter a = 0; a < k; ++a) {
      const EfType z = store.compose(letters[a], m.types_[x]);
      m.left_[x * k + a] = index.at(z.id);
    }

  for (auto [id, e] : index) m.lookup_.push_back({id, e});
  std::sort(m.lookup_.begin(), m.lookup_.end());

  if (n <= options.full_table_limit) {
    m.table_.resize(n * n);
    for (Element x = 0; x < n; ++x) {
      m.table_[x * n] = x;
      // Row x by BFS order: y = parent(y) + last letter.
      for (Element y = 1; y < n; ++y)
        m.table_[x * n + y] = m.right(m.table_[x * n + m.parent_[y]], m.last_letter_[y]);
    }
  }

  int count = 0;
  auto succ = [&](Element v, std::size_t e) { return m.right_[v * k + e]; };
  const auto comp = strong_components(n, k, succ, count);
  const auto sink = sink_components(n, k, succ, comp, count);
  m.persistent_.resize(n);
  for (Element x = 0; x < n; ++x) m.persistent_[x] = sink[comp[x]];
  return m;
}

Element Monoid::multiply(Element x, Element y) const {
  const std::size_t n = size();
  if (x >= n || y >= n) throw DomainError("element out of range");
  if (!table_.empty()) return table_[x * n + y];
  for (Letter a : representatives_[y]) x = right(x, a);
  return x;
}

Element Monoid::classify(std::span<const Letter> w) const {
  Element x = identity();
  for (Letter a : w) {
    if (a >= alphabet_.size()) throw MismatchError("letter outside the monoid's alphabet");
    x = right(x, a);
  }
  return x;
}

std::optional<Element> Monoid::find(EfType x) const {
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(),
                             std::pair<std::uint32_t, Element>{x.id, 0});
  if (it == lookup_.end() || it->first != x.id) return std::nullopt;
  return it->second;
}

std::vector<Element> Monoid::persistent_elements() const {
  std::vector<Element> out;
  for (Element x = 0; x < size(); ++x)
    if (persistent_[x]) out.push_back(x);
  return out;
}

bool is_persistent(const Monoid& m, Element x) {
  const std::size_t n = m.size();
  for (Element y = 0; y < n; ++y) {
    const Element xy = m.multiply(x, y);
    bool found = false;
    for (Element z = 0; z < n && !found; ++z) found = m.multiply(xy, z) == x;
    if (!found) return false;
  }
  return true;
}

PersistenceReport check_persistence_equivalence(const Monoid& m) {
  const std::size_t n = m.size();
  // reach_right[v] = v + M, reach_left[v] = M + v, as bitmaps.
  std::vector<std::vector<bool>> reach_right(n, std::vector<bool>(n)),
      reach_left(n, std::vector<bool>(n));
  for (Element v = 0; v < n; ++v)
    for (Element z = 0; z < n; ++z) {
      reach_right[v][m.multiply(v, z)] = true;
      reach_left[v][m.multiply(z, v)] = true;
    }

  PersistenceReport report;
  report.properties.resize(n);
  for (Element x = 0; x < n; ++x) {
    bool p1 = true, p2 = true;
    for (Element y = 0; y < n; ++y) {
      p1 = p1 && reach_right[m.multiply(x, y)][x];   // ∀y ∃z x+y+z = x
      p2 = p2 && reach_left[m.multiply(y, x)][x];    // ∀y ∃z z+y+x = x
    }
    bool p3 = false;                                  // ∃p ∃s ∀y p+y+s = x
    for (Element p = 0; p < n && !p3; ++p)
      for (Element s = 0; s < n && !p3; ++s) {
        bool all = true;
        for (Element y = 0; y < n && all; ++y) all = m.multiply(m.multiply(p, y), s) == x;
        p3 = all;
      }
    report.properties[x] = {p1, p2, p3};
    if (p1 != p2 || p1 != p3) report.disagreements.push_back(x);
  }
  return report;
}

bool verify_witness(const Monoid& m, Element x, const PrefixSuffixWitness& w) {
  for (Element y = 0; y < m.size(); ++y)
    if (m.multiply(m.multiply(w.prefix, y), w.suffix) != x) return false;
  return true;
}

PrefixSuffixWitness prefix_suffix_witness(const Monoid& m, Element x) {
  if (x >= m.size()) throw DomainError("element out of range");
  if (!m.persistent(x)) throw DomainError("prefix/suffix witness requested for a transient element");
  const std::size_t n = m.size();

  // R_x = x + M.
  std::vector<Element> rx;
  {
    std::vector<bool> seen(n);
    for (Element v = 0; v < n; ++v) {
      const Element e = m.multiply(x, v);
      if (!seen[e]) {
        seen[e] = true;
        rx.push_back(e);
      }
    }
  }
  // u minimizing |R_x + u|; the proof shows the minimum is 1.
  Element best_u = 0;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<int> stamp(n, -1);
  for (Element u = 0; u < n && best > 1; ++u) {
    std::size_t count = 0;
    for (Element r : rx) {
      const Element e = m.multiply(r, u);
      if (stamp[e] != static_cast<int>(u)) {
        stamp[e] = static_cast<int>(u);
        ++count;
      }
    }
    if (count < best) {
      best = count;
      best_u = u;
    }
  }
  if (best == 1) {
    const Element u5 = m.multiply(rx.front(), best_u);
    for (Element u6 = 0; u6 < n; ++u6) {
      if (m.multiply(u5, u6) != x) continue;
      PrefixSuffixWitness w{x, m.multiply(best_u, u6)};
      if (verify_witness(m, x, w)) return w;
    }
  }
  for (Element p = 0; p < n; ++p)
    for (Element s = 0; s < n; ++s) {
      PrefixSuffixWitness w{p, s};
      if (verify_witness(m, x, w)) return w;
    }
  throw std::logic_error("persistent element without a prefix/suffix witness");
}

GreenClasses green_classes(const Monoid& m) {
  const std::size_t n = m.size();
  const std::size_t k = m.alphabet().size();
  GreenClasses g;
  g.r_of.assign(n, -1);
  g.l_of.assign(n, -1);

  // For persistent elements, the R-class is the (sink) component of the
  // right Cayley graph and the L-class the component of the left one.
  auto group = [&](auto succ, std::vector<int>& of, std::vector<std::vector<Element>>& classes) {
    int count = 0;
    const auto comp = strong_components(n, k, succ, count);
    std::vector<int> renumber(count, -1);
    for (Element x = 0; x < n; ++x) {
      if (!m.persistent(x)) continue;
      int& c = renumber[comp[x]];
      if (c < 0) {
        c = static_cast<int>(classes.size());
        classes.emplace_back();
      }
      of[x] = c;
      classes[c].push_back(x);
    }
  };
  group([&](Element v, std::size_t e) { return m.right(v, static_cast<Letter>(e)); }, g.r_of,
        g.r_classes);
  group([&](Element v, std::size_t e) { return m.left(static_cast<Letter>(e), v); }, g.l_of,
        g.l_classes);

  g.intersection.assign(g.r_classes.size(), std::vector<Element>(g.l_classes.size()));
  std::vector<std::vector<int>> hits(g.r_classes.size(), std::vector<int>(g.l_classes.size()));
  for (Element x = 0; x < n; ++x) {
    if (!m.persistent(x)) continue;
    if (g.l_of[x] < 0) throw std::logic_error("persistent element outside every L-class");
    ++hits[g.r_of[x]][g.l_of[x]];
    g.intersection[g.r_of[x]][g.l_of[x]] = x;
  }
  for (std::size_t r = 0; r < g.r_classes.size(); ++r)
    for (std::size_t l = 0; l < g.l_classes.size(); ++l) {
      const Element sum = m.multiply(g.r_classes[r].front(), g.l_classes[l].front());
      if (hits[r][l] != 1 || g.intersection[r][l] != sum)
        throw std::logic_error("R- and L-classes do not meet in exactly x + y");
    }
  return g;
}

void write_monoid(std::ostream& os, const Monoid& m, bool with_types) {
  const GreenClasses g = green_classes(m);
  const std::size_t n = m.size();
  os << "zeroone-monoid 1\n";
  os << "alphabet";
  for (const auto& s : m.alphabet().symbols()) os << ' ' << s;
  os << "\ndepth " << m.depth() << "\nelements " << n << "\nidentity " << m.identity()
     << "\ngenerators";
  for (Element e : m.generators()) os << ' ' << e;
  os << "\npersistent " << m.persistent_elements().size() << "\nr-classes " << g.r_classes.size()
     << "\nl-classes " << g.l_classes.size() << "\n";
  for (Element x = 0; x < n; ++x) {
    const Word& rep = m.representative(x);
    os << "element " << x << " rep=" << (rep.empty() ? "-" : to_string(rep, m.alphabet()))
       << " persistent=" << (m.persistent(x) ? 1 : 0) << " r=";
    if (g.r_of[x] < 0) os << '-'; else os << g.r_of[x];
    os << " l=";
    if (g.l_of[x] < 0) os << '-'; else os << g.l_of[x];
    if (with_types) os << " type=" << m.store().serialize(m.type(x));
    os << '\n';
  }
  if (m.has_full_table()) {
    os << "table\n";
    for (Element x = 0; x < n; ++x) {
      for (Element y = 0; y < n; ++y) os << (y ? " " : "") << m.multiply(x, y);
      os << '\n';
    }
  }
}

}  // namespace zeroone
