#include "zeroone/logic.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <unordered_map>

namespace zeroone {

std::string to_string(Vocabulary v) {
  switch (v) {
    case Vocabulary::neutral: return "neutral";
    case Vocabulary::linear: return "linear";
    case Vocabulary::circular: return "circular";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { ident, lparen, rparen, comma, dot, and_, or_, not_, implies, eq, le, lt, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::ident, std::string(s.substr(i, j - i)), i});
      i = j;
      continue;
    }
    auto two = [&](std::string_view t) { return s.substr(i, 2) == t; };
    if (two("->")) { out.push_back({Tok::implies, "->", i}); i += 2; continue; }
    if (two("<=")) { out.push_back({Tok::le, "<=", i}); i += 2; continue; }
    switch (c) {
      case '(': out.push_back({Tok::lparen, "(", i}); break;
      case ')': out.push_back({Tok::rparen, ")", i}); break;
      case ',': out.push_back({Tok::comma, ",", i}); break;
      case '.': out.push_back({Tok::dot, ".", i}); break;
      case '&': out.push_back({Tok::and_, "&", i}); break;
      case '|': out.push_back({Tok::or_, "|", i}); break;
      case '!': out.push_back({Tok::not_, "!", i}); break;
      case '=': out.push_back({Tok::eq, "=", i}); break;
      case '<': out.push_back({Tok::lt, "<", i}); break;
      default: throw SyntaxError(std::string("unexpected character '") + c + "'", i);
    }
    ++i;
  }
  out.push_back({Tok::end, "", s.size()});
  return out;
}

bool reserved(const std::string& w) {
  return w == "exists" || w == "forall" || w == "U" || w == "C" || w == "true" || w == "false";
}

}  // namespace

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Sentence run() {
    s_.root_ = formula();
    if (peek().kind != Tok::end) throw SyntaxError("unexpected '" + peek().text + "'", peek().pos);
    s_.free_.resize(s_.nodes_.size());
    compute_free(s_.root_);
    return std::move(s_);
  }

 private:
  const Token& peek() const { return tokens_[at_]; }
  const Token& take() { return tokens_[at_++]; }
  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind)
      throw SyntaxError(std::string("expected ") + what +
                            (peek().kind == Tok::end ? " but the input ended" : ""),
                        peek().pos);
    return take();
  }

  int add(Node n) {
    s_.nodes_.push_back(n);
    return static_cast<int>(s_.nodes_.size()) - 1;
  }

  int binary(Op op, int l, int r) {
    Node n;
    n.op = op;
    n.left = l;
    n.right = r;
    n.begin = s_.nodes_[l].begin;
    n.end = s_.nodes_[r].end;
    return add(n);
  }

  void use(Vocabulary v, std::size_t pos) {
    if (s_.vocabulary_ == Vocabulary::neutral) s_.vocabulary_ = v;
    else if (s_.vocabulary_ != v)
      throw SyntaxError("sentence mixes the linear order with the cyclic order", pos);
  }

  int lookup(const Token& t) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (s_.names_[*it] == t.text) return *it;
    throw SyntaxError("free variable '" + t.text + "'", t.pos);
  }

  int variable() {
    const Token& t = expect(Tok::ident, "a variable");
    if (reserved(t.text)) throw SyntaxError("'" + t.text + "' is reserved", t.pos);
    return lookup(t);
  }

  int formula() {
    if (peek().kind == Tok::ident && (peek().text == "exists" || peek().text == "forall"))
      return quantified();
    const int lhs = disjunction();
    if (peek().kind == Tok::implies) {
      take();
      return binary(Op::implies, lhs, formula());
    }
    return lhs;
  }

  int quantified() {
    const Token& q = take();
    const Token& name = expect(Tok::ident, "a variable after the quantifier");
    if (reserved(name.text)) throw SyntaxError("'" + name.text + "' is reserved", name.pos);
    expect(Tok::dot, "'.' after the quantified variable");
    const int slot = static_cast<int>(s_.names_.size());
    s_.names_.push_back(name.text);
    scope_.push_back(slot);
    if (peek().kind == Tok::end) throw SyntaxError("missing quantifier body", peek().pos);
    const int body = formula();
    scope_.pop_back();
    Node n;
    n.op = q.text == "exists" ? Op::exists : Op::forall;
    n.var = slot;
    n.left = body;
    n.begin = q.pos;
    n.end = s_.nodes_[body].end;
    return add(n);
  }

  int disjunction() {
    int lhs = conjunction();
    while (peek().kind == Tok::or_) {
      take();
      lhs = binary(Op::or_, lhs, conjunction());
    }
    return lhs;
  }

  int conjunction() {
    int lhs = unary();
    while (peek().kind == Tok::and_) {
      take();
      lhs = binary(Op::and_, lhs, unary());
    }
    return lhs;
  }

  int unary() {
    if (peek().kind == Tok::not_) {
      const std::size_t pos = take().pos;
      Node n;
      n.op = Op::not_;
      n.left = unary();
      n.begin = pos;
      n.end = s_.nodes_[n.left].end;
      return add(n);
    }
    if (peek().kind == Tok::ident && (peek().text == "exists" || peek().text == "forall"))
      return quantified();
    return primary();
  }

  int primary() {
    const Token& t = peek();
    if (t.kind == Tok::lparen) {
      take();
      const int inner = formula();
      expect(Tok::rparen, "')'");
      return inner;
    }
    if (t.kind != Tok::ident) {
      throw SyntaxError(t.kind == Tok::end ? "unexpected end of input" : "unexpected '" + t.text + "'",
                        t.pos);
    }
    Node n;
    n.begin = t.pos;
    if (t.text == "true" || t.text == "false") {
      take();
      n.op = t.text == "true" ? Op::truth : Op::falsity;
      n.end = n.begin + t.text.size();
      return add(n);
    }
    if (t.text == "U" || t.text == "C") {
      const bool cyc = t.text == "C";
      take();
      expect(Tok::lparen, "'('");
      n.op = cyc ? Op::cyc : Op::pred;
      n.args[0] = variable();
      if (cyc) {
        use(Vocabulary::circular, t.pos);
        expect(Tok::comma, "','");
        n.args[1] = variable();
        expect(Tok::comma, "','");
        n.args[2] = variable();
      }
      n.end = expect(Tok::rparen, "')'").pos + 1;
      return add(n);
    }
    const int x = variable();
    const Token& rel = take();
    if (rel.kind != Tok::eq && rel.kind != Tok::le && rel.kind != Tok::lt)
      throw SyntaxError("expected '=', '<=' or '<'", rel.pos);
    const int y = variable();
    n.end = tokens_[at_ - 1].pos + tokens_[at_ - 1].text.size();
    n.args[0] = x;
    n.args[1] = y;
    if (rel.kind == Tok::eq) {
      n.op = Op::eq;
      return add(n);
    }
    use(Vocabulary::linear, rel.pos);
    n.op = Op::le;
    const int le = add(n);
    if (rel.kind == Tok::le) return le;
    Node eq = n;
    eq.op = Op::eq;
    Node neg;
    neg.op = Op::not_;
    neg.left = add(eq);
    neg.begin = n.begin;
    neg.end = n.end;
    return binary(Op::and_, le, add(neg));
  }

  void compute_free(int v) {
    Node& n = s_.nodes_[v];
    std::vector<int> out;
    for (int c : {n.left, n.right})
      if (c >= 0) {
        compute_free(c);
        out.insert(out.end(), s_.free_[c].begin(), s_.free_[c].end());
      }
    for (int a : n.args)
      if (a >= 0) out.push_back(a);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (n.var >= 0) out.erase(std::remove(out.begin(), out.end(), n.var), out.end());
    s_.free_[v] = std::move(out);
  }

  std::vector<Token> tokens_;
  std::size_t at_ = 0;
  std::vector<int> scope_;
  Sentence s_;
};

Sentence parse(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Printing and structure

namespace {

void print_node(const Sentence& s, int v, bool operand, std::string& out) {
  const Node& n = s.nodes()[v];
  auto var = [&](int slot) { return s.variable(slot); };
  switch (n.op) {
    case Op::exists:
    case Op::forall:
      if (operand) out += '(';
      out += n.op == Op::exists ? "exists " : "forall ";
      out += var(n.var) + ". ";
      print_node(s, n.left, false, out);
      if (operand) out += ')';
      return;
    case Op::and_:
    case Op::or_:
    case Op::implies:
      out += '(';
      print_node(s, n.left, true, out);
      out += n.op == Op::and_ ? " & " : n.op == Op::or_ ? " | " : " -> ";
      print_node(s, n.right, true, out);
      out += ')';
      return;
    case Op::not_:
      out += '!';
      print_node(s, n.left, true, out);
      return;
    case Op::eq: out += var(n.args[0]) + " = " + var(n.args[1]); return;
    case Op::le: out += var(n.args[0]) + " <= " + var(n.args[1]); return;
    case Op::cyc:
      out += "C(" + var(n.args[0]) + ", " + var(n.args[1]) + ", " + var(n.args[2]) + ")";
      return;
    case Op::pred: out += "U(" + var(n.args[0]) + ")"; return;
    case Op::truth: out += "true"; return;
    case Op::falsity: out += "false"; return;
  }
}

bool same(const Sentence& a, int u, const Sentence& b, int v) {
  if ((u < 0) != (v < 0)) return false;
  if (u < 0) return true;
  const Node& x = a.nodes()[u];
  const Node& y = b.nodes()[v];
  if (x.op != y.op || x.var != y.var) return false;
  if (x.var >= 0 && a.variable(x.var) != b.variable(y.var)) return false;
  for (int i = 0; i < 3; ++i) {
    if (x.args[i] != y.args[i]) return false;
    if (x.args[i] >= 0 && a.variable(x.args[i]) != b.variable(y.args[i])) return false;
  }
  return same(a, x.left, b, y.left) && same(a, x.right, b, y.right);
}

int depth_of(const Sentence& s, int v) {
  if (v < 0) return 0;
  const Node& n = s.nodes()[v];
  const int below = std::max(depth_of(s, n.left), depth_of(s, n.right));
  return below + (n.op == Op::exists || n.op == Op::forall ? 1 : 0);
}

}  // namespace

std::string print(const Sentence& s) {
  std::string out;
  print_node(s, s.root(), false, out);
  return out;
}

bool structurally_equal(const Sentence& a, const Sentence& b) {
  return a.vocabulary() == b.vocabulary() && a.slots() == b.slots() && same(a, a.root(), b, b.root());
}

int qdepth(const Sentence& s) { return depth_of(s, s.root()); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

class Evaluator {
 public:
  Evaluator(const ModelView& m, const Sentence& s, const EvalOptions& opt)
      : m_(m), s_(s), opt_(opt), assign_(s.slots(), 0) {
    const std::uint64_t base = m.word.size() + 1;
    memo_ok_.resize(s.nodes().size());
    for (std::size_t v = 0; v < s.nodes().size(); ++v) {
      const Node& n = s.nodes()[v];
      if (n.op != Op::exists && n.op != Op::forall) continue;
      // Key = node, then free-slot values in base n+1; must fit in 63 bits.
      unsigned __int128 bound = s.nodes().size();
      for (std::size_t i = 0; i < s.free_slots(static_cast<int>(v)).size(); ++i) bound *= base;
      memo_ok_[v] = bound < (static_cast<unsigned __int128>(1) << 63);
    }
  }

  bool run() { return eval(s_.root()); }

 private:
  bool eval(int v) {
    if (++work_ > opt_.work_cap)
      throw GuardError("evaluate: work cap of " + std::to_string(opt_.work_cap) + " steps exceeded");
    const Node& n = s_.nodes()[v];
    const auto a = [&](int i) { return assign_[n.args[i]]; };
    switch (n.op) {
      case Op::truth: return true;
      case Op::falsity: return false;
      case Op::pred: return m_.word[a(0)] == 1;
      case Op::eq: return a(0) == a(1);
      case Op::le: return a(0) <= a(1);
      case Op::cyc: {
        const std::size_t x = a(0), y = a(1), z = a(2);
        return (x < y && y < z) || (y < z && z < x) || (z < x && x < y);
      }
      case Op::not_: return !eval(n.left);
      case Op::and_: return eval(n.left) && eval(n.right);
      case Op::or_: return eval(n.left) || eval(n.right);
      case Op::implies: return !eval(n.left) || eval(n.right);
      case Op::exists:
      case Op::forall: break;
    }
    std::uint64_t key = 0;
    if (memo_ok_[v]) {
      // Node id in the lowest digit, so nodes with different numbers of
      // free slots cannot collide.
      for (int slot : s_.free_slots(v)) key = key * (m_.word.size() + 1) + assign_[slot];
      key = key * s_.nodes().size() + static_cast<std::uint64_t>(v);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    const bool want = n.op == Op::exists;
    bool result = !want;
    const std::size_t saved = assign_[n.var];
    for (std::size_t i = 0; i < m_.word.size(); ++i) {
      assign_[n.var] = i;
      if (eval(n.left) == want) {
        result = want;
        break;
      }
    }
    assign_[n.var] = saved;
    if (memo_ok_[v]) memo_.emplace(key, result);
    return result;
  }

  const ModelView& m_;
  const Sentence& s_;
  const EvalOptions& opt_;
  std::vector<std::size_t> assign_;
  std::vector<bool> memo_ok_;
  std::unordered_map<std::uint64_t, bool> memo_;
  std::uint64_t work_ = 0;
};

}  // namespace

bool evaluate(const ModelView& m, const Sentence& s, const EvalOptions& opt) {
  if (s.vocabulary() == Vocabulary::linear && m.circular)
    throw MismatchError("linear sentence evaluated on a cycle");
  if (s.vocabulary() == Vocabulary::circular && !m.circular)
    throw MismatchError("circular sentence evaluated on a linear word");
  for (Letter a : m.word)
    if (a > 1) throw MismatchError("models are 0/1 words");
  return Evaluator(m, s, opt).run();
}

// ---------------------------------------------------------------------------
// Built-ins

namespace {

// U at the successor of x (and at the one after), with x + 1 expanded as
// "the z with x < z and no w strictly between".
std::string succ(const std::string& x, const std::string& z) {
  return "(" + x + " < " + z + " & !(exists w. (" + x + " < w & w < " + z + ")))";
}
std::string u_plus1(const std::string& x) {
  return "(exists z. (" + succ(x, "z") + " & U(z)))";
}
std::string u_plus2(const std::string& x) {
  return "(exists z. (" + succ(x, "z") + " & exists z2. (" + succ("z", "z2") + " & U(z2))))";
}

std::string consecutive_text(int k) {
  if (k < 1) throw DomainError("A_k needs k >= 1");
  auto x = [](int i) { return "x" + std::to_string(i); };
  std::string prefix, body;
  for (int i = 1; i <= k; ++i) {
    prefix += "exists " + x(i) + ". ";
    body += (i > 1 ? " & " : "") + std::string("U(") + x(i) + ")";
  }
  for (int i = 1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j) body += " & !(" + x(i) + " = " + x(j) + ")";
  for (int i = 1; i < k; ++i)
    body += " & (forall z. !C(" + x(i) + ", z, " + x(i + 1) + "))";
  return prefix + "(" + body + ")";
}

}  // namespace

std::string builtin_text(std::string_view name) {
  if (name == "A") return "exists x. U(x)";
  if (name == "B") return "exists x. U(x) & forall y. !(y < x)";
  if (name == "C") return "exists x. exists y. U(x) & U(y) & x < y & forall z. !(x < z & z < y)";
  if (name == "D") {
    const std::string hit_x = "(" + u_plus1("x") + " | " + u_plus2("x") + ")";
    const std::string hit_y = "(" + u_plus1("y") + " | " + u_plus2("y") + ")";
    return "exists x. (U(x) & " + hit_x + " & !(exists y. (U(y) & " + hit_y + " & y < x)) & " +
           u_plus1("x") + ")";
  }
  std::string_view rest = name;
  if (rest.starts_with("A_")) rest.remove_prefix(2);
  else if (rest.starts_with("A")) rest.remove_prefix(1);
  else throw DomainError("unknown built-in sentence '" + std::string(name) + "'");
  int k = 0;
  const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), k);
  if (ec != std::errc() || ptr != rest.data() + rest.size() || rest.empty())
    throw DomainError("unknown built-in sentence '" + std::string(name) + "'");
  return consecutive_text(k);
}

Sentence builtin(std::string_view name) { return parse(builtin_text(name)); }

Sentence builtin_consecutive(int k) { return parse(consecutive_text(k)); }

}  // namespace zeroone
