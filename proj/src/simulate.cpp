#include "zeroone/simulate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "zeroone/markov.hpp"

namespace zeroone {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
  SplitMix64 sm(seed);
  for (auto& s : s_) s = sm.next();
}

Rng Rng::for_trial(std::uint64_t seed, std::uint64_t trial) {
  SplitMix64 sm(seed);
  const std::uint64_t base = sm.next();
  SplitMix64 mix(trial * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL);
  return Rng(base ^ mix.next());
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

Rng::result_type Rng::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

OnesStream::OnesStream(std::size_t n, double p, Rng rng) : n_(n), p_(p), log_q_(0), rng_(rng) {
  if (!(p >= 0 && p <= 1)) throw DomainError("p must lie in [0, 1]");
  if (p > 0 && p < 1) log_q_ = std::log1p(-p);
}

std::optional<std::size_t> OnesStream::next() {
  if (p_ == 0 || pos_ >= n_) return std::nullopt;
  if (p_ == 1) return pos_++;
  if (p_ > 0.25) {
    while (pos_ < n_) {
      const std::size_t i = pos_++;
      if (rng_.uniform() <= p_) return i;
    }
    return std::nullopt;
  }
  // Number of zeroes before the next one is Geometric(p).
  const double gap = std::floor(std::log(rng_.uniform()) / log_q_);
  if (gap >= static_cast<double>(n_ - pos_)) {
    pos_ = n_;
    return std::nullopt;
  }
  const std::size_t i = pos_ + static_cast<std::size_t>(gap);
  pos_ = i + 1;
  return i;
}

Word sample_predicate(std::size_t n, double p, std::uint64_t seed, std::uint64_t trial) {
  Word w(n, 0);
  OnesStream ones(n, p, Rng::for_trial(seed, trial));
  while (auto i = ones.next()) w[*i] = 1;
  return w;
}

bool scan_A(std::span<const Letter> w) { return std::find(w.begin(), w.end(), 1) != w.end(); }

bool scan_B(std::span<const Letter> w) { return !w.empty() && w[0] == 1; }

bool scan_C(std::span<const Letter> w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] && w[i + 1]) return true;
  return false;
}

bool scan_D(std::span<const Letter> w) {
  const std::size_t n = w.size();
  for (std::size_t x = 0; x < n; ++x) {
    if (!w[x]) continue;
    const bool next = x + 1 < n && w[x + 1];
    if (next || (x + 2 < n && w[x + 2])) return next;
  }
  return false;
}

bool scan_consecutive(std::span<const Letter> cycle, int k) {
  const std::size_t n = cycle.size();
  if (k < 1) throw DomainError("A_k needs k >= 1");
  if (n < static_cast<std::size_t>(k)) return false;
  const auto zero = std::find(cycle.begin(), cycle.end(), 0);
  if (zero == cycle.end()) return true;
  // Walk once around, starting just after a zero.
  const std::size_t start = static_cast<std::size_t>(zero - cycle.begin()) + 1;
  std::size_t run = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (cycle[(start + i) % n]) {
      if (++run >= static_cast<std::size_t>(k)) return true;
    } else {
      run = 0;
    }
  }
  return false;
}

double race_oracle_D(double p) {
  if (!(p > 0 && p <= 1)) throw DomainError("race_oracle_D: p must lie in (0, 1]");
  return 1.0 / (2.0 - p);
}

RaceBounds race_enumeration_D(double p, std::size_t max_len) {
  if (!(p > 0 && p <= 1)) throw DomainError("race_enumeration_D: p must lie in (0, 1]");
  if (max_len > 26) throw GuardError("race_enumeration_D: max_len above 26");
  // Walk the tree of prefixes; a branch stops as soon as the race is decided.
  RaceBounds out;
  struct Frame {
    Word prefix;
    double weight;
  };
  std::vector<Frame> stack{{{}, 1.0}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const std::size_t n = f.prefix.size();
    // Decided once some one is followed by 1 or by 01 within the prefix.
    bool decided = false, value = false;
    for (std::size_t x = 0; x + 1 < n && !decided; ++x) {
      if (!f.prefix[x]) continue;
      if (f.prefix[x + 1]) decided = value = true;
      else if (x + 2 < n && f.prefix[x + 2]) decided = true;
      else if (x + 2 >= n) break;
    }
    if (decided) {
      if (value) out.value += f.weight;
      continue;
    }
    if (n == max_len) {
      out.undecided += f.weight;
      continue;
    }
    for (Letter a : {Letter{0}, Letter{1}}) {
      Frame g{f.prefix, f.weight * (a ? p : 1 - p)};
      g.prefix.push_back(a);
      if (g.weight > 0) stack.push_back(std::move(g));
    }
  }
  return out;
}

double circular_pair_free_probability(std::size_t n, double p) {
  if (!(p >= 0 && p <= 1)) throw DomainError("p must lie in [0, 1]");
  if (n == 0) return 1;
  if (n == 1) return 1;  // a single element has no second element to pair with
  const double q = 1 - p;
  // T(a, b) = Pr[next bit b] unless a = b = 1.
  Eigen::Matrix2d T;
  T << q, p, q, 0;
  Eigen::Matrix2d result = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d base = T;
  for (std::size_t e = n; e > 0; e >>= 1) {
    if (e & 1) result = result * base;
    base = base * base;
  }
  return result.trace();
}

namespace {

enum class Builtin { none, A, B, C, D, Ak };

struct BuiltinRef {
  Builtin kind = Builtin::none;
  int k = 0;
};

BuiltinRef parse_builtin(std::string_view name) {
  if (name == "A") return {Builtin::A};
  if (name == "B") return {Builtin::B};
  if (name == "C") return {Builtin::C};
  if (name == "D") return {Builtin::D};
  if (name.size() >= 2 && name[0] == 'A') {
    std::string_view digits = name.substr(name[1] == '_' ? 2 : 1);
    if (!digits.empty() && digits.size() < 6 &&
        std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      const int k = std::stoi(std::string(digits));
      if (k < 1) throw DomainError("A_k needs k >= 1");
      return {Builtin::Ak, k};
    }
  }
  return {};
}

// One trial of a built-in, reading the ones stream and stopping as soon as
// the answer is known.
bool stream_builtin(const BuiltinRef& b, std::size_t n, OnesStream& ones) {
  switch (b.kind) {
    case Builtin::A:
      return ones.next().has_value();
    case Builtin::B: {
      const auto first = ones.next();
      return first && *first == 0;
    }
    case Builtin::C: {
      auto prev = ones.next();
      while (prev) {
        const auto cur = ones.next();
        if (cur && *cur == *prev + 1) return true;
        prev = cur;
      }
      return false;
    }
    case Builtin::D: {
      auto prev = ones.next();
      while (prev) {
        const auto cur = ones.next();
        if (!cur) return false;
        if (*cur - *prev <= 2) return *cur - *prev == 1;
        prev = cur;
      }
      return false;
    }
    case Builtin::Ak: {
      const auto k = static_cast<std::size_t>(b.k);
      if (n < k) return false;
      std::size_t first_run = 0, run = 0, last = 0, count = 0;
      bool first_open = false;  // the current run is the one starting at 0
      while (auto i = ones.next()) {
        if (count > 0 && *i == last + 1) ++run;
        else {
          run = 1;
          first_open = *i == 0;
        }
        if (first_open) first_run = run;
        if (run >= k) return true;
        last = *i;
        ++count;
      }
      if (count == 0) return false;
      // Join the run ending at n - 1 with the one starting at 0.
      if (last == n - 1 && first_run > 0 && !first_open) return run + first_run >= k;
      return false;
    }
    case Builtin::none:
      break;
  }
  throw std::logic_error("stream_builtin: not a built-in");
}

std::string format_double(double x) {
  if (std::isnan(x)) return "";
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

}  // namespace

SweepRow empirical_probability(const TrialPlan& plan) {
  if (!(plan.p >= 0 && plan.p <= 1)) throw DomainError("p must lie in [0, 1]");
  if (plan.trials < 1) throw DomainError("trials must be at least 1");
  SweepRow row;
  row.n = plan.n;
  row.alpha = plan.alpha;
  row.p = plan.p;
  row.sentence = plan.sentence;
  row.trials = plan.trials;
  row.regime = plan.regime;

  const BuiltinRef b = parse_builtin(plan.sentence);
  if (b.kind != Builtin::none) {
    for (std::uint64_t i = 0; i < plan.trials; ++i) {
      OnesStream ones(plan.n, plan.p, Rng::for_trial(plan.seed, i));
      if (stream_builtin(b, plan.n, ones)) ++row.successes;
    }
  } else {
    const Sentence s = parse(plan.sentence);
    const bool circular = s.vocabulary() == Vocabulary::circular ||
                          (s.vocabulary() == Vocabulary::neutral && plan.circular);
    for (std::uint64_t i = 0; i < plan.trials; ++i) {
      const Word w = sample_predicate(plan.n, plan.p, plan.seed, i);
      if (evaluate({w, circular}, s, plan.eval)) ++row.successes;
    }
  }
  const double q = static_cast<double>(row.successes) / static_cast<double>(row.trials);
  row.empirical = q;
  row.standard_error = std::sqrt(q * (1 - q) / static_cast<double>(row.trials));
  return row;
}

std::vector<RegimePoint> theorem1_grid(int k) {
  if (k < 1) throw DomainError("theorem1_grid: k >= 1");
  std::vector<RegimePoint> grid;
  auto edge = [](int j) { return "p=n^-1/" + std::to_string(j); };
  grid.push_back({"p<<n^-1", 1.5, false, std::nullopt});
  for (int j = 1; j <= k; ++j) {
    grid.push_back({edge(j), 1.0 / j, false, std::nullopt});
    grid.push_back({"n^-1/" + std::to_string(j) + "<<p<<n^-1/" + std::to_string(j + 1),
                    0.5 * (1.0 / j + 1.0 / (j + 1)), false, std::nullopt});
  }
  grid.push_back({edge(k + 1), 1.0 / (k + 1), false, std::nullopt});
  grid.push_back({"p constant", std::numeric_limits<double>::quiet_NaN(), false, 0.5});
  // Mirror images: the same exponents applied to 1 - p.
  const std::size_t plain = grid.size() - 1;
  for (std::size_t i = plain; i-- > 0;) {
    RegimePoint m = grid[i];
    m.mirrored = true;
    std::string label = m.label;
    for (std::size_t pos; (pos = label.find('p')) != std::string::npos;) label.replace(pos, 1, "1-q");
    for (std::size_t pos; (pos = label.find('q')) != std::string::npos;) label.replace(pos, 1, "p");
    m.label = label;
    grid.push_back(m);
  }
  return grid;
}

std::vector<std::string> default_sentences(int k) {
  std::vector<std::string> out;
  for (int j = 1; j <= k + 1; ++j) out.push_back("A_" + std::to_string(j));
  return out;
}

std::vector<SweepRow> regime_sweep(const SweepConfig& config) {
  if (config.t < 1 || config.k < 1) throw DomainError("regime_sweep: t, k >= 1");
  const std::vector<RegimePoint> grid = config.grid.empty() ? theorem1_grid(config.k) : config.grid;
  const std::vector<std::string> sentences =
      config.sentences.empty() ? default_sentences(config.k) : config.sentences;
  std::vector<SweepRow> rows;
  for (std::size_t n : config.ns)
    for (const RegimePoint& point : grid)
      for (const std::string& sentence : sentences) {
        TrialPlan plan;
        plan.n = n;
        plan.alpha = point.alpha;
        if (point.fixed_p) plan.p = *point.fixed_p;
        else {
          const double x = std::min(1.0, point.scale * std::pow(static_cast<double>(n), -point.alpha));
          plan.p = point.mirrored ? 1 - x : x;
        }
        plan.trials = config.trials;
        plan.seed = config.seed;
        plan.sentence = sentence;
        plan.circular = true;
        plan.regime = point.label;
        try {
          rows.push_back(empirical_probability(plan));
        } catch (const Error& e) {
          SweepRow row;
          row.n = n;
          row.alpha = plan.alpha;
          row.p = plan.p;
          row.sentence = sentence;
          row.regime = point.label;
          row.error = e.what();
          rows.push_back(std::move(row));
        }
      }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "n,alpha,p,sentence,trials,successes,empirical,se,regime,error\n";
  for (const SweepRow& r : rows) {
    os << r.n << ',' << format_double(r.alpha) << ',' << format_double(r.p) << ',' << r.sentence << ','
       << r.trials << ',' << r.successes << ',' << format_double(r.empirical) << ','
       << format_double(r.standard_error) << ',' << r.regime << ',';
    std::string e = r.error;
    std::replace(e.begin(), e.end(), ',', ';');
    os << e << '\n';
  }
}

Word splitting_block(const ValueSystem& vs, int k) {
  const Monoid& m = vs.string_monoid(k);
  const GreenClasses g = green_classes(m);
  Word block;
  for (const auto& r : g.r_classes)
    for (const auto& l : g.l_classes) {
      const Word& lw = m.representative(l.front());
      const Word& rw = m.representative(r.front());
      block.insert(block.end(), lw.begin(), lw.end());
      block.insert(block.end(), rw.begin(), rw.end());
    }
  return block;
}

namespace {

constexpr Letter kTransient = std::numeric_limits<Letter>::max();

struct ValueString {
  Word letters;                 // every complete k-value; transient ones as kTransient
  std::vector<Interval> spans;  // the matching intervals
  std::size_t persistent_prefix = 0;  // values before the first transient one
  bool all_persistent = true;
};

ValueString value_string(std::span<const Letter> w, int k, const ValueSystem& vs) {
  const Decomposition d = decompose(w, k, vs);
  ValueString out;
  for (const Interval& iv : d.intervals) {
    const bool persistent = vs.value(k, iv.value).persistent;
    if (!persistent && out.all_persistent) {
      out.all_persistent = false;
      out.persistent_prefix = out.letters.size();
    }
    out.letters.push_back(persistent ? vs.letter_of(k, iv.value) : kTransient);
    out.spans.push_back(iv);
  }
  if (out.all_persistent) out.persistent_prefix = out.letters.size();
  return out;
}

// The class of the persistent values before the first transient one.
Element prefix_class(const Monoid& m, const ValueString& v) {
  return m.classify(std::span<const Letter>(v.letters).first(v.persistent_prefix));
}

// Spans [start, end) in the word of each occurrence of `block` in the
// value sequence, at value offsets >= first.  Transient values never match.
std::vector<std::pair<std::size_t, std::size_t>> block_occurrences(const ValueString& v, const Word& block,
                                                                   std::size_t first = 0) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (block.empty() || v.letters.size() < block.size()) return out;
  for (std::size_t i = first; i + block.size() <= v.letters.size(); ++i)
    if (std::equal(block.begin(), block.end(), v.letters.begin() + static_cast<std::ptrdiff_t>(i)))
      out.emplace_back(v.spans[i].start, v.spans[i + block.size() - 1].end);
  return out;
}

// Every window [y, y + width) with y a multiple of stride contains an occurrence.
bool covers_windows(const std::vector<std::pair<std::size_t, std::size_t>>& occ, std::size_t n,
                    std::size_t width, std::size_t stride) {
  if (width == 0 || width > n) return false;
  std::size_t j = 0;
  for (std::size_t y = 0; y + width <= n; y += stride) {
    while (j < occ.size() && occ[j].first < y) ++j;
    if (j == occ.size() || occ[j].second > y + width) return false;
  }
  return true;
}

}  // namespace

IntervalStats interval_statistics(std::size_t n, double p, int k, const ValueSystem& vs, std::uint64_t trials,
                                  std::uint64_t seed) {
  if (trials < 1) throw DomainError("trials must be at least 1");
  const Word block = splitting_block(vs, k);
  IntervalStats st;
  st.n = n;
  st.p = p;
  st.trials = trials;
  const double scale = static_cast<double>(n) * std::pow(p, k);
  std::uint64_t transient = 0, with_block = 0;
  double sum = 0;
  st.ratio_min = std::numeric_limits<double>::infinity();
  st.ratio_max = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const Word w = sample_predicate(n, p, seed, i);
    const ValueString v = value_string(w, k, vs);
    if (!v.all_persistent) ++transient;
    if (!block_occurrences(v, block, 1).empty()) ++with_block;
    const double r = static_cast<double>(v.letters.size()) / scale;
    sum += r;
    st.ratio_min = std::min(st.ratio_min, r);
    st.ratio_max = std::max(st.ratio_max, r);
  }
  st.transient_fraction = static_cast<double>(transient) / static_cast<double>(trials);
  st.block_fraction = static_cast<double>(with_block) / static_cast<double>(trials);
  st.ratio_mean = sum / static_cast<double>(trials);
  return st;
}

ProbeSummary theorem2_probe(const ProbeConfig& config) {
  if (config.t < 1 || config.k < 1) throw DomainError("theorem2_probe: t, k >= 1");
  if (!(config.p > 0 && config.p < 1)) throw DomainError("theorem2_probe: p must lie in (0, 1)");
  ProbeSummary s;
  s.config = config;
  const ValueSystem vs = ValueSystem::build(config.t, config.k, config.monoid);
  const int k = config.k;
  const Monoid& m = vs.string_monoid(k);  // may throw CapExceeded
  const GreenClasses g = green_classes(m);
  const Word block = splitting_block(vs, k);
  s.block_length = block.size();
  s.r_classes = g.r_classes.size();
  s.delta = config.delta.value_or(1e-2 / std::pow(3.0, config.t));
  s.window = static_cast<std::size_t>(s.delta * static_cast<double>(config.n));
  const std::size_t stride = std::max<std::size_t>(1, s.window / 3);

  try {
    const auto lim = limit_coefficients<double>(vs, k);
    const auto& pers = vs.persistent_values(k);
    Eigen::VectorXd step(static_cast<Eigen::Index>(pers.size()));
    for (std::size_t a = 0; a < pers.size(); ++a) step(static_cast<Eigen::Index>(a)) = lim.coefficient(pers[a]);
    step /= step.sum();
    const auto abs = absorption<double>(m, step);
    s.solved.assign(abs.probability.data(), abs.probability.data() + abs.probability.size());
  } catch (const Error&) {
    s.solved.clear();  // reported as unavailable
  }

  const std::size_t R = g.r_classes.size();
  s.joint.assign(R, std::vector<std::uint64_t>(R, 0));
  std::map<std::pair<int, int>, std::vector<std::uint64_t>> nice_by_class;
  for (std::uint64_t i = 0; i < config.trials; ++i) {
    const Word w = sample_predicate(config.n, config.p, config.seed, i);
    const Word wr = reversed(w);
    const ValueString fwd = value_string(w, k, vs);
    const ValueString rev = value_string(wr, k, vs);
    const int cf = g.r_of[prefix_class(m, fwd)];
    const int cr = g.r_of[prefix_class(m, rev)];
    if (cf < 0 || cr < 0) continue;
    ++s.classified;
    ++s.joint[cf][cr];
    const bool nice = fwd.all_persistent && rev.all_persistent &&
                      covers_windows(block_occurrences(fwd, block), config.n, s.window, stride) &&
                      covers_windows(block_occurrences(rev, block), config.n, s.window, stride);
    if (nice) {
      ++s.nice;
      nice_by_class[{cf, cr}].push_back(i);
    }
  }

  // Independence: each joint cell against the product of its marginals.
  if (s.classified > 0) {
    const double total = static_cast<double>(s.classified);
    std::vector<double> pf(R, 0), pr(R, 0);
    for (std::size_t a = 0; a < R; ++a)
      for (std::size_t b = 0; b < R; ++b) {
        pf[a] += static_cast<double>(s.joint[a][b]) / total;
        pr[b] += static_cast<double>(s.joint[a][b]) / total;
      }
    for (std::size_t a = 0; a < R; ++a)
      for (std::size_t b = 0; b < R; ++b) {
        const double e = pf[a] * pr[b];
        const double obs = static_cast<double>(s.joint[a][b]) / total;
        const double sigma = std::sqrt(e * (1 - e) / total);
        const double z = sigma > 0 ? std::abs(obs - e) / sigma : (std::abs(obs - e) > 0 ? INFINITY : 0.0);
        s.max_z = std::max(s.max_z, z);
      }
    s.independent = s.max_z <= 4;
  }

  // Pairs of nice trials sharing a class pair: consecutive members of each group.
  // Linear sentences are evaluated; A_j on the cycle uses the scan, which is
  // exhaustively checked against evaluation.
  std::vector<Sentence> linear;
  for (const char* name : {"A", "B", "C", "D"}) linear.push_back(builtin(name));
  TypeStore store(2);
  for (const auto& [cls, members] : nice_by_class) {
    for (std::size_t i = 0; i + 1 < members.size() && s.pairs_checked < config.pairs; i += 2) {
      const Word u = sample_predicate(config.n, config.p, config.seed, members[i]);
      const Word v = sample_predicate(config.n, config.p, config.seed, members[i + 1]);
      ++s.pairs_checked;
      bool agree = true;
      for (const Sentence& sentence : linear)
        if (evaluate({u, false}, sentence) != evaluate({v, false}, sentence)) agree = false;
      for (int j = 1; j <= k + 1; ++j)
        if (scan_consecutive(u, j) != scan_consecutive(v, j)) agree = false;
      if (!agree) ++s.catalog_disagreements;
      if (store.fold(u, config.t) != store.fold(v, config.t)) ++s.type_disagreements;
    }
  }
  return s;
}

void write_probe(std::ostream& os, const ProbeSummary& s) {
  os << "zeroone-probe 1\n";
  os << "t " << s.config.t << " k " << s.config.k << " n " << s.config.n << " p " << format_double(s.config.p)
     << " trials " << s.config.trials << " seed " << s.config.seed << '\n';
  os << "delta " << format_double(s.delta) << " window " << s.window << " block-length " << s.block_length
     << " r-classes " << s.r_classes << '\n';
  os << "classified " << s.classified << " nice " << s.nice << " nice-fraction "
     << format_double(static_cast<double>(s.nice) / static_cast<double>(s.config.trials)) << '\n';
  for (std::size_t a = 0; a < s.joint.size(); ++a) {
    os << "joint " << a;
    for (auto c : s.joint[a]) os << ' ' << c;
    os << '\n';
  }
  if (s.solved.empty()) os << "solved unavailable\n";
  else {
    os << "solved";
    for (double x : s.solved) os << ' ' << format_double(x);
    os << '\n';
  }
  os << "max-z " << format_double(s.max_z) << " independent " << (s.independent ? 1 : 0) << '\n';
  os << "pairs " << s.pairs_checked << " catalog-disagreements " << s.catalog_disagreements
     << " type-disagreements " << s.type_disagreements << '\n';
}

}  // namespace zeroone
