#pragma once

// Seeded sampling of U_{n,p} and empirical sentence probabilities.
//
// Random numbers: xoshiro256** (Blackman & Vigna), with the 256-bit state
// filled by SplitMix64.  Trial i of a run with seed S uses its own stream,
// seeded from SplitMix64(S) mixed with i, so any trial can be regenerated
// alone and results do not depend on evaluation order.

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zeroone/intervals.hpp"
#include "zeroone/logic.hpp"
#include "zeroone/word_types.hpp"

namespace zeroone {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);
  /// Independent stream for one trial.
  static Rng for_trial(std::uint64_t seed, std::uint64_t trial);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();
  /// Uniform on (0, 1].
  double uniform();

 private:
  std::uint64_t s_[4];
};

/// Positions of ones of a Bernoulli(p) word of length n, in increasing
/// order.  Sparse words skip zeroes geometrically; dense ones (p > 1/4) are
/// drawn bit by bit.  Both are exact.
class OnesStream {
 public:
  OnesStream(std::size_t n, double p, Rng rng);
  std::optional<std::size_t> next();

 private:
  std::size_t n_;
  double p_;
  double log_q_;
  std::size_t pos_ = 0;
  Rng rng_;
};

Word sample_predicate(std::size_t n, double p, std::uint64_t seed, std::uint64_t trial);

/// Scan evaluators, equivalent to evaluating the built-in sentence.
bool scan_A(std::span<const Letter> w);
bool scan_B(std::span<const Letter> w);
bool scan_C(std::span<const Letter> w);
bool scan_D(std::span<const Letter> w);
bool scan_consecutive(std::span<const Letter> cycle, int k);

/// Probability that the first 11 comes before the first 101: 1 / (2 - p).
double race_oracle_D(double p);
/// Same probability by summing over all words of length <= max_len, with
/// the undecided mass returned separately (the truth lies in
/// [value, value + undecided]).
struct RaceBounds {
  double value = 0;
  double undecided = 0;
};
RaceBounds race_enumeration_D(double p, std::size_t max_len);

/// Exact Pr[no two cyclically adjacent ones] on a cycle of n Bernoulli(p)
/// bits: the trace of the n-th power of the 2x2 transfer matrix.
double circular_pair_free_probability(std::size_t n, double p);

struct TrialPlan {
  std::size_t n = 0;
  double p = 0;
  double alpha = std::numeric_limits<double>::quiet_NaN();  // p = n^-alpha, when used
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  /// Built-in name ("A", "B", "C", "D", "A_k") or sentence text.
  std::string sentence;
  /// Only read for text sentences of neutral vocabulary.
  bool circular = false;
  std::string regime;
  EvalOptions eval;
};

struct SweepRow {
  std::size_t n = 0;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double p = 0;
  std::string sentence;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double empirical = 0;
  double standard_error = 0;
  std::string regime;
  std::string error;  // set when the cell could not be evaluated
};

/// Success frequency over the plan's trials.  Built-ins use scans (D stops
/// at the first 11 or 101); text sentences are evaluated in full.
SweepRow empirical_probability(const TrialPlan& plan);

struct RegimePoint {
  std::string label;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  bool mirrored = false;  // 1 - p = n^-alpha instead of p = n^-alpha
  std::optional<double> fixed_p;
  double scale = 1;       // p = scale * n^-alpha
};

struct SweepConfig {
  int t = 2;
  int k = 2;
  std::vector<std::string> sentences;
  std::vector<std::size_t> ns;
  std::vector<RegimePoint> grid;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
};

/// The five categories of the classification for a given k, with the
/// knife edges p = n^-1/j between them and the mirrored side.
std::vector<RegimePoint> theorem1_grid(int k);
std::vector<std::string> default_sentences(int k);

std::vector<SweepRow> regime_sweep(const SweepConfig& config);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Per-trial interval statistics along one (n, p).
struct IntervalStats {
  std::size_t n = 0;
  double p = 0;
  std::uint64_t trials = 0;
  double transient_fraction = 0;  // trials with a transient complete k-value
  double block_fraction = 0;      // trials whose beta_2... contains the block
  double ratio_min = 0, ratio_mean = 0, ratio_max = 0;  // N / (n p^k)
};

/// The splitting block A_1 ... A_R over P_k: for every (R-class, L-class)
/// pair, a representative of the L-class followed by one of the R-class.
Word splitting_block(const ValueSystem& vs, int k);

IntervalStats interval_statistics(std::size_t n, double p, int k, const ValueSystem& vs,
                                  std::uint64_t trials, std::uint64_t seed);

struct ProbeConfig {
  std::size_t n = 10'000;
  double p = 0;
  int t = 2;
  int k = 2;
  std::uint64_t trials = 500;
  std::uint64_t seed = 0;
  std::optional<double> delta;  // default 10^-2 3^-t
  std::size_t pairs = 100;
  MonoidOptions monoid;
};

struct ProbeSummary {
  ProbeConfig config;
  double delta = 0;
  std::size_t window = 0;
  std::size_t block_length = 0;
  std::size_t r_classes = 0;
  std::uint64_t nice = 0;
  std::uint64_t classified = 0;  // both directions give a persistent class
  std::vector<std::vector<std::uint64_t>> joint;  // [forward][reverse]
  std::vector<double> solved;                     // P[R_x] of the limit chain
  double max_z = 0;
  bool independent = true;
  std::size_t pairs_checked = 0;
  std::size_t catalog_disagreements = 0;
  std::size_t type_disagreements = 0;
};

/// Desk-scale check of the linear law: R-classes of the forward and the
/// reversed value strings, niceness, independence and the catalog on pairs
/// of nice trials with equal class pairs.  Throws CapExceeded when the
/// string monoid over P_k is too large.
ProbeSummary theorem2_probe(const ProbeConfig& config);
void write_probe(std::ostream& os, const ProbeSummary& s);

}  // namespace zeroone
