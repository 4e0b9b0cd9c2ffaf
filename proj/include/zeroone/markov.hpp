#pragma once

// Value distributions of random 0/1 words and the chains behind them.
//
// With U(i) independent Bernoulli(p), the level-1 value of an interval is
// a_m with probability (1-p)^(m-1) p and b with probability (1-p)^s.  The
// persistent j-values then arrive as i.i.d. letters over P_j until the
// first transient one; a (j+1)-value is the class of that letter string
// together with the transient tail.  The string class performs the Markov
// chain M(p) on the string monoid over P_j:
//
//   alpha -> alpha + beta  with probability  p_beta / (1 - p*)
//
// stopped after a Geometric(p*) number of steps, p* = Pr[transient j-value].
// As p -> 0 the letter probabilities tend to constants c_beta (the limit
// chain) and every transient probability is (c_beta + o(1)) p.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "zeroone/error.hpp"
#include "zeroone/intervals.hpp"
#include "zeroone/monoid.hpp"

namespace zeroone {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVectorX = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using SparseRowMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

struct NumericOptions {
  double tolerance = 1e-12;
  std::size_t max_steps = 1'000'000;
  /// Largest transient block solved densely in `absorption`.
  std::size_t max_dense_states = 5000;
};

/// Exact (to tolerance) distribution of the level-j value of one interval.
template <typename Scalar>
struct ValueDistribution {
  int level = 1;
  VectorX<Scalar> probability;  // indexed by ValueId
  /// Probability mass dropped by truncating the geometric series.
  Scalar mass_defect = 0;
};

/// p -> 0 limit of a level-j distribution: persistent values carry their
/// limiting probability, transient values the coefficient of p.
template <typename Scalar>
struct LimitDistribution {
  int level = 1;
  VectorX<Scalar> coefficient;  // indexed by ValueId
  std::vector<bool> persistent;
  /// p* ~ c p at this level: the sum of the transient coefficients.
  Scalar c = 0;
};

/// Chain on the string monoid over P_j.  `step(a)` is the probability of
/// appending persistent letter a (p_beta^+, or c_beta for the limit chain);
/// `stop` is p* (zero for the limit chain); `tail` is d_y over T_j.
template <typename Scalar>
struct ChainSpec {
  const Monoid* monoid = nullptr;
  int level = 1;
  VectorX<Scalar> step;
  Scalar stop = 0;
  VectorX<Scalar> tail;

  std::size_t states() const { return monoid->size(); }

  SparseRowMatrix<Scalar> transition() const {
    const std::size_t n = states();
    std::vector<Eigen::Triplet<Scalar>> entries;
    entries.reserve(n * static_cast<std::size_t>(step.size()));
    for (Element x = 0; x < n; ++x)
      for (Eigen::Index a = 0; a < step.size(); ++a)
        if (step(a) != Scalar(0))
          entries.emplace_back(x, monoid->right(x, static_cast<Letter>(a)), step(a));
    SparseRowMatrix<Scalar> P(n, n);
    P.setFromTriplets(entries.begin(), entries.end());  // duplicates are summed
    return P;
  }
};

namespace detail {

template <typename Scalar>
RowVectorX<Scalar> unit_at_identity(std::size_t n) {
  RowVectorX<Scalar> f = RowVectorX<Scalar>::Zero(static_cast<Eigen::Index>(n));
  f(0) = Scalar(1);
  return f;
}

template <typename Scalar>
ValueDistribution<Scalar> level_one(const ValueSystem& vs, Scalar p) {
  ValueDistribution<Scalar> d;
  d.level = 1;
  const auto values = vs.values(1);
  d.probability.resize(static_cast<Eigen::Index>(values.size()));
  Scalar run = Scalar(1);  // (1-p)^(m-1)
  for (const Value& v : values) {
    d.probability(v.index) = v.persistent ? run : run * p;
    run *= Scalar(1) - p;
  }
  return d;
}

}  // namespace detail

/// M(p) on the string monoid over P_level, driven by the level distribution.
template <typename Scalar>
ChainSpec<Scalar> value_chain(const ValueSystem& vs, int level,
                              const ValueDistribution<Scalar>& dist) {
  if (dist.level != level) throw MismatchError("value_chain: distribution is for another level");
  ChainSpec<Scalar> chain;
  chain.monoid = &vs.string_monoid(level);
  chain.level = level;
  Scalar stop = 0;
  for (ValueId y : vs.transient_values(level)) stop += dist.probability(y);
  if (!(stop > Scalar(0)) || !(stop < Scalar(1)))
    throw DomainError("value_chain: stop probability must lie strictly inside (0, 1)");
  chain.stop = stop;
  const auto& pers = vs.persistent_values(level);
  chain.step.resize(static_cast<Eigen::Index>(pers.size()));
  for (std::size_t a = 0; a < pers.size(); ++a)
    chain.step(static_cast<Eigen::Index>(a)) = dist.probability(pers[a]) / (Scalar(1) - stop);
  const auto& trans = vs.transient_values(level);
  chain.tail.resize(static_cast<Eigen::Index>(trans.size()));
  for (std::size_t i = 0; i < trans.size(); ++i)
    chain.tail(static_cast<Eigen::Index>(i)) = dist.probability(trans[i]) / stop;
  return chain;
}

/// f(u, .): distribution after u steps from O, ignoring the stop.
template <typename Scalar>
RowVectorX<Scalar> step_distribution(const ChainSpec<Scalar>& chain, std::size_t u) {
  const SparseRowMatrix<Scalar> P = chain.transition();
  RowVectorX<Scalar> f = detail::unit_at_identity<Scalar>(chain.states());
  for (std::size_t i = 0; i < u; ++i) f = f * P;
  return f;
}

/// Distribution of the value of one level-j interval for Bernoulli(p) bits.
template <typename Scalar>
ValueDistribution<Scalar> kvalue_distribution(const ValueSystem& vs, int level, Scalar p,
                                              const NumericOptions& opt = {}) {
  if (!(p > Scalar(0)) || !(p < Scalar(1))) throw DomainError("p must lie in (0, 1)");
  if (level < 1 || level > vs.levels()) throw DomainError("level outside the value system");
  ValueDistribution<Scalar> d = detail::level_one(vs, p);
  for (int j = 1; j < level; ++j) {
    const ChainSpec<Scalar> chain = value_chain(vs, j, d);
    const SparseRowMatrix<Scalar> P = chain.transition();
    const Scalar keep = Scalar(1) - chain.stop;

    // W = sum_u f(u, .) (1-p*)^u p*, truncated once the rest is below tol.
    RowVectorX<Scalar> f = detail::unit_at_identity<Scalar>(chain.states());
    RowVectorX<Scalar> w = RowVectorX<Scalar>::Zero(f.size());
    Scalar weight = chain.stop;
    Scalar remaining = Scalar(1);
    std::size_t u = 0;
    while (remaining >= Scalar(opt.tolerance)) {
      if (++u > opt.max_steps)
        throw ConvergenceError("kvalue_distribution: series did not converge within the step cap");
      w += weight * f;
      remaining -= weight;
      weight *= keep;
      f = f * P;
    }

    ValueDistribution<Scalar> next;
    next.level = j + 1;
    next.mass_defect = d.mass_defect + remaining;
    const auto values = vs.values(j + 1);
    next.probability.resize(static_cast<Eigen::Index>(values.size()));
    const auto& trans = vs.transient_values(j);
    for (Element alpha = 0; alpha < chain.states(); ++alpha)
      for (std::size_t i = 0; i < trans.size(); ++i)
        next.probability(vs.pair_value(j + 1, alpha, trans[i])) =
            w(alpha) * chain.tail(static_cast<Eigen::Index>(i));
    d = std::move(next);
  }
  return d;
}

/// The limit chain M° on the string monoid over P_level.
template <typename Scalar>
ChainSpec<Scalar> limit_chain(const ValueSystem& vs, int level,
                              const LimitDistribution<Scalar>& lim) {
  if (lim.level != level) throw MismatchError("limit_chain: coefficients are for another level");
  ChainSpec<Scalar> chain;
  chain.monoid = &vs.string_monoid(level);
  chain.level = level;
  const auto& pers = vs.persistent_values(level);
  chain.step.resize(static_cast<Eigen::Index>(pers.size()));
  for (std::size_t a = 0; a < pers.size(); ++a)
    chain.step(static_cast<Eigen::Index>(a)) = lim.coefficient(pers[a]);
  const auto& trans = vs.transient_values(level);
  chain.tail.resize(static_cast<Eigen::Index>(trans.size()));
  for (std::size_t i = 0; i < trans.size(); ++i)
    chain.tail(static_cast<Eigen::Index>(i)) = lim.coefficient(trans[i]) / lim.c;
  return chain;
}

template <typename Scalar>
LimitDistribution<Scalar> limit_coefficients(const ValueSystem& vs, int level,
                                             const NumericOptions& opt = {}) {
  if (level < 1 || level > vs.levels()) throw DomainError("level outside the value system");
  LimitDistribution<Scalar> lim;
  lim.level = 1;
  lim.coefficient = VectorX<Scalar>::Ones(static_cast<Eigen::Index>(vs.values(1).size()));
  for (const Value& v : vs.values(1)) lim.persistent.push_back(v.persistent);
  lim.c = static_cast<Scalar>(vs.transient_values(1).size());

  for (int j = 1; j < level; ++j) {
    const ChainSpec<Scalar> chain = limit_chain(vs, j, lim);
    const SparseRowMatrix<Scalar> P = chain.transition();
    const Monoid& m = *chain.monoid;
    const std::size_t n = m.size();

    // Transient states: c * sum_u f°(u, alpha).  Persistent states: the
    // limit of f°(u, alpha), reached by power iteration.
    RowVectorX<Scalar> f = detail::unit_at_identity<Scalar>(n);
    RowVectorX<Scalar> visits = RowVectorX<Scalar>::Zero(f.size());
    std::size_t u = 0;
    while (true) {
      Scalar transient_mass = 0;
      for (Element x = 0; x < n; ++x)
        if (!m.persistent(x)) {
          visits(x) += f(x);
          transient_mass += f(x);
        }
      RowVectorX<Scalar> g = f * P;
      const Scalar tv = (g - f).cwiseAbs().sum() / Scalar(2);
      f = std::move(g);
      if (transient_mass < Scalar(opt.tolerance) && tv < Scalar(opt.tolerance)) break;
      if (++u > opt.max_steps)
        throw ConvergenceError("limit_coefficients: power iteration did not settle");
    }

    LimitDistribution<Scalar> next;
    next.level = j + 1;
    const auto values = vs.values(j + 1);
    next.coefficient.resize(static_cast<Eigen::Index>(values.size()));
    const auto& trans = vs.transient_values(j);
    for (Element alpha = 0; alpha < n; ++alpha) {
      const Scalar w = m.persistent(alpha) ? f(alpha) : lim.c * visits(alpha);
      for (std::size_t i = 0; i < trans.size(); ++i)
        next.coefficient(vs.pair_value(j + 1, alpha, trans[i])) =
            w * chain.tail(static_cast<Eigen::Index>(i));
    }
    for (const Value& v : values) {
      next.persistent.push_back(v.persistent);
      if (!v.persistent) next.c += next.coefficient(v.index);
    }
    lim = std::move(next);
  }
  return lim;
}

/// States lying in a minimal closed set of the chain with this transition
/// support, found by plain reachability (independent of the monoid code).
template <typename Scalar>
std::vector<bool> minimal_closed_states(const SparseRowMatrix<Scalar>& P) {
  const Eigen::Index n = P.rows();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n));
  for (Eigen::Index s = 0; s < n; ++s) {
    std::vector<Eigen::Index> queue{s};
    reach[s][s] = true;
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (typename SparseRowMatrix<Scalar>::InnerIterator it(P, queue[q]); it; ++it)
        if (it.value() != Scalar(0) && !reach[s][it.col()]) {
          reach[s][it.col()] = true;
          queue.push_back(it.col());
        }
  }
  std::vector<bool> closed(n, true);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n && closed[x]; ++y)
      if (reach[x][y] && !reach[y][x]) closed[x] = false;
  return closed;
}

template <typename Scalar>
struct AbsorptionResult {
  GreenClasses classes;
  /// Probability that the walk from O ends in each R-class.
  VectorX<Scalar> probability;
};

/// Absorption of the walk x -> x + a (letter a with `letter_probability(a)`)
/// into the minimal closed sets, i.e. the R-classes.  Dense LU on the
/// transient block.
template <typename Scalar>
AbsorptionResult<Scalar> absorption(const Monoid& m, const VectorX<Scalar>& letter_probability,
                                    const NumericOptions& opt = {}) {
  const std::size_t k = m.alphabet().size();
  if (static_cast<std::size_t>(letter_probability.size()) != k)
    throw MismatchError("absorption: one probability per letter expected");
  if (std::abs(letter_probability.sum() - Scalar(1)) > Scalar(1e-9) ||
      (letter_probability.array() < Scalar(0)).any())
    throw DomainError("absorption: letter probabilities must form a distribution");

  AbsorptionResult<Scalar> out;
  out.classes = green_classes(m);
  const auto R = static_cast<Eigen::Index>(out.classes.r_classes.size());
  out.probability = VectorX<Scalar>::Zero(R);
  if (m.persistent(m.identity())) {
    out.probability(out.classes.r_of[m.identity()]) = Scalar(1);
    return out;
  }

  std::vector<Eigen::Index> slot(m.size(), -1);
  std::vector<Element> transient;
  for (Element x = 0; x < m.size(); ++x)
    if (!m.persistent(x)) {
      slot[x] = static_cast<Eigen::Index>(transient.size());
      transient.push_back(x);
    }
  const auto T = static_cast<Eigen::Index>(transient.size());
  if (static_cast<std::size_t>(T) > opt.max_dense_states)
    throw GuardError("absorption: " + std::to_string(T) + " transient states exceed the dense limit");

  MatrixX<Scalar> A = MatrixX<Scalar>::Identity(T, T);
  MatrixX<Scalar> B = MatrixX<Scalar>::Zero(T, R);
  for (Eigen::Index i = 0; i < T; ++i)
    for (Letter a = 0; a < k; ++a) {
      const Element y = m.right(transient[i], a);
      if (slot[y] >= 0) A(i, slot[y]) -= letter_probability(a);
      else B(i, out.classes.r_of[y]) += letter_probability(a);
    }
  const Eigen::PartialPivLU<MatrixX<Scalar>> lu(A);
  const MatrixX<Scalar> H = lu.solve(B);
  if ((A * H - B).cwiseAbs().maxCoeff() > Scalar(1e-8))
    throw std::logic_error("absorption: singular first-step system");
  out.probability = H.row(slot[m.identity()]).transpose();
  return out;
}

}  // namespace zeroone
