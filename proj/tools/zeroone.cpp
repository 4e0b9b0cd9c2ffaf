// Command-line front end.  Run `zeroone --help` or `zeroone <command> --help`.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>

#include "zeroone/cycles.hpp"
#include "zeroone/intervals.hpp"
#include "zeroone/logic.hpp"
#include "zeroone/markov.hpp"
#include "zeroone/monoid.hpp"
#include "zeroone/simulate.hpp"
#include "zeroone/word_types.hpp"

using namespace zeroone;
using nlohmann::json;

namespace {

// Exit codes: eval uses 0 (true) and 1 (false); everything else that goes
// wrong exits with 2.
constexpr int kFailure = 2;

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

Word read_word(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  Word w;
  for (char c : text) {
    if (c == '0' || c == '1') w.push_back(static_cast<Letter>(c - '0'));
    else if (!std::isspace(static_cast<unsigned char>(c)))
      throw std::runtime_error(path + ": words are written with 0 and 1 only");
  }
  return w;
}

double resolve_p(std::size_t n, const std::optional<double>& p, const std::optional<double>& alpha) {
  if (p && alpha) throw CLI::ValidationError("--p and --alpha are mutually exclusive");
  if (p) return *p;
  if (alpha) return std::pow(static_cast<double>(n), -*alpha);
  throw CLI::ValidationError("one of --p or --alpha is required");
}

json row_json(const SweepRow& r) {
  json j{{"n", r.n},           {"p", r.p},
         {"sentence", r.sentence}, {"trials", r.trials},
         {"successes", r.successes}, {"empirical", r.empirical},
         {"se", r.standard_error}, {"regime", r.regime}};
  j["alpha"] = std::isnan(r.alpha) ? json(nullptr) : json(r.alpha);
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

template <typename Vec>
void write_row(std::ostream& os, const std::string& label, const Vec& v) {
  os << label;
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ',' << std::setprecision(15) << v(i);
  os << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ehrenfeucht types of 0/1 words, their monoids, value chains and zero-one laws"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "Write output to FILE instead of stdout");

  // monoid
  auto* monoid_cmd = app.add_subcommand("monoid", "Generate the depth-t monoid of words");
  int t = 2;
  std::size_t letters = 2;
  std::size_t cap = 50'000;
  bool with_types = false;
  monoid_cmd->add_option("--t", t, "Depth")->required()->check(CLI::Range(0, 6));
  monoid_cmd->add_option("--letters", letters, "Alphabet size (2 = binary)")->check(CLI::Range(1, 64));
  monoid_cmd->add_option("--cap", cap, "Element cap");
  monoid_cmd->add_flag("--types", with_types, "Include serialized types");

  // values
  auto* values_cmd = app.add_subcommand("values", "Print the value system");
  int k = 2;
  values_cmd->add_option("--t", t, "Depth")->required()->check(CLI::PositiveNumber);
  values_cmd->add_option("--k", k, "Levels")->required()->check(CLI::PositiveNumber);

  // decompose
  auto* decompose_cmd = app.add_subcommand("decompose", "Intervals of a word as CSV");
  std::string word_path;
  int level = 1;
  decompose_cmd->add_option("--word", word_path, "File with the word (- for stdin)")->required();
  decompose_cmd->add_option("--level", level, "Interval level")->required()->check(CLI::PositiveNumber);
  decompose_cmd->add_option("--t", t, "Depth")->check(CLI::PositiveNumber);

  // chain
  auto* chain_cmd = app.add_subcommand("chain", "Value chain at level k for a given p");
  double chain_p = 0;
  std::vector<std::size_t> steps;
  chain_cmd->add_option("--t", t, "Depth")->required()->check(CLI::PositiveNumber);
  chain_cmd->add_option("--k", k, "Chain level")->required()->check(CLI::PositiveNumber);
  chain_cmd->add_option("--p", chain_p, "Probability of a one")->required()->check(CLI::Range(0.0, 1.0));
  chain_cmd->add_option("--u", steps, "Steps u at which to print f(u, .)")->delimiter(',');

  // universal / cycle-type
  auto* universal_cmd = app.add_subcommand("universal", "Universal sequence R for binary cycles");
  universal_cmd->add_option("--t", t, "Depth")->required()->check(CLI::Range(1, 3));
  auto* cycle_cmd = app.add_subcommand("cycle-type", "Circular type of a cycle");
  cycle_cmd->add_option("--word", word_path, "File with the cycle (- for stdin)")->required();
  cycle_cmd->add_option("--t", t, "Depth")->required()->check(CLI::Range(0, 4));

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a sentence; exit 0 if true, 1 if false");
  std::string sentence_text, builtin_name;
  bool circular = false;
  bool as_json = false;
  auto* sentence_opt = eval_cmd->add_option("--sentence", sentence_text, "Sentence text");
  eval_cmd->add_option("--builtin", builtin_name, "A, B, C, D or A_k")->excludes(sentence_opt);
  eval_cmd->add_option("--word", word_path, "File with the word (- for stdin)")->required();
  eval_cmd->add_flag("--circular", circular, "Read the word as a cycle");
  eval_cmd->add_flag("--json", as_json, "JSON output");

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "Empirical probability of one sentence");
  std::size_t n = 0;
  std::optional<double> p_opt, alpha_opt;
  std::uint64_t trials = 1000;
  std::optional<std::uint64_t> seed;
  auto* sim_sentence = simulate_cmd->add_option("--sentence", sentence_text, "Sentence text");
  simulate_cmd->add_option("--builtin", builtin_name, "A, B, C, D or A_k")->excludes(sim_sentence);
  simulate_cmd->add_option("--n", n, "Model size")->required();
  simulate_cmd->add_option("--p", p_opt, "Probability of a one")->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--alpha", alpha_opt, "Use p = n^-alpha");
  simulate_cmd->add_option("--trials", trials, "Trials")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", seed, "Random seed")->required();
  simulate_cmd->add_flag("--circular", circular, "Neutral sentences are read on the cycle");
  simulate_cmd->add_flag("--json", as_json, "JSON output");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Empirical probabilities across a regime grid");
  std::string preset = "theorem1";
  std::vector<std::size_t> ns;
  std::vector<std::string> sentences;
  sweep_cmd->add_option("--preset", preset, "Grid preset")->check(CLI::IsMember({"theorem1"}));
  sweep_cmd->add_option("--t", t, "Depth")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--k", k, "Regime index")->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--n", ns, "Model sizes")->required()->delimiter(',');
  sweep_cmd->add_option("--sentences", sentences, "Sentences (default A_1 .. A_k+1)")->delimiter(';');
  sweep_cmd->add_option("--trials", trials, "Trials per cell")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", seed, "Random seed")->required();
  sweep_cmd->add_flag("--json", as_json, "JSON output");

  // probe
  auto* probe_cmd = app.add_subcommand("probe", "Class frequencies and niceness of the linear law");
  std::optional<double> delta;
  std::size_t pairs = 100;
  probe_cmd->add_option("--t", t, "Depth")->required()->check(CLI::PositiveNumber);
  probe_cmd->add_option("--k", k, "Level")->required()->check(CLI::PositiveNumber);
  probe_cmd->add_option("--n", n, "Model size")->required();
  probe_cmd->add_option("--p", p_opt, "Probability of a one")->check(CLI::Range(0.0, 1.0));
  probe_cmd->add_option("--alpha", alpha_opt, "Use p = n^-alpha");
  probe_cmd->add_option("--trials", trials, "Trials")->check(CLI::PositiveNumber);
  probe_cmd->add_option("--seed", seed, "Random seed")->required();
  probe_cmd->add_option("--delta", delta, "Window fraction (default 10^-2 3^-t)");
  probe_cmd->add_option("--pairs", pairs, "Nice pairs to compare");
  probe_cmd->add_option("--cap", cap, "Element cap for the string monoid");
  probe_cmd->add_flag("--json", as_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kFailure;
  }

  try {
    Output out(out_path);
    std::ostream& os = out.stream();

    if (*monoid_cmd) {
      const Alphabet alphabet = letters == 2 ? Alphabet::binary() : Alphabet::indexed(letters);
      const Monoid m = Monoid::generate(alphabet, t, {.cap = cap});
      write_monoid(os, m, with_types);
    } else if (*values_cmd) {
      write_value_system(os, ValueSystem::build(t, k));
    } else if (*decompose_cmd) {
      const Word w = read_word(word_path);
      const ValueSystem vs = ValueSystem::build(t, level);
      write_decomposition_csv(os, decompose(w, level, vs), w, vs);
    } else if (*chain_cmd) {
      if (!(chain_p > 0 && chain_p < 1)) throw DomainError("--p must lie strictly between 0 and 1");
      const ValueSystem vs = ValueSystem::build(t, k);
      const auto dist = kvalue_distribution<double>(vs, k, chain_p);
      const auto chain = value_chain<double>(vs, k, dist);
      const Monoid& m = *chain.monoid;
      os << "zeroone-chain 1\n";
      os << "# states: element,persistent,representative over P_" << k << "\n";
      for (Element x = 0; x < m.size(); ++x)
        os << "state," << x << ',' << (m.persistent(x) ? 1 : 0) << ','
           << (x == m.identity() ? std::string("-") : to_string(m.representative(x), m.alphabet())) << '\n';
      os << "# letter probabilities p_beta/(1-p*) and stop probability p*\n";
      write_row(os, "step", chain.step);
      os << "stop," << std::setprecision(15) << chain.stop << '\n';
      os << "# transitions: from,to,probability\n";
      const auto P = chain.transition();
      for (Eigen::Index r = 0; r < P.outerSize(); ++r)
        for (SparseRowMatrix<double>::InnerIterator it(P, r); it; ++it)
          os << "transition," << it.row() << ',' << it.col() << ',' << std::setprecision(15) << it.value() << '\n';
      for (std::size_t u : steps) write_row(os, "f," + std::to_string(u), step_distribution(chain, u));
      const Eigen::VectorXd letters_p = chain.step / chain.step.sum();
      const auto abs = absorption<double>(m, letters_p);
      os << "# absorption into R-classes from O\n";
      write_row(os, "absorption", abs.probability);
      const auto lim = limit_coefficients<double>(vs, k);
      os << "# limit coefficients per level-" << k << " value: value,name,persistent,coefficient\n";
      for (const Value& v : vs.values(k))
        os << "limit," << v.index << ',' << v.name << ',' << (v.persistent ? 1 : 0) << ',' << std::setprecision(15)
           << lim.coefficient(v.index) << '\n';
      os << "limit-c," << lim.c << '\n';
    } else if (*universal_cmd) {
      const Monoid m = Monoid::generate(Alphabet::binary(), t);
      const UniversalSequence r = universal_sequence(m);
      os << "length " << r.word.size() << '\n' << to_string(r.word, m.alphabet()) << '\n';
    } else if (*cycle_cmd) {
      const Word w = read_word(word_path);
      TypeStore store(2);
      for (const std::string& s : serialize(store, circular_type(store, w, t))) os << s << '\n';
    } else if (*eval_cmd) {
      if (sentence_text.empty() == builtin_name.empty())
        throw CLI::ValidationError("exactly one of --sentence or --builtin is required");
      const Sentence s = builtin_name.empty() ? parse(sentence_text) : builtin(builtin_name);
      const Word w = read_word(word_path);
      const bool view = s.vocabulary() == Vocabulary::circular || circular;
      const bool truth = evaluate({w, view}, s);
      if (as_json)
        os << json{{"truth", truth}, {"vocabulary", to_string(s.vocabulary())}, {"qdepth", qdepth(s)}}.dump() << '\n';
      else
        os << (truth ? "true" : "false") << '\n';
      return truth ? 0 : 1;
    } else if (*simulate_cmd) {
      if (sentence_text.empty() == builtin_name.empty())
        throw CLI::ValidationError("exactly one of --sentence or --builtin is required");
      TrialPlan plan;
      plan.n = n;
      plan.p = resolve_p(n, p_opt, alpha_opt);
      if (alpha_opt) plan.alpha = *alpha_opt;
      plan.trials = trials;
      plan.seed = *seed;
      plan.sentence = builtin_name.empty() ? sentence_text : builtin_name;
      plan.circular = circular;
      const SweepRow row = empirical_probability(plan);
      if (as_json) os << row_json(row).dump(2) << '\n';
      else write_sweep_csv(os, {row});
    } else if (*sweep_cmd) {
      SweepConfig config;
      config.t = t;
      config.k = k;
      config.ns = ns;
      config.sentences = sentences;
      config.trials = trials;
      config.seed = *seed;
      config.grid = theorem1_grid(k);
      const auto rows = regime_sweep(config);
      if (as_json) {
        json j = json::array();
        for (const auto& r : rows) j.push_back(row_json(r));
        os << j.dump(2) << '\n';
      } else {
        write_sweep_csv(os, rows);
      }
    } else if (*probe_cmd) {
      ProbeConfig config;
      config.n = n;
      config.p = resolve_p(n, p_opt, alpha_opt);
      config.t = t;
      config.k = k;
      config.trials = trials;
      config.seed = *seed;
      config.delta = delta;
      config.pairs = pairs;
      config.monoid.cap = cap;
      const ProbeSummary s = theorem2_probe(config);
      if (as_json) {
        os << json{{"t", t},
                   {"k", k},
                   {"n", n},
                   {"p", config.p},
                   {"trials", trials},
                   {"seed", *seed},
                   {"delta", s.delta},
                   {"window", s.window},
                   {"block_length", s.block_length},
                   {"r_classes", s.r_classes},
                   {"classified", s.classified},
                   {"nice", s.nice},
                   {"joint", s.joint},
                   {"solved", s.solved},
                   {"max_z", s.max_z},
                   {"independent", s.independent},
                   {"pairs", s.pairs_checked},
                   {"catalog_disagreements", s.catalog_disagreements},
                   {"type_disagreements", s.type_disagreements}}
                  .dump(2)
           << '\n';
      } else {
        write_probe(os, s);
      }
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "zeroone: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "zeroone: " << e.what() << '\n';
    return kFailure;
  }
  return 0;
}
