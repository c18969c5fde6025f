#ifndef OBSTRUCT_FACTORS_HPP
#define OBSTRUCT_FACTORS_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "obstruct/beta.hpp"
#include "obstruct/decomposition.hpp"
#include "obstruct/language.hpp"
#include "obstruct/symbolic.hpp"
#include "obstruct/word.hpp"

namespace obstruct {

// Sliding block code with window k: output symbol i is rule(v_i..v_{i+k-1}).
class BlockCode {
 public:
  BlockCode(std::string name, std::size_t window, std::size_t input_alphabet,
            std::size_t output_alphabet, std::map<Word, Symbol> rule);

  static BlockCode identity(std::size_t alphabet);
  // Window 2 over {0,1}: v_i + v_{i+1} mod 2.
  static BlockCode xor2();
  static BlockCode merge_to_one(std::size_t alphabet);
  // One-block code a -> map[a].
  static BlockCode one_block(std::string name, std::size_t input_alphabet,
                             const std::vector<Symbol>& map);

  // Lines "block -> symbol"; '#' starts a comment.
  static BlockCode parse(std::istream& in, std::size_t input_alphabet, std::string name = "file");
  std::string to_text() const;

  const std::string& name() const { return name_; }
  std::size_t window() const { return window_; }
  std::size_t input_alphabet_size() const { return input_alphabet_; }
  std::size_t output_alphabet_size() const { return output_alphabet_; }
  const std::map<Word, Symbol>& rule() const { return rule_; }

  // Throws InputError for a block without a rule.
  Symbol operator()(WordView block) const;
  // Throws InputError unless every admissible k-block of `lang` has a rule.
  void require_total(const Language& lang) const;

 private:
  std::string name_;
  std::size_t window_;
  std::size_t input_alphabet_;
  std::size_t output_alphabet_;
  std::map<Word, Symbol> rule_;
};

// Output of length |v| - k + 1; throws InputError if |v| < k.
Word apply_code(const BlockCode& code, WordView v);

// Sorted distinct images of L_{n+k-1}.
std::vector<Word> factor_language(const Language& source, const BlockCode& code, std::size_t n,
                                  std::size_t cap = 24);

// The image subshift Y, presented by the subset construction over
// (source state, last k-1 source symbols).
class FactorSystem : public Language {
 public:
  static constexpr std::size_t kStateCap = 200000;

  FactorSystem(std::shared_ptr<const Language> source, BlockCode code,
               std::size_t state_cap = kStateCap);

  std::size_t alphabet_size() const override { return code_.output_alphabet_size(); }
  const Presentation& presentation() const override { return pres_; }
  std::string describe() const override;
  std::size_t horizon() const override;

  const Language& source() const { return *source_; }
  const std::shared_ptr<const Language>& source_ptr() const { return source_; }
  const BlockCode& code() const { return code_; }

 private:
  std::shared_ptr<const Language> source_;
  BlockCode code_;
  Presentation pres_;
};

// P = {empty}; G = images of words whose source split has s = 0; S = images
// of prefixes of w. The split takes the least suffix length over preimages.
class InducedDecomposition : public DecompositionScheme {
 public:
  InducedDecomposition(std::shared_ptr<const BetaSystem> source,
                       std::shared_ptr<const FactorSystem> factor);

  std::string name() const override { return "induced"; }
  std::shared_ptr<const Language> language() const override { return factor_; }
  const FactorSystem& factor() const { return *factor_; }
  const BetaSystem& source() const { return *source_; }

  // Source suffix lengths s(x~_1..x~_n) over preimages x~ of u.
  std::set<std::size_t> preimage_suffixes(WordView u) const;

  Split split(WordView v) const override;
  bool member_P(WordView v) const override { return v.empty(); }
  bool member_G(WordView v) const override;
  bool member_S(WordView v) const override;

  // |S_n|: distinct images of w_1..w_n t over admissible t of length k-1.
  BigInt count_suffix(std::size_t n) const;

 private:
  std::shared_ptr<const BetaSystem> source_;
  std::shared_ptr<const FactorSystem> factor_;
};

OrbitCollection induced_suffix_collection(std::shared_ptr<const InducedDecomposition> scheme);

// Upper entropy of the induced S at depth 0.
EntropyEstimate factor_suffix_entropy(std::shared_ptr<const InducedDecomposition> scheme,
                                      std::size_t n_max);

enum class FactorVerdict { positive_entropy, single_point, inconclusive };

std::string to_string(FactorVerdict v);

struct FactorEntropyResult {
  FactorVerdict verdict = FactorVerdict::inconclusive;
  std::size_t n = 0;  // length of the separated pair
  Word v1;
  Word v2;
  double rate_bound = 0;  // log 2 / n
  std::size_t certified_m = 0;  // 2^m distinct glued images were checked for m up to this
  std::string detail;
};

// Searches the shortest length n with two good-core source words whose images
// differ, and certifies Lambda(Y, nm, 2^-j) >= 2^m by gluing them.
FactorEntropyResult factor_entropy_positive(const BetaSystem& source, const BlockCode& code,
                                            ScaleIndex depth, std::size_t n_limit = 16,
                                            std::size_t m_check = 3,
                                            std::size_t word_budget = 200000);

// Pairs of source paths with equal images. States carry both automaton
// states, both k-1 histories and whether the paths have differed yet.
class PairAutomaton {
 public:
  static constexpr std::size_t kStateCap = 200000;

  PairAutomaton(const Language& source, const BlockCode& code, std::size_t state_cap = kStateCap);

  struct State {
    Presentation::State left;
    Presentation::State right;
    Word left_history;
    Word right_history;
    bool diverged;
  };
  struct Edge {
    std::size_t from;
    Symbol a;
    Symbol b;
    std::size_t to;
  };

  std::size_t num_states() const { return states_.size(); }
  const std::vector<State>& states() const { return states_; }
  const std::vector<Edge>& edges() const { return edges_; }
  // States with an infinite forward path.
  const std::vector<char>& live() const { return live_; }

  // Pairs (x, x') of length-n source words with apply_code(x) = apply_code(x').
  BigInt count_pairs(std::size_t n) const;
  std::string to_csv() const;

 private:
  std::vector<State> states_;
  std::vector<Edge> edges_;
  std::vector<char> live_;
};

struct ExpansivityReport {
  ScaleIndex depth;
  bool positively_expansive = false;
  bool inconclusive = false;
  bool horizon_only = false;  // truncated source: verdict certified only below the horizon
  double growth = 0;       // growth of source words carrying a non-expansive pair; -inf if none
  double pair_growth = 0;  // growth of the non-diagonal pair paths themselves
  std::size_t pair_states = 0;
  std::size_t nondiagonal_live_states = 0;
  std::string detail;
};

ExpansivityReport nonexpansive_growth(const Language& source, const BlockCode& code,
                                      ScaleIndex depth);

struct TheoremCReport {
  ExpansivityReport expansivity;
  FactorEntropyResult factor_entropy;
  EntropyEstimate suffix;
  double factor_entropy_rate = 0;  // h(Y)
  bool hypotheses_met = false;
  std::size_t n_first = 0;
  std::size_t n_second = 0;
  double mme_difference = 0;  // max over depth-3 cylinders
  bool uniqueness_confirmed = false;
  std::string verdict;
};

// Theorem C at symbolic scale: expansivity, zero suffix entropy below h(Y),
// then two empirical MMEs on Y compared on depth-3 cylinders.
TheoremCReport theorem_c_check(std::shared_ptr<const BetaSystem> source, const BlockCode& code,
                               std::size_t n_max = 24, std::size_t n_first = 500,
                               std::size_t n_second = 1000, double tolerance = 0.05);

}  // namespace obstruct

#endif  // OBSTRUCT_FACTORS_HPP
