#ifndef OBSTRUCT_DECOMPOSITION_HPP
#define OBSTRUCT_DECOMPOSITION_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "obstruct/beta.hpp"
#include "obstruct/language.hpp"
#include "obstruct/symbolic.hpp"
#include "obstruct/word.hpp"

namespace obstruct {

struct Split {
  std::size_t p = 0;
  std::size_t g = 0;
  std::size_t s = 0;

  friend bool operator==(const Split&, const Split&) = default;
};

// Splits every admissible word into prefix, good core and suffix pieces
// (p + g + s = |v|) belonging to the classes P, G and S. G^M is the set of
// words whose prefix and suffix pieces both have length <= M.
class DecompositionScheme {
 public:
  virtual ~DecompositionScheme() = default;

  virtual std::string name() const = 0;
  virtual std::shared_ptr<const Language> language() const = 0;

  // Throws InputError when v is not admissible.
  virtual Split split(WordView v) const = 0;
  virtual bool member_P(WordView v) const = 0;
  virtual bool member_G(WordView v) const = 0;
  virtual bool member_S(WordView v) const = 0;

  bool member_GM(WordView v, std::size_t level) const;

  // Exact separated-set counts for the classes at (n, j); the defaults
  // enumerate the ambient language.
  virtual BigInt count_good(std::size_t n, ScaleIndex depth) const;
  virtual BigInt count_filtration(std::size_t level, std::size_t n, ScaleIndex depth) const;
  virtual BigInt count_obstruction(std::size_t n, ScaleIndex depth) const;
};

// Collections of points and times induced by a scheme. They share ownership
// of the scheme.
OrbitCollection good_collection(std::shared_ptr<const DecompositionScheme> scheme);
OrbitCollection filtration_collection(std::shared_ptr<const DecompositionScheme> scheme,
                                      std::size_t level);
// P ∪ S.
OrbitCollection obstruction_collection(std::shared_ptr<const DecompositionScheme> scheme);
OrbitCollection suffix_collection(std::shared_ptr<const DecompositionScheme> scheme);

// P = {empty}, S = prefixes of w, G = words of L ending in no prefix of w.
// The suffix piece is the longest suffix of v equal to a prefix of w, i.e.
// the unfolded follower-automaton state after reading v.
class BetaDecomposition : public DecompositionScheme {
 public:
  explicit BetaDecomposition(std::shared_ptr<const BetaSystem> sys);

  std::string name() const override { return "beta"; }
  std::shared_ptr<const Language> language() const override { return sys_; }
  const BetaSystem& system() const { return *sys_; }

  Split split(WordView v) const override;
  bool member_P(WordView v) const override { return v.empty(); }
  bool member_G(WordView v) const override;
  bool member_S(WordView v) const override;

  BigInt count_good(std::size_t n, ScaleIndex depth) const override;
  BigInt count_filtration(std::size_t level, std::size_t n, ScaleIndex depth) const override;
  BigInt count_obstruction(std::size_t n, ScaleIndex depth) const override;

 private:
  std::shared_ptr<const BetaSystem> sys_;
};

// G = {empty}, S = L: every word is all suffix. The obstruction bound of
// this scheme is the full entropy.
class DegenerateDecomposition : public DecompositionScheme {
 public:
  explicit DegenerateDecomposition(std::shared_ptr<const Language> lang);

  std::string name() const override { return "degenerate"; }
  std::shared_ptr<const Language> language() const override { return lang_; }

  Split split(WordView v) const override;
  bool member_P(WordView v) const override { return v.empty(); }
  bool member_G(WordView v) const override { return v.empty(); }
  bool member_S(WordView v) const override { return lang_->contains(v); }

  BigInt count_good(std::size_t n, ScaleIndex depth) const override;
  BigInt count_filtration(std::size_t level, std::size_t n, ScaleIndex depth) const override;
  BigInt count_obstruction(std::size_t n, ScaleIndex depth) const override;

 private:
  std::shared_ptr<const Language> lang_;
};

std::shared_ptr<const DecompositionScheme> beta_decomposition(
    std::shared_ptr<const BetaSystem> sys);

// Smallest k <= k_limit with v 0^k in G (words of L ending in no prefix of
// w); nullopt when none is found within the limit.
std::optional<std::size_t> minimal_zero_padding(const BetaSystem& sys, WordView v,
                                                std::size_t k_limit);

// |G^M_n| / |L_n|.
Rational filtration_coverage(const DecompositionScheme& scheme, std::size_t level, std::size_t n);

struct SamplingPolicy {
  std::size_t min_length = 1;
  std::size_t max_length = 6;
  std::size_t k_max = 2;
  std::size_t tuple_budget = 100000;
  std::uint64_t seed = 0x5eed5eedULL;
  std::size_t recorded_witnesses = 32;
};

struct GluingWitness {
  std::vector<Word> tuple;  // the Bowen cylinders being glued
  std::vector<Word> gaps;   // connecting words; empty on failure
  Word glued;               // the admissible word realizing the gluing
};

struct SpecificationReport {
  ScaleIndex depth;
  std::size_t tau = 0;
  std::string sample;
  bool pass = false;
  bool exhaustive = false;
  std::size_t tuples_tested = 0;
  std::size_t collection_words = 0;
  std::vector<GluingWitness> witnesses;  // first few successful gluings
  std::optional<GluingWitness> failure;  // first tuple without a gluing
};

// Searches, for every tuple of cylinders of the collection (k <= k_max,
// lengths in [min_length, max_length]), the connecting words of length tau
// in lexicographic order (zeros first) for an admissible gluing. Exhaustive
// when the tuple count fits the budget, otherwise uniformly sampled.
SpecificationReport check_specification(const OrbitCollection& collection, ScaleIndex depth,
                                        std::size_t tau, const SamplingPolicy& policy);

// The glued word for one tuple at gap tau, or nullopt. Exposed for tests.
std::optional<Word> glue(const Language& lang, const std::vector<Word>& cylinders,
                         const std::vector<std::size_t>& times, std::size_t tau);

struct GluingTime {
  std::optional<std::size_t> tau;  // smallest passing tau, if any
  bool inconclusive = false;       // a non-exhaustive run passed before any exhaustive one
  std::vector<SpecificationReport> attempts;
  std::optional<GluingWitness> best_failure;
};

GluingTime min_gluing_time(const OrbitCollection& collection, ScaleIndex depth,
                           std::size_t tau_max, const SamplingPolicy& policy);

struct ObstructionBound {
  EntropyEstimate estimate;  // upper entropy of P ∪ S at depth j
  std::vector<std::pair<std::size_t, std::optional<std::size_t>>> gluing;  // (M, tau_M)
  bool gluing_certified = false;  // every tested G^M has a certified gluing time
  double full_entropy = 0;        // growth rate of the whole language at the same depth
  // gluing certified and the bound strictly below the full entropy
  bool hypotheses_met() const;
};

// Upper bound for the entropy of obstructions to specification at depth j:
// the upper entropy of P ∪ S, together with gluing certificates for G^M at
// the listed levels.
ObstructionBound obstruction_entropy_upper(std::shared_ptr<const DecompositionScheme> scheme,
                                           ScaleIndex depth, std::size_t n_max,
                                           const std::vector<std::size_t>& levels,
                                           std::size_t tau_max, const SamplingPolicy& policy);

}  // namespace obstruct

#endif  // OBSTRUCT_DECOMPOSITION_HPP
