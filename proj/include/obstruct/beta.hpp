#ifndef OBSTRUCT_BETA_HPP
#define OBSTRUCT_BETA_HPP

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "obstruct/language.hpp"
#include "obstruct/numeric.hpp"
#include "obstruct/word.hpp"

namespace obstruct {

enum class TailKind { finite, eventually_periodic, truncated };

std::string to_string(TailKind kind);

// Expansion w = w_1 w_2 ... of 1 in base beta, stored 0-indexed.
//   finite:              w_1..w_N followed by zeros (greedy form only)
//   eventually_periodic: digits[0, preperiod) then digits[preperiod, N) repeated
//   truncated:           only w_1..w_N known
struct BetaExpansion {
  std::vector<Symbol> digits;
  TailKind kind = TailKind::truncated;
  std::size_t preperiod = 0;
  std::size_t period = 0;
  std::optional<QuadraticNumber> beta;

  // w_{i+1}. Throws HorizonExceeded past the end of a truncated expansion.
  Symbol digit(std::size_t i) const;
  bool is_infinite() const { return kind != TailKind::finite; }
  std::size_t known_length() const { return digits.size(); }
  // "(10)^∞", "2(10)^∞", "11", or "1011...".
  std::string notation() const;
  // No shift of w is lexicographically greater than w, checked exactly for
  // eventually periodic tails and to the stored horizon otherwise.
  bool self_admissible() const;
};

// First digits of the greedy beta-expansion of 1 in exact arithmetic,
// stopping at termination, at a detected period, or after max_digits.
// Integer beta follows the convention alphabet {0..beta-1}, w = (beta-1)^∞.
BetaExpansion greedy_expansion(const QuadraticNumber& beta, std::size_t max_digits);

// Finite d_1..d_k (d_k >= 1) becomes (d_1..d_{k-1}(d_k - 1))^∞; infinite
// expansions are returned unchanged.
BetaExpansion quasi_greedy(const BetaExpansion& e);

// Expansion file: optional header line "period=<p>" (last p digits repeat)
// or "finite", then the digits of w. No header means truncated.
BetaExpansion read_expansion(std::istream& in);
void write_expansion(std::ostream& out, const BetaExpansion& e);

// The one-sided beta-shift: z is in X iff every shift of z is
// lexicographically <= w (quasi-greedy). Presented by the follower automaton
// whose state k means "the word read so far ends in w_1..w_k and in no
// longer prefix of w", folded onto the period for eventually periodic w and
// ending in a dead truncation state otherwise.
class BetaSystem : public Language {
 public:
  static constexpr std::size_t kDefaultDigits = 60;
  static constexpr std::size_t kDefaultPrecisionBits = 128;
  static constexpr std::size_t kCountCap = 1000000;

  explicit BetaSystem(BetaExpansion w, unsigned precision_bits = kDefaultPrecisionBits);

  const BetaExpansion& expansion() const { return w_; }
  Symbol max_digit() const { return w_.digits.front(); }
  std::size_t alphabet_size() const override { return max_digit() + 1U; }
  const Presentation& presentation() const override { return automaton_; }
  std::string describe() const override;
  std::size_t horizon() const override;
  bool is_truncated() const { return w_.kind == TailKind::truncated; }
  unsigned precision_bits() const { return precision_bits_; }

  // Exact beta when it was supplied as a number; otherwise nullopt.
  const std::optional<QuadraticNumber>& exact_beta() const { return w_.beta; }
  // beta at the system precision; derived from w when no exact value exists.
  const HighFloat& beta_value() const { return beta_value_; }
  double beta() const { return beta_value_.convert_to<double>(); }
  double log_beta() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  // Unfolded step: from match length k on symbol a; npos if forbidden.
  std::size_t advance(std::size_t match, Symbol a) const;
  // Longest suffix of v equal to a prefix of w; nullopt if v is not in L.
  std::optional<std::size_t> match_length(WordView v) const;
  Presentation::State fold(std::size_t match) const;

  bool is_in_language(WordView v) const { return contains(v); }
  std::vector<Word> enumerate_language(std::size_t n, std::size_t cap = 24) const;
  BigInt count_language(std::size_t n) const;
  // dist[k] = number of words in L_n with match length k, k = 0..n.
  std::vector<BigInt> match_length_distribution(std::size_t n) const;

  Word w_prefix(std::size_t n) const;
  // Reading 0 is allowed from every live state, so v0^∞ is in X for v in L.
  bool zero_tail_admissible() const;

  // "state,symbol,state" lines with a header.
  std::string automaton_csv() const;

 private:
  BetaExpansion w_;
  unsigned precision_bits_;
  Presentation automaton_;
  HighFloat beta_value_;
};

std::shared_ptr<const BetaSystem> make_beta_shift(
    const QuadraticNumber& beta, std::size_t max_digits = BetaSystem::kDefaultDigits,
    unsigned precision_bits = BetaSystem::kDefaultPrecisionBits);

}  // namespace obstruct

#endif  // OBSTRUCT_BETA_HPP
