#ifndef OBSTRUCT_SYMBOLIC_HPP
#define OBSTRUCT_SYMBOLIC_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "obstruct/language.hpp"
#include "obstruct/numeric.hpp"
#include "obstruct/word.hpp"

namespace obstruct {

// A collection D of points and times. (x, n) is in D iff the n-prefix of x
// satisfies `member`; the ambient language supplies the points. A collection
// may carry an exact counting shortcut for the separated-set count at
// (n, j), used instead of enumeration when present.
class OrbitCollection {
 public:
  using Membership = std::function<bool(WordView)>;
  using Counter = std::function<BigInt(std::size_t n, ScaleIndex depth)>;

  OrbitCollection(std::string label, std::shared_ptr<const Language> ambient, Membership member,
                  Counter counter = {});

  const std::string& label() const { return label_; }
  const Language& ambient() const { return *ambient_; }
  const std::shared_ptr<const Language>& ambient_ptr() const { return ambient_; }
  bool contains(WordView n_prefix) const { return member_(n_prefix); }
  bool has_counter() const { return static_cast<bool>(counter_); }
  const Counter& counter() const { return counter_; }

  // Words u in L_{n+j} whose n-prefix is in D_n: the Bowen cylinders of D_n
  // at depth j. Enumerates the ambient language, subject to `cap`.
  std::vector<Word> cylinders(std::size_t n, ScaleIndex depth, std::size_t cap = 24) const;

 private:
  std::string label_;
  std::shared_ptr<const Language> ambient_;
  Membership member_;
  Counter counter_;
};

// The whole language X x N, counted through the presentation.
OrbitCollection whole_space(std::shared_ptr<const Language> ambient);

struct SeparatedCount {
  BigInt count;
  bool empty = false;  // D_n had no points; reported as a warning, not an error
};

// Lambda(D_n, n, 2^-j): the number of distinct (n+j)-prefixes of points in D_n.
SeparatedCount count_separated(const OrbitCollection& d, std::size_t n, ScaleIndex depth);

enum class EntropyMethod { limsup_tail, regression };

std::string to_string(EntropyMethod m);

struct EntropySample {
  std::size_t n;
  double log_count;
};

struct EntropyEstimate {
  double rate = 0;          // value selected by `method`, clamped to >= 0
  double tail_value = 0;    // sup (upper) or inf (lower) of log(count)/n on the tail window
  double regression = 0;    // least-squares slope of log(count) against n on the tail window
  std::vector<EntropySample> samples;     // nonempty lengths only, increasing in n
  std::vector<std::size_t> empty_lengths;  // lengths with D_n empty
  EntropyMethod method = EntropyMethod::regression;
  ScaleIndex depth;
  std::size_t tail_start = 0;
};

// Upper growth rate of D at depth j from n = 1..n_max (n_max >= 8). The tail
// window is [ceil(n_max / 2), n_max].
EntropyEstimate upper_entropy(const OrbitCollection& d, ScaleIndex depth, std::size_t n_max,
                              EntropyMethod method = EntropyMethod::regression);
// Liminf analogue: empty lengths in the tail drive the rate to 0.
EntropyEstimate lower_entropy(const OrbitCollection& d, ScaleIndex depth, std::size_t n_max,
                              EntropyMethod method = EntropyMethod::regression);

// sup of log(count)/n over samples with n >= start; nonincreasing in start.
double tail_supremum(const EntropyEstimate& e, std::size_t start);

}  // namespace obstruct

#endif  // OBSTRUCT_SYMBOLIC_HPP
