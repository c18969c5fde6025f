#ifndef OBSTRUCT_LANGUAGE_HPP
#define OBSTRUCT_LANGUAGE_HPP

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "obstruct/numeric.hpp"
#include "obstruct/word.hpp"

namespace obstruct {

// Deterministic labeled graph in which every state accepts. A word is in
// the presented language iff it labels a path from the start state.
class Presentation {
 public:
  using State = std::size_t;
  static constexpr State npos = std::numeric_limits<State>::max();

  struct Edge {
    State from;
    Symbol symbol;
    State to;
  };

  Presentation() = default;
  Presentation(std::size_t num_states, std::size_t alphabet_size, State start = 0);

  std::size_t num_states() const { return num_states_; }
  std::size_t alphabet_size() const { return alphabet_size_; }
  State start() const { return start_; }

  void set_edge(State from, Symbol symbol, State to);
  State next(State from, Symbol symbol) const {
    return delta_[from * alphabet_size_ + symbol];
  }
  State run(WordView w, State from) const;
  State run(WordView w) const { return run(w, start_); }
  bool accepts(WordView w) const { return run(w) != npos; }

  std::vector<Edge> edges() const;
  std::size_t out_degree(State s) const;
  bool has_successor(State s) const { return out_degree(s) > 0; }
  // Smallest symbol with an outgoing edge; throws on a dead state.
  Symbol least_symbol(State s) const;

  // edge_count[s][t] = number of symbols labeling an edge s -> t.
  std::vector<std::vector<BigInt>> adjacency() const;

  // table[m][s] = number of words of length m readable from s, m <= max_m.
  std::vector<std::vector<BigInt>> extension_table(std::size_t max_m) const;
  // table[k][s] = number of words of length k leading from start to s.
  std::vector<std::vector<BigInt>> reach_table(std::size_t max_k) const;

  // Number of words of length n readable from the start state. Exact; uses
  // repeated squaring of the adjacency matrix for long words.
  BigInt count_words(std::size_t n) const;
  BigInt count_words_from(State from, std::size_t n) const;

  // All words of length n readable from the start, in lexicographic order.
  std::vector<Word> enumerate(std::size_t n) const;

  std::vector<State> reachable_from_start() const;
  // Strongly connected components in reverse topological order.
  std::vector<std::vector<State>> strongly_connected_components() const;
  bool is_irreducible() const;
  // Irreducible with period one.
  bool is_primitive() const;

 private:
  std::size_t num_states_ = 0;
  std::size_t alphabet_size_ = 0;
  State start_ = 0;
  std::vector<State> delta_;
};

struct SpectralEstimate {
  HighFloat lower;  // Collatz-Wielandt bounds on the spectral radius
  HighFloat upper;
  std::vector<HighFloat> eigenvector;  // right eigenvector of the dominant component
  std::size_t iterations = 0;

  double radius() const;
  // log of the radius; -infinity for an acyclic graph.
  double log_radius() const;
};

// Spectral radius of a nonnegative integer matrix by power iteration on each
// irreducible component, at the current default MPFR precision. Iterates
// until the Collatz-Wielandt bracket is narrower than `tolerance` relative.
SpectralEstimate spectral_radius(const std::vector<std::vector<BigInt>>& matrix,
                                 const HighFloat& tolerance, std::size_t max_iterations = 200000);

// A factorial, extendable language given by a deterministic presentation,
// with an optional certified horizon for truncated presentations.
class Language {
 public:
  static constexpr std::size_t unlimited = std::numeric_limits<std::size_t>::max();

  virtual ~Language() = default;

  virtual std::size_t alphabet_size() const = 0;
  virtual const Presentation& presentation() const = 0;
  virtual std::string describe() const = 0;
  // Longest word length for which membership and counts are certified.
  virtual std::size_t horizon() const { return unlimited; }

  bool contains(WordView w) const;
  BigInt count(std::size_t n) const;
  std::vector<Word> enumerate(std::size_t n, std::size_t cap = 24) const;

  void require_within_horizon(std::size_t length, const std::string& what) const;
};

}  // namespace obstruct

#endif  // OBSTRUCT_LANGUAGE_HPP
