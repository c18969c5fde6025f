#include "obstruct/language.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "obstruct/errors.hpp"

namespace obstruct {

namespace mp = boost::multiprecision;

Presentation::Presentation(std::size_t num_states, std::size_t alphabet_size, State start)
    : num_states_(num_states),
      alphabet_size_(alphabet_size),
      start_(start),
      delta_(num_states * alphabet_size, npos) {
  if (num_states > 0 && start >= num_states) {
    throw std::invalid_argument("Presentation: start state out of range");
  }
}

void Presentation::set_edge(State from, Symbol symbol, State to) {
  if (from >= num_states_ || to >= num_states_ || symbol >= alphabet_size_) {
    throw std::out_of_range("Presentation::set_edge: index out of range");
  }
  delta_[from * alphabet_size_ + symbol] = to;
}

Presentation::State Presentation::run(WordView w, State from) const {
  State s = from;
  for (Symbol a : w) {
    if (a >= alphabet_size_) return npos;
    s = next(s, a);
    if (s == npos) return npos;
  }
  return s;
}

std::vector<Presentation::Edge> Presentation::edges() const {
  std::vector<Edge> out;
  for (State s = 0; s < num_states_; ++s) {
    for (Symbol a = 0; a < alphabet_size_; ++a) {
      State t = next(s, a);
      if (t != npos) out.push_back({s, a, t});
    }
  }
  return out;
}

std::size_t Presentation::out_degree(State s) const {
  std::size_t d = 0;
  for (Symbol a = 0; a < alphabet_size_; ++a) {
    if (next(s, a) != npos) ++d;
  }
  return d;
}

Symbol Presentation::least_symbol(State s) const {
  for (Symbol a = 0; a < alphabet_size_; ++a) {
    if (next(s, a) != npos) return a;
  }
  throw std::logic_error("state " + std::to_string(s) + " has no outgoing edge");
}

std::vector<std::vector<BigInt>> Presentation::adjacency() const {
  std::vector<std::vector<BigInt>> m(num_states_, std::vector<BigInt>(num_states_, 0));
  for (const Edge& e : edges()) m[e.from][e.to] += 1;
  return m;
}

std::vector<std::vector<BigInt>> Presentation::extension_table(std::size_t max_m) const {
  std::vector<std::vector<BigInt>> table;
  table.reserve(max_m + 1);
  table.emplace_back(num_states_, BigInt(1));
  std::vector<Edge> es = edges();
  for (std::size_t m = 1; m <= max_m; ++m) {
    std::vector<BigInt> row(num_states_, BigInt(0));
    const auto& prev = table.back();
    for (const Edge& e : es) row[e.from] += prev[e.to];
    table.push_back(std::move(row));
  }
  return table;
}

std::vector<std::vector<BigInt>> Presentation::reach_table(std::size_t max_k) const {
  std::vector<std::vector<BigInt>> table;
  table.reserve(max_k + 1);
  std::vector<BigInt> first(num_states_, BigInt(0));
  if (num_states_ > 0) first[start_] = 1;
  table.push_back(std::move(first));
  std::vector<Edge> es = edges();
  for (std::size_t k = 1; k <= max_k; ++k) {
    std::vector<BigInt> row(num_states_, BigInt(0));
    const auto& prev = table.back();
    for (const Edge& e : es) row[e.to] += prev[e.from];
    table.push_back(std::move(row));
  }
  return table;
}

namespace {

using Matrix = std::vector<std::vector<BigInt>>;

Matrix multiply(const Matrix& a, const Matrix& b) {
  std::size_t n = a.size();
  Matrix c(n, std::vector<BigInt>(n, BigInt(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (b[k][j] != 0) c[i][j] += a[i][k] * b[k][j];
      }
    }
  }
  return c;
}

}  // namespace

BigInt Presentation::count_words_from(State from, std::size_t n) const {
  if (num_states_ == 0) return n == 0 ? 1 : 0;
  constexpr std::size_t kIterativeLimit = 4096;
  if (n <= kIterativeLimit) {
    std::vector<BigInt> current(num_states_, BigInt(0));
    current[from] = 1;
    std::vector<Edge> es = edges();
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<BigInt> nxt(num_states_, BigInt(0));
      for (const Edge& e : es) {
        if (current[e.from] != 0) nxt[e.to] += current[e.from];
      }
      current.swap(nxt);
    }
    return std::accumulate(current.begin(), current.end(), BigInt(0));
  }
  Matrix base = adjacency();
  Matrix result(num_states_, std::vector<BigInt>(num_states_, BigInt(0)));
  for (std::size_t i = 0; i < num_states_; ++i) result[i][i] = 1;
  std::size_t e = n;
  while (e > 0) {
    if (e & 1U) result = multiply(result, base);
    e >>= 1U;
    if (e > 0) base = multiply(base, base);
  }
  return std::accumulate(result[from].begin(), result[from].end(), BigInt(0));
}

BigInt Presentation::count_words(std::size_t n) const { return count_words_from(start_, n); }

std::vector<Word> Presentation::enumerate(std::size_t n) const {
  std::vector<Word> out;
  if (num_states_ == 0) return out;
  Word current;
  current.reserve(n);
  std::function<void(State)> walk = [&](State s) {
    if (current.size() == n) {
      out.push_back(current);
      return;
    }
    for (Symbol a = 0; a < alphabet_size_; ++a) {
      State t = next(s, a);
      if (t == npos) continue;
      current.push_back(a);
      walk(t);
      current.pop_back();
    }
  };
  walk(start_);
  return out;
}

std::vector<Presentation::State> Presentation::reachable_from_start() const {
  std::vector<bool> seen(num_states_, false);
  std::vector<State> order;
  if (num_states_ == 0) return order;
  std::vector<State> stack{start_};
  seen[start_] = true;
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    order.push_back(s);
    for (Symbol a = 0; a < alphabet_size_; ++a) {
      State t = next(s, a);
      if (t != npos && !seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  std::sort(order.begin(), order.end());
  return order;
}

namespace {

// Iterative Tarjan over an adjacency-list graph.
std::vector<std::vector<std::size_t>> tarjan(const std::vector<std::vector<std::size_t>>& succ) {
  const std::size_t n = succ.size();
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  struct Frame {
    std::size_t v;
    std::size_t next_child;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next_child < succ[f.v].size()) {
        std::size_t w = succ[f.v][f.next_child++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      std::size_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w = 0;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
    }
  }
  return components;
}

std::vector<std::vector<std::size_t>> successor_lists(const Matrix& m) {
  std::vector<std::vector<std::size_t>> succ(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (m[i][j] != 0) succ[i].push_back(j);
    }
  }
  return succ;
}

std::size_t gcd_of_cycle_lengths(const std::vector<std::vector<std::size_t>>& succ) {
  // BFS levels from state 0; the period is gcd of level[u] + 1 - level[v]
  // over edges u -> v.
  const std::size_t n = succ.size();
  constexpr long long kUnset = -1;
  std::vector<long long> level(n, kUnset);
  level[0] = 0;
  std::vector<std::size_t> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t u = queue[head];
    for (std::size_t v : succ[u]) {
      if (level[v] == kUnset) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
    }
  }
  long long g = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v : succ[u]) {
      long long diff = level[u] + 1 - level[v];
      g = std::gcd(g, diff < 0 ? -diff : diff);
    }
  }
  return static_cast<std::size_t>(g);
}

}  // namespace

std::vector<std::vector<Presentation::State>> Presentation::strongly_connected_components() const {
  return tarjan(successor_lists(adjacency()));
}

bool Presentation::is_irreducible() const {
  return num_states_ > 0 && strongly_connected_components().size() == 1;
}

bool Presentation::is_primitive() const {
  if (!is_irreducible()) return false;
  return gcd_of_cycle_lengths(successor_lists(adjacency())) == 1;
}

double SpectralEstimate::radius() const {
  return ((lower + upper) / 2).convert_to<double>();
}

double SpectralEstimate::log_radius() const {
  HighFloat mid = (lower + upper) / 2;
  if (mid <= 0) return -std::numeric_limits<double>::infinity();
  return mp::log(mid).convert_to<double>();
}

SpectralEstimate spectral_radius(const Matrix& matrix, const HighFloat& tolerance,
                                 std::size_t max_iterations) {
  const std::size_t n = matrix.size();
  SpectralEstimate best;
  best.lower = 0;
  best.upper = 0;
  best.eigenvector.assign(n, HighFloat(0));
  auto components = tarjan(successor_lists(matrix));
  for (const auto& comp : components) {
    const std::size_t m = comp.size();
    bool has_cycle = m > 1 || matrix[comp[0]][comp[0]] != 0;
    if (!has_cycle) continue;
    // B + I is primitive on an irreducible component, so power iteration on
    // it converges; Collatz-Wielandt ratios bracket the radius of B + I.
    std::vector<std::vector<HighFloat>> b(m, std::vector<HighFloat>(m, HighFloat(0)));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) b[i][j] = HighFloat(matrix[comp[i]][comp[j]]);
      b[i][i] += 1;
    }
    std::vector<HighFloat> x(m, HighFloat(1));
    HighFloat lower = 0;
    HighFloat upper = 0;
    std::size_t it = 0;
    for (; it < max_iterations; ++it) {
      std::vector<HighFloat> y(m, HighFloat(0));
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          if (b[i][j] != 0) y[i] += b[i][j] * x[j];
        }
      }
      lower = y[0] / x[0];
      upper = lower;
      HighFloat norm = 0;
      for (std::size_t i = 0; i < m; ++i) {
        HighFloat ratio = y[i] / x[i];
        if (ratio < lower) lower = ratio;
        if (ratio > upper) upper = ratio;
        if (y[i] > norm) norm = y[i];
      }
      for (std::size_t i = 0; i < m; ++i) x[i] = y[i] / norm;
      if (upper - lower <= tolerance * upper) break;
    }
    lower -= 1;
    upper -= 1;
    if (upper > best.upper) {
      best.lower = lower;
      best.upper = upper;
      best.iterations = it;
      std::fill(best.eigenvector.begin(), best.eigenvector.end(), HighFloat(0));
      for (std::size_t i = 0; i < m; ++i) best.eigenvector[comp[i]] = x[i];
    }
  }
  return best;
}

bool Language::contains(WordView w) const {
  require_within_horizon(w.size(), "membership query");
  for (Symbol s : w) {
    if (s >= alphabet_size()) return false;
  }
  return presentation().accepts(w);
}

BigInt Language::count(std::size_t n) const {
  require_within_horizon(n, "word count");
  return presentation().count_words(n);
}

std::vector<Word> Language::enumerate(std::size_t n, std::size_t cap) const {
  if (n > cap) {
    throw BudgetExceeded("enumeration of length-" + std::to_string(n) +
                         " words exceeds the cap of " + std::to_string(cap) +
                         "; use the counting route instead");
  }
  require_within_horizon(n, "enumeration");
  return presentation().enumerate(n);
}

void Language::require_within_horizon(std::size_t length, const std::string& what) const {
  if (length > horizon()) {
    throw HorizonExceeded(what + " at length " + std::to_string(length) +
                              " is undecided at truncation",
                          horizon());
  }
}

}  // namespace obstruct
