#include "obstruct/factors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <sstream>
#include <tuple>

#include "obstruct/errors.hpp"
#include "obstruct/mme.hpp"

namespace obstruct {

BlockCode::BlockCode(std::string name, std::size_t window, std::size_t input_alphabet,
                     std::size_t output_alphabet, std::map<Word, Symbol> rule)
    : name_(std::move(name)),
      window_(window),
      input_alphabet_(input_alphabet),
      output_alphabet_(output_alphabet),
      rule_(std::move(rule)) {
  if (window_ == 0) throw InputError("block code window must be >= 1");
  if (output_alphabet_ == 0) throw InputError("block code needs a nonempty output alphabet");
  for (const auto& [block, out] : rule_) {
    if (block.size() != window_) throw InputError("block code rule with the wrong window");
    for (Symbol s : block) {
      if (s >= input_alphabet_) throw InputError("block code input symbol out of range");
    }
    if (out >= output_alphabet_) throw InputError("block code output symbol out of range");
  }
}

BlockCode BlockCode::identity(std::size_t alphabet) {
  std::vector<Symbol> map(alphabet);
  for (std::size_t a = 0; a < alphabet; ++a) map[a] = static_cast<Symbol>(a);
  return one_block("identity", alphabet, map);
}

BlockCode BlockCode::xor2() {
  std::map<Word, Symbol> rule;
  for (Symbol a = 0; a < 2; ++a) {
    for (Symbol b = 0; b < 2; ++b) rule[{a, b}] = a ^ b;
  }
  return BlockCode("xor", 2, 2, 2, std::move(rule));
}

BlockCode BlockCode::merge_to_one(std::size_t alphabet) {
  return one_block("merge-to-one", alphabet, std::vector<Symbol>(alphabet, 0));
}

BlockCode BlockCode::one_block(std::string name, std::size_t input_alphabet,
                               const std::vector<Symbol>& map) {
  if (map.size() != input_alphabet) throw InputError("one-block map has the wrong size");
  std::map<Word, Symbol> rule;
  Symbol top = 0;
  for (std::size_t a = 0; a < input_alphabet; ++a) {
    rule[{static_cast<Symbol>(a)}] = map[a];
    top = std::max(top, map[a]);
  }
  return BlockCode(std::move(name), 1, input_alphabet, top + 1U, std::move(rule));
}

BlockCode BlockCode::parse(std::istream& in, std::size_t input_alphabet, std::string name) {
  std::map<Word, Symbol> rule;
  std::size_t window = 0;
  Symbol top = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto arrow = line.find("->");
    if (arrow == std::string::npos) {
      throw InputError("block code line " + std::to_string(line_no) + ": expected 'block -> symbol'");
    }
    Word block;
    unsigned long out = 0;
    try {
      block = parse_word(line.substr(0, arrow), input_alphabet);
      std::string rhs = line.substr(arrow + 2);
      std::size_t used = 0;
      out = std::stoul(rhs, &used);
      if (rhs.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(rhs);
    } catch (const std::exception& e) {
      throw InputError("block code line " + std::to_string(line_no) + ": " + e.what());
    }
    if (window == 0) window = block.size();
    if (block.size() != window || block.empty()) {
      throw InputError("block code line " + std::to_string(line_no) + ": inconsistent window");
    }
    if (!rule.emplace(block, static_cast<Symbol>(out)).second) {
      throw InputError("block code line " + std::to_string(line_no) + ": duplicate block");
    }
    top = std::max(top, static_cast<Symbol>(out));
  }
  if (rule.empty()) throw InputError("block code file has no rules");
  return BlockCode(std::move(name), window, input_alphabet, top + 1U, std::move(rule));
}

std::string BlockCode::to_text() const {
  std::ostringstream out;
  for (const auto& [block, symbol] : rule_) {
    out << format_word(block, input_alphabet_) << " -> " << symbol << '\n';
  }
  return out.str();
}

Symbol BlockCode::operator()(WordView block) const {
  auto it = rule_.find(Word(block.begin(), block.end()));
  if (it == rule_.end()) {
    throw InputError("block code '" + name_ + "' has no rule for block " +
                     format_word(block, input_alphabet_));
  }
  return it->second;
}

void BlockCode::require_total(const Language& lang) const {
  if (lang.alphabet_size() != input_alphabet_) {
    throw InputError("block code alphabet does not match the source alphabet");
  }
  for (const Word& block : lang.enumerate(window_)) (*this)(block);
}

Word apply_code(const BlockCode& code, WordView v) {
  const std::size_t k = code.window();
  if (v.size() < k) {
    throw InputError("apply_code: word of length " + std::to_string(v.size()) +
                     " is shorter than the window " + std::to_string(k));
  }
  Word out(v.size() - k + 1);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = code(v.subspan(i, k));
  return out;
}

std::vector<Word> factor_language(const Language& source, const BlockCode& code, std::size_t n,
                                  std::size_t cap) {
  std::set<Word> images;
  for (const Word& v : source.enumerate(n + code.window() - 1, cap)) {
    images.insert(apply_code(code, v));
  }
  return {images.begin(), images.end()};
}

// ---------------------------------------------------------------------------

namespace {

// (source state, history) packed as state * b^{k-1} + history digits.
struct HistoryCodec {
  std::size_t base;
  std::size_t length;
  std::uint64_t span;

  HistoryCodec(std::size_t b, std::size_t k) : base(b), length(k - 1), span(1) {
    for (std::size_t i = 0; i < length; ++i) {
      if (span > std::numeric_limits<std::uint64_t>::max() / base) {
        throw BudgetExceeded("block code window too large for the history encoding");
      }
      span *= base;
    }
  }
  std::uint64_t pack(std::size_t state, const Word& h) const {
    std::uint64_t v = 0;
    for (Symbol s : h) v = v * base + s;
    return state * span + v;
  }
  std::pair<std::size_t, Word> unpack(std::uint64_t key) const {
    Word h(length);
    std::uint64_t v = key % span;
    for (std::size_t i = length; i-- > 0;) {
      h[i] = static_cast<Symbol>(v % base);
      v /= base;
    }
    return {static_cast<std::size_t>(key / span), h};
  }
};

void collect_histories(const Presentation& pres, Presentation::State s, Word& h, std::size_t length,
                       std::vector<std::pair<Presentation::State, Word>>& out) {
  if (h.size() == length) {
    out.emplace_back(s, h);
    return;
  }
  for (Symbol a = 0; a < pres.alphabet_size(); ++a) {
    auto t = pres.next(s, a);
    if (t == Presentation::npos) continue;
    h.push_back(a);
    collect_histories(pres, t, h, length, out);
    h.pop_back();
  }
}

Presentation build_factor_presentation(const Language& source, const BlockCode& code,
                                       std::size_t cap) {
  code.require_total(source);
  const Presentation& src = source.presentation();
  const std::size_t k = code.window();
  HistoryCodec codec(src.alphabet_size(), k);

  using Subset = std::vector<std::uint64_t>;
  std::map<Subset, std::size_t> index;
  std::vector<Subset> subsets;
  std::vector<std::vector<std::size_t>> delta;

  std::vector<std::pair<Presentation::State, Word>> initial;
  Word h;
  collect_histories(src, src.start(), h, k - 1, initial);
  Subset start;
  for (const auto& [s, hist] : initial) start.push_back(codec.pack(s, hist));
  std::sort(start.begin(), start.end());
  start.erase(std::unique(start.begin(), start.end()), start.end());
  index[start] = 0;
  subsets.push_back(start);

  const std::size_t out_b = code.output_alphabet_size();
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    std::vector<Subset> next(out_b);
    for (std::uint64_t key : subsets[i]) {
      auto [s, hist] = codec.unpack(key);
      Word block = hist;
      block.push_back(0);
      for (Symbol a = 0; a < src.alphabet_size(); ++a) {
        auto t = src.next(s, a);
        if (t == Presentation::npos) continue;
        block.back() = a;
        Symbol c = code(block);
        Word tail(block.begin() + 1, block.end());
        next[c].push_back(codec.pack(t, tail));
      }
    }
    std::vector<std::size_t> row(out_b, Presentation::npos);
    for (std::size_t c = 0; c < out_b; ++c) {
      Subset& sub = next[c];
      if (sub.empty()) continue;
      std::sort(sub.begin(), sub.end());
      sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
      auto [it, inserted] = index.emplace(sub, subsets.size());
      if (inserted) {
        if (subsets.size() >= cap) {
          throw BudgetExceeded("factor presentation exceeds " + std::to_string(cap) + " states");
        }
        subsets.push_back(sub);
      }
      row[c] = it->second;
    }
    delta.push_back(std::move(row));
  }
  Presentation pres(subsets.size(), out_b, 0);
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (std::size_t c = 0; c < out_b; ++c) {
      if (delta[i][c] != Presentation::npos) pres.set_edge(i, static_cast<Symbol>(c), delta[i][c]);
    }
  }
  return pres;
}

}  // namespace

FactorSystem::FactorSystem(std::shared_ptr<const Language> source, BlockCode code,
                           std::size_t state_cap)
    : source_(std::move(source)),
      code_(std::move(code)),
      pres_(build_factor_presentation(*source_, code_, state_cap)) {}

std::string FactorSystem::describe() const {
  return "factor of " + source_->describe() + " by " + code_.name() + " (window " +
         std::to_string(code_.window()) + ")";
}

std::size_t FactorSystem::horizon() const {
  std::size_t h = source_->horizon();
  if (h == unlimited) return unlimited;
  return h >= code_.window() - 1 ? h - (code_.window() - 1) : 0;
}

// ---------------------------------------------------------------------------

InducedDecomposition::InducedDecomposition(std::shared_ptr<const BetaSystem> source,
                                           std::shared_ptr<const FactorSystem> factor)
    : source_(std::move(source)), factor_(std::move(factor)) {
  if (&factor_->source() != static_cast<const Language*>(source_.get())) {
    throw InputError("induced decomposition: factor is not built over this source");
  }
}

std::set<std::size_t> InducedDecomposition::preimage_suffixes(WordView u) const {
  const BlockCode& code = factor_->code();
  const std::size_t k = code.window();
  const std::size_t n = u.size();
  const std::size_t total = n + k - 1;
  source_->require_within_horizon(total, "preimage search");
  constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
  std::set<std::tuple<std::size_t, Word, std::size_t>> current{{0, Word{}, n == 0 ? 0 : unset}};
  for (std::size_t i = 0; i < total && !current.empty(); ++i) {
    std::set<std::tuple<std::size_t, Word, std::size_t>> next;
    for (const auto& [match, hist, recorded] : current) {
      for (Symbol a = 0; a < source_->alphabet_size(); ++a) {
        std::size_t m2 = source_->advance(match, a);
        if (m2 == BetaSystem::npos) continue;
        Word block = hist;
        block.push_back(a);
        if (block.size() == k) {
          if (code(block) != u[i + 1 - k]) continue;
          block.erase(block.begin());
        }
        next.emplace(m2, std::move(block), i + 1 == n ? m2 : recorded);
      }
    }
    current = std::move(next);
  }
  std::set<std::size_t> out;
  for (const auto& entry : current) out.insert(std::get<2>(entry));
  return out;
}

Split InducedDecomposition::split(WordView v) const {
  auto s = preimage_suffixes(v);
  if (s.empty()) throw InputError("split: word has no preimage in the source");
  return Split{0, v.size() - *s.begin(), *s.begin()};
}

bool InducedDecomposition::member_G(WordView v) const { return preimage_suffixes(v).count(0) > 0; }

bool InducedDecomposition::member_S(WordView v) const {
  return preimage_suffixes(v).count(v.size()) > 0;
}

BigInt InducedDecomposition::count_suffix(std::size_t n) const {
  if (n == 0) return 1;
  const BlockCode& code = factor_->code();
  const std::size_t k = code.window();
  source_->require_within_horizon(n + k - 1, "suffix count");
  std::set<Word> images;
  Word word = source_->w_prefix(n);
  std::function<void(std::size_t)> extend = [&](std::size_t match) {
    if (word.size() == n + k - 1) {
      images.insert(apply_code(code, word));
      return;
    }
    for (Symbol a = 0; a < source_->alphabet_size(); ++a) {
      std::size_t m2 = source_->advance(match, a);
      if (m2 == BetaSystem::npos) continue;
      word.push_back(a);
      extend(m2);
      word.pop_back();
    }
  };
  extend(n);
  return static_cast<long long>(images.size());
}

OrbitCollection induced_suffix_collection(std::shared_ptr<const InducedDecomposition> scheme) {
  auto lang = scheme->language();
  return OrbitCollection(
      "induced:S", lang, [scheme](WordView v) { return scheme->member_S(v); },
      [scheme](std::size_t n, ScaleIndex depth) -> BigInt {
        if (depth.j == 0) return scheme->count_suffix(n);
        BigInt total = 0;
        for (const Word& u : scheme->language()->enumerate(n + depth.j)) {
          if (scheme->member_S(WordView(u).first(n))) total += 1;
        }
        return total;
      });
}

EntropyEstimate factor_suffix_entropy(std::shared_ptr<const InducedDecomposition> scheme,
                                      std::size_t n_max) {
  return upper_entropy(induced_suffix_collection(std::move(scheme)), ScaleIndex{0}, n_max);
}

// ---------------------------------------------------------------------------

std::string to_string(FactorVerdict v) {
  switch (v) {
    case FactorVerdict::positive_entropy:
      return "positive entropy";
    case FactorVerdict::single_point:
      return "single point";
    case FactorVerdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

FactorEntropyResult factor_entropy_positive(const BetaSystem& source, const BlockCode& code,
                                            ScaleIndex depth, std::size_t n_limit,
                                            std::size_t m_check, std::size_t word_budget) {
  code.require_total(source);
  FactorEntropyResult res;
  const std::size_t k = code.window();
  bool budget_hit = false;
  bool one_image_per_length = true;
  for (std::size_t n = std::max<std::size_t>(k, 1); n <= n_limit; ++n) {
    if (source.count(n) > BigInt(static_cast<long long>(word_budget))) {
      budget_hit = true;
      break;
    }
    std::map<Word, Word> first_by_image;  // image -> least good-core word
    std::set<Word> all_images;
    for (const Word& v : source.enumerate(n)) {
      Word img = apply_code(code, v);
      all_images.insert(img);
      if (source.match_length(v) != std::size_t{0}) continue;
      first_by_image.emplace(std::move(img), v);
    }
    if (all_images.size() > 1) one_image_per_length = false;
    if (first_by_image.size() < 2) continue;
    // The two least good-core words with different images.
    std::vector<std::pair<Word, Word>> by_word;
    for (const auto& [img, v] : first_by_image) by_word.emplace_back(v, img);
    std::sort(by_word.begin(), by_word.end());
    res.n = n;
    res.v1 = by_word[0].first;
    res.v2 = by_word[1].first;
    // Gluing good-core words is free; verify it for m <= m_check.
    const Word* blocks[2] = {&res.v1, &res.v2};
    for (std::size_t m = 1; m <= m_check; ++m) {
      if (n * m > source.horizon()) break;
      std::set<Word> images;
      bool ok = true;
      for (std::size_t bits = 0; bits < (std::size_t{1} << m) && ok; ++bits) {
        Word glued;
        for (std::size_t i = 0; i < m; ++i) {
          const Word& b = *blocks[(bits >> i) & 1U];
          glued.insert(glued.end(), b.begin(), b.end());
        }
        if (!source.contains(glued)) {
          ok = false;
          break;
        }
        images.insert(apply_code(code, glued));
      }
      if (!ok || images.size() != (std::size_t{1} << m)) {
        res.verdict = FactorVerdict::inconclusive;
        res.detail = "gluing check failed at m=" + std::to_string(m);
        return res;
      }
      res.certified_m = m;
    }
    res.verdict = FactorVerdict::positive_entropy;
    res.rate_bound = std::log(2.0) / static_cast<double>(n);
    std::ostringstream d;
    d << "good-core words " << format_word(res.v1, source.alphabet_size()) << " and "
      << format_word(res.v2, source.alphabet_size()) << " have different images; Lambda(Y, "
      << n << "m, 2^-" << depth.j << ") >= 2^m";
    res.detail = d.str();
    return res;
  }
  if (!budget_hit && one_image_per_length) {
    res.verdict = FactorVerdict::single_point;
    res.detail = "one image word per length up to n=" + std::to_string(n_limit);
  } else {
    res.verdict = FactorVerdict::inconclusive;
    res.detail = budget_hit ? "word budget exhausted" : "no separated pair up to n=" + std::to_string(n_limit);
  }
  return res;
}

// ---------------------------------------------------------------------------

PairAutomaton::PairAutomaton(const Language& source, const BlockCode& code, std::size_t state_cap) {
  code.require_total(source);
  const Presentation& src = source.presentation();
  const std::size_t k = code.window();
  using Key = std::tuple<Presentation::State, Presentation::State, Word, Word, bool>;
  std::map<Key, std::size_t> index;
  auto intern = [&](State st) {
    Key key{st.left, st.right, st.left_history, st.right_history, st.diverged};
    auto [it, inserted] = index.emplace(key, states_.size());
    if (inserted) {
      if (states_.size() >= state_cap) {
        throw BudgetExceeded("pair automaton exceeds " + std::to_string(state_cap) + " states");
      }
      states_.push_back(std::move(st));
    }
    return it->second;
  };
  intern(State{src.start(), src.start(), {}, {}, false});
  for (std::size_t i = 0; i < states_.size(); ++i) {
    for (Symbol a = 0; a < src.alphabet_size(); ++a) {
      for (Symbol b = 0; b < src.alphabet_size(); ++b) {
        const State& cur = states_[i];
        auto t = src.next(cur.left, a);
        auto u = src.next(cur.right, b);
        if (t == Presentation::npos || u == Presentation::npos) continue;
        Word lh = cur.left_history;
        Word rh = cur.right_history;
        lh.push_back(a);
        rh.push_back(b);
        if (lh.size() == k) {
          if (code(lh) != code(rh)) continue;
          lh.erase(lh.begin());
          rh.erase(rh.begin());
        }
        bool diverged = cur.diverged || a != b;
        std::size_t to = intern(State{t, u, std::move(lh), std::move(rh), diverged});
        edges_.push_back({i, a, b, to});
      }
    }
  }
  // Prune states without an infinite future.
  const std::size_t n = states_.size();
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<std::size_t> out(n, 0);
  for (const Edge& e : edges_) {
    preds[e.to].push_back(e.from);
    ++out[e.from];
  }
  live_.assign(n, 1);
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < n; ++s) {
    if (out[s] == 0) queue.push_back(s);
  }
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    if (!live_[s]) continue;
    live_[s] = 0;
    for (std::size_t p : preds[s]) {
      if (live_[p] && --out[p] == 0) queue.push_back(p);
    }
  }
}

BigInt PairAutomaton::count_pairs(std::size_t n) const {
  std::vector<BigInt> cur(states_.size(), BigInt(0));
  cur[0] = 1;
  for (std::size_t step = 0; step < n; ++step) {
    std::vector<BigInt> next(states_.size(), BigInt(0));
    for (const Edge& e : edges_) {
      if (cur[e.from] != 0) next[e.to] += cur[e.from];
    }
    cur = std::move(next);
  }
  BigInt total = 0;
  for (const BigInt& c : cur) total += c;
  return total;
}

std::string PairAutomaton::to_csv() const {
  std::ostringstream out;
  out << "from,left_symbol,right_symbol,to,to_diverged\n";
  for (const Edge& e : edges_) {
    out << e.from << ',' << e.a << ',' << e.b << ',' << e.to << ','
        << (states_[e.to].diverged ? 1 : 0) << '\n';
  }
  return out.str();
}

ExpansivityReport nonexpansive_growth(const Language& source, const BlockCode& code,
                                      ScaleIndex depth) {
  ExpansivityReport rep;
  rep.depth = depth;
  rep.horizon_only = source.horizon() != Language::unlimited;
  const double none = -std::numeric_limits<double>::infinity();
  std::optional<PairAutomaton> pa;
  try {
    pa.emplace(source, code);
  } catch (const BudgetExceeded& e) {
    rep.inconclusive = true;
    rep.detail = e.what();
    return rep;
  }
  rep.pair_states = pa->num_states();
  const auto& live = pa->live();
  const auto& states = pa->states();
  std::vector<std::size_t> nondiag;
  for (std::size_t s = 0; s < states.size(); ++s) {
    if (live[s] && states[s].diverged) nondiag.push_back(s);
  }
  rep.nondiagonal_live_states = nondiag.size();
  if (nondiag.empty()) {
    rep.positively_expansive = true;
    rep.growth = none;
    rep.pair_growth = none;
    rep.detail = "no distinct pair of source paths has equal images";
    return rep;
  }

  PrecisionGuard guard(128);
  const HighFloat tol("1e-30");
  {
    std::vector<std::size_t> local(states.size(), nondiag.size());
    for (std::size_t i = 0; i < nondiag.size(); ++i) local[nondiag[i]] = i;
    std::vector<std::vector<BigInt>> m(nondiag.size(), std::vector<BigInt>(nondiag.size(), BigInt(0)));
    for (const auto& e : pa->edges()) {
      if (local[e.from] < nondiag.size() && local[e.to] < nondiag.size()) m[local[e.from]][local[e.to]] += 1;
    }
    rep.pair_growth = spectral_radius(m, tol).log_radius();
  }

  // Project onto the first coordinate and determinize; count words whose run
  // ends in a subset holding a live diverged pair.
  std::map<std::vector<std::size_t>, std::size_t> index;
  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::vector<std::size_t>> next_of;
  std::vector<std::vector<std::vector<std::size_t>>> by_symbol(states.size());
  const std::size_t b = source.alphabet_size();
  for (auto& row : by_symbol) row.resize(b);
  for (const auto& e : pa->edges()) {
    if (live[e.to]) by_symbol[e.from][e.a].push_back(e.to);
  }
  if (!live[0]) {
    rep.positively_expansive = true;
    rep.growth = none;
    return rep;
  }
  subsets.push_back({0});
  index[{0}] = 0;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    std::vector<std::size_t> row(b, Presentation::npos);
    for (Symbol a = 0; a < b; ++a) {
      std::vector<std::size_t> sub;
      for (std::size_t s : subsets[i]) {
        const auto& t = by_symbol[s][a];
        sub.insert(sub.end(), t.begin(), t.end());
      }
      if (sub.empty()) continue;
      std::sort(sub.begin(), sub.end());
      sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
      auto [it, inserted] = index.emplace(sub, subsets.size());
      if (inserted) {
        if (subsets.size() >= FactorSystem::kStateCap) {
          rep.inconclusive = true;
          rep.detail = "projected pair automaton exceeds the state cap";
          return rep;
        }
        subsets.push_back(sub);
      }
      row[a] = it->second;
    }
    next_of.push_back(std::move(row));
  }
  const std::size_t d = subsets.size();
  std::vector<char> useful(d, 0);
  std::vector<std::vector<std::size_t>> preds(d);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t t : next_of[i]) {
      if (t != Presentation::npos) preds[t].push_back(i);
    }
    bool flagged = std::any_of(subsets[i].begin(), subsets[i].end(),
                               [&](std::size_t s) { return states[s].diverged; });
    if (flagged) {
      useful[i] = 1;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    for (std::size_t p : preds[s]) {
      if (!useful[p]) {
        useful[p] = 1;
        queue.push_back(p);
      }
    }
  }
  std::vector<std::size_t> keep;
  std::vector<std::size_t> local(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (useful[i]) {
      local[i] = keep.size();
      keep.push_back(i);
    }
  }
  std::vector<std::vector<BigInt>> m(keep.size(), std::vector<BigInt>(keep.size(), BigInt(0)));
  for (std::size_t i : keep) {
    for (std::size_t t : next_of[i]) {
      if (t != Presentation::npos && useful[t]) m[local[i]][local[t]] += 1;
    }
  }
  rep.growth = spectral_radius(m, tol).log_radius();
  rep.detail = std::to_string(rep.nondiagonal_live_states) +
               " live pair states carry distinct paths with equal images";
  return rep;
}

TheoremCReport theorem_c_check(std::shared_ptr<const BetaSystem> source, const BlockCode& code,
                               std::size_t n_max, std::size_t n_first, std::size_t n_second,
                               double tolerance) {
  TheoremCReport rep;
  rep.n_first = n_first;
  rep.n_second = n_second;
  rep.expansivity = nonexpansive_growth(*source, code, ScaleIndex{0});
  auto factor = std::make_shared<const FactorSystem>(source, code);
  auto induced = std::make_shared<const InducedDecomposition>(source, factor);
  rep.factor_entropy = factor_entropy_positive(*source, code, ScaleIndex{0});
  if (rep.factor_entropy.verdict == FactorVerdict::single_point) {
    rep.verdict = "single point";
    return rep;
  }
  rep.suffix = factor_suffix_entropy(induced, n_max);
  rep.factor_entropy_rate = upper_entropy(whole_space(factor), ScaleIndex{0}, n_max).rate;
  constexpr double kMargin = 1e-9;
  rep.hypotheses_met = rep.expansivity.positively_expansive &&
                       rep.factor_entropy.verdict == FactorVerdict::positive_entropy &&
                       rep.suffix.rate + kMargin < rep.factor_entropy_rate;
  if (!rep.hypotheses_met) {
    if (rep.expansivity.inconclusive || rep.factor_entropy.verdict == FactorVerdict::inconclusive) {
      rep.verdict = "inconclusive";
    } else if (!rep.expansivity.positively_expansive) {
      rep.verdict = "not positively expansive; intrinsic-ergodicity hypotheses not established";
    } else {
      rep.verdict = "intrinsic-ergodicity hypotheses not met";
    }
    return rep;
  }
  CylinderMeasure first = empirical_mme(*factor, n_first, 3);
  CylinderMeasure second = empirical_mme(*factor, n_second, 3);
  for (std::size_t l = 1; l <= 3; ++l) {
    rep.mme_difference = std::max(rep.mme_difference, max_cylinder_difference(first, second, l));
  }
  rep.uniqueness_confirmed = rep.mme_difference < tolerance;
  rep.verdict = rep.uniqueness_confirmed
                    ? "positively expansive; intrinsic-ergodicity hypotheses met"
                    : "positively expansive; hypotheses met but empirical measures disagree";
  return rep;
}

}  // namespace obstruct
