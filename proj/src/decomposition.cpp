#include "obstruct/decomposition.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

#include "obstruct/errors.hpp"
#include "obstruct/parallel.hpp"

namespace obstruct {

bool DecompositionScheme::member_GM(WordView v, std::size_t level) const {
  Split sp = split(v);
  return sp.p <= level && sp.s <= level;
}

namespace {

BigInt count_prefix_class(const Language& lang, std::size_t n, ScaleIndex depth,
                          const std::function<bool(WordView)>& pred) {
  BigInt total = 0;
  for (const Word& u : lang.enumerate(n + depth.j)) {
    if (pred(WordView(u).first(n))) total += 1;
  }
  return total;
}

}  // namespace

BigInt DecompositionScheme::count_good(std::size_t n, ScaleIndex depth) const {
  return count_prefix_class(*language(), n, depth, [this](WordView v) { return member_G(v); });
}

BigInt DecompositionScheme::count_filtration(std::size_t level, std::size_t n,
                                             ScaleIndex depth) const {
  return count_prefix_class(*language(), n, depth,
                            [this, level](WordView v) { return member_GM(v, level); });
}

BigInt DecompositionScheme::count_obstruction(std::size_t n, ScaleIndex depth) const {
  return count_prefix_class(*language(), n, depth,
                            [this](WordView v) { return member_P(v) || member_S(v); });
}

OrbitCollection good_collection(std::shared_ptr<const DecompositionScheme> scheme) {
  auto lang = scheme->language();
  return OrbitCollection(
      scheme->name() + ":G", lang, [scheme](WordView v) { return scheme->member_G(v); },
      [scheme](std::size_t n, ScaleIndex depth) { return scheme->count_good(n, depth); });
}

OrbitCollection filtration_collection(std::shared_ptr<const DecompositionScheme> scheme,
                                      std::size_t level) {
  auto lang = scheme->language();
  return OrbitCollection(
      scheme->name() + ":G^" + std::to_string(level), lang,
      [scheme, level](WordView v) { return scheme->member_GM(v, level); },
      [scheme, level](std::size_t n, ScaleIndex depth) {
        return scheme->count_filtration(level, n, depth);
      });
}

OrbitCollection obstruction_collection(std::shared_ptr<const DecompositionScheme> scheme) {
  auto lang = scheme->language();
  return OrbitCollection(
      scheme->name() + ":P+S", lang,
      [scheme](WordView v) { return scheme->member_P(v) || scheme->member_S(v); },
      [scheme](std::size_t n, ScaleIndex depth) { return scheme->count_obstruction(n, depth); });
}

OrbitCollection suffix_collection(std::shared_ptr<const DecompositionScheme> scheme) {
  auto lang = scheme->language();
  return OrbitCollection(scheme->name() + ":S", lang,
                         [scheme](WordView v) { return scheme->member_S(v); });
}

// ---------------------------------------------------------------------------

BetaDecomposition::BetaDecomposition(std::shared_ptr<const BetaSystem> sys)
    : sys_(std::move(sys)) {}

Split BetaDecomposition::split(WordView v) const {
  auto s = sys_->match_length(v);
  if (!s) {
    throw InputError("split: word " + format_word(v, sys_->alphabet_size()) +
                     " is not in the language");
  }
  return Split{0, v.size() - *s, *s};
}

bool BetaDecomposition::member_G(WordView v) const {
  auto s = sys_->match_length(v);
  return s && *s == 0;
}

bool BetaDecomposition::member_S(WordView v) const {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != sys_->expansion().digit(i)) return false;
  }
  return true;
}

BigInt BetaDecomposition::count_good(std::size_t n, ScaleIndex depth) const {
  sys_->require_within_horizon(n + depth.j, "good-core count");
  auto dist = sys_->match_length_distribution(n);
  return dist[0] * sys_->presentation().count_words_from(sys_->fold(0), depth.j);
}

BigInt BetaDecomposition::count_filtration(std::size_t level, std::size_t n,
                                           ScaleIndex depth) const {
  sys_->require_within_horizon(n + depth.j, "filtration count");
  auto dist = sys_->match_length_distribution(n);
  BigInt total = 0;
  for (std::size_t k = 0; k <= std::min(level, n); ++k) {
    if (dist[k] == 0) continue;
    total += dist[k] * sys_->presentation().count_words_from(sys_->fold(k), depth.j);
  }
  return total;
}

BigInt BetaDecomposition::count_obstruction(std::size_t n, ScaleIndex depth) const {
  sys_->require_within_horizon(n + depth.j, "obstruction count");
  if (n == 0) return sys_->count(depth.j);
  // One suffix word w_1..w_n per length, extended j symbols.
  return sys_->presentation().count_words_from(sys_->fold(n), depth.j);
}

DegenerateDecomposition::DegenerateDecomposition(std::shared_ptr<const Language> lang)
    : lang_(std::move(lang)) {}

Split DegenerateDecomposition::split(WordView v) const {
  if (!lang_->contains(v)) throw InputError("split: word is not in the language");
  return Split{0, 0, v.size()};
}

BigInt DegenerateDecomposition::count_good(std::size_t n, ScaleIndex depth) const {
  return n == 0 ? lang_->count(depth.j) : BigInt(0);
}

BigInt DegenerateDecomposition::count_filtration(std::size_t level, std::size_t n,
                                                 ScaleIndex depth) const {
  return n <= level ? lang_->count(n + depth.j) : BigInt(0);
}

BigInt DegenerateDecomposition::count_obstruction(std::size_t n, ScaleIndex depth) const {
  return lang_->count(n + depth.j);
}

std::shared_ptr<const DecompositionScheme> beta_decomposition(
    std::shared_ptr<const BetaSystem> sys) {
  return std::make_shared<const BetaDecomposition>(std::move(sys));
}

std::optional<std::size_t> minimal_zero_padding(const BetaSystem& sys, WordView v,
                                                std::size_t k_limit) {
  auto s = sys.match_length(v);
  if (!s) throw InputError("minimal_zero_padding: word is not in the language");
  std::size_t match = *s;
  for (std::size_t k = 0; k <= k_limit; ++k) {
    if (match == 0) return k;
    if (v.size() + k + 1 > sys.horizon()) return std::nullopt;
    match = sys.advance(match, 0);
  }
  return std::nullopt;
}

Rational filtration_coverage(const DecompositionScheme& scheme, std::size_t level, std::size_t n) {
  BigInt total = scheme.language()->count(n);
  BigInt good = scheme.count_filtration(level, n, ScaleIndex{0});
  return Rational(good, total);
}

// ---------------------------------------------------------------------------

std::optional<Word> glue(const Language& lang, const std::vector<Word>& cylinders,
                         const std::vector<std::size_t>& times, std::size_t tau) {
  const std::size_t k = cylinders.size();
  std::vector<std::size_t> offsets(k, 0);
  for (std::size_t i = 1; i < k; ++i) offsets[i] = offsets[i - 1] + times[i - 1] + tau;
  std::size_t length = 0;
  for (std::size_t i = 0; i < k; ++i) length = std::max(length, offsets[i] + cylinders[i].size());
  lang.require_within_horizon(length, "gluing");

  constexpr Symbol kFree = std::numeric_limits<Symbol>::max();
  std::vector<Symbol> fixed(length, kFree);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t t = 0; t < cylinders[i].size(); ++t) {
      Symbol& slot = fixed[offsets[i] + t];
      if (slot != kFree && slot != cylinders[i][t]) return std::nullopt;
      slot = cylinders[i][t];
    }
  }

  const Presentation& pres = lang.presentation();
  const std::size_t states = pres.num_states();
  std::vector<char> dead((length + 1) * states, 0);
  Word out(length, 0);
  // Depth-first search with memoized dead (position, state) pairs; symbols
  // are tried in increasing order so the result is the lexicographically
  // least gluing.
  std::function<bool(std::size_t, Presentation::State)> search =
      [&](std::size_t pos, Presentation::State s) -> bool {
    if (pos == length) return true;
    if (dead[pos * states + s]) return false;
    Symbol lo = fixed[pos] == kFree ? 0 : fixed[pos];
    Symbol hi = fixed[pos] == kFree ? static_cast<Symbol>(pres.alphabet_size()) : fixed[pos] + 1;
    for (Symbol a = lo; a < hi; ++a) {
      Presentation::State t = pres.next(s, a);
      if (t == Presentation::npos) continue;
      out[pos] = a;
      if (search(pos + 1, t)) return true;
    }
    dead[pos * states + s] = 1;
    return false;
  };
  if (!search(0, pres.start())) return std::nullopt;
  return out;
}

namespace {

struct CollectionWord {
  Word cylinder;
  std::size_t time;
};

GluingWitness make_witness(const std::vector<const CollectionWord*>& tuple, std::size_t tau,
                           const std::optional<Word>& glued) {
  GluingWitness w;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    w.tuple.push_back(tuple[i]->cylinder);
    if (glued && i + 1 < tuple.size()) {
      std::size_t gap_start = offset + tuple[i]->cylinder.size();
      std::size_t gap_end = offset + tuple[i]->time + tau;
      Word gap;
      if (gap_end > gap_start) {
        gap.assign(glued->begin() + static_cast<std::ptrdiff_t>(gap_start),
                   glued->begin() + static_cast<std::ptrdiff_t>(gap_end));
      }
      w.gaps.push_back(std::move(gap));
    }
    offset += tuple[i]->time + tau;
  }
  if (glued) w.glued = *glued;
  return w;
}

}  // namespace

SpecificationReport check_specification(const OrbitCollection& collection, ScaleIndex depth,
                                        std::size_t tau, const SamplingPolicy& policy) {
  if (policy.k_max == 0 || policy.min_length > policy.max_length) {
    throw InputError("check_specification: empty sampling policy");
  }
  std::vector<CollectionWord> words;
  for (std::size_t n = policy.min_length; n <= policy.max_length; ++n) {
    for (Word& u : collection.cylinders(n, depth)) words.push_back({std::move(u), n});
  }

  SpecificationReport report;
  report.depth = depth;
  report.tau = tau;
  report.collection_words = words.size();

  const std::size_t w = words.size();
  // Tuple count sum_{k=1}^{k_max} w^k, saturating above the budget.
  std::size_t total = 0;
  bool over_budget = false;
  {
    std::size_t power = 1;
    for (std::size_t k = 1; k <= policy.k_max && !over_budget; ++k) {
      if (w != 0 && power > policy.tuple_budget / w) {
        over_budget = true;
        break;
      }
      power *= w;
      total += power;
      if (total > policy.tuple_budget) over_budget = true;
    }
  }

  std::vector<std::vector<std::size_t>> tuples;
  if (!over_budget) {
    report.exhaustive = true;
    tuples.reserve(total);
    for (std::size_t k = 1; k <= policy.k_max; ++k) {
      std::vector<std::size_t> idx(k, 0);
      if (w == 0) break;
      for (;;) {
        tuples.push_back(idx);
        std::size_t pos = k;
        while (pos > 0) {
          --pos;
          if (++idx[pos] < w) break;
          idx[pos] = 0;
          if (pos == 0) {
            pos = k + 1;
            break;
          }
        }
        if (pos == k + 1) break;
      }
    }
  } else {
    report.exhaustive = false;
    std::mt19937_64 rng(policy.seed);
    std::uniform_int_distribution<std::size_t> pick_word(0, w - 1);
    std::size_t k_lo = policy.k_max >= 2 ? 2 : 1;
    std::uniform_int_distribution<std::size_t> pick_k(k_lo, policy.k_max);
    tuples.reserve(policy.tuple_budget);
    for (std::size_t t = 0; t < policy.tuple_budget; ++t) {
      std::vector<std::size_t> idx(pick_k(rng));
      for (auto& i : idx) i = pick_word(rng);
      tuples.push_back(std::move(idx));
    }
  }

  std::vector<std::optional<Word>> results(tuples.size());
  const Language& lang = collection.ambient();
  parallel_for(tuples.size(), [&](std::size_t t) {
    std::vector<Word> cyl;
    std::vector<std::size_t> times;
    for (std::size_t i : tuples[t]) {
      cyl.push_back(words[i].cylinder);
      times.push_back(words[i].time);
    }
    results[t] = glue(lang, cyl, times, tau);
  });

  report.tuples_tested = tuples.size();
  report.pass = true;
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    std::vector<const CollectionWord*> tuple;
    for (std::size_t i : tuples[t]) tuple.push_back(&words[i]);
    if (!results[t]) {
      if (report.pass) report.failure = make_witness(tuple, tau, std::nullopt);
      report.pass = false;
    } else if (report.witnesses.size() < policy.recorded_witnesses && tuple.size() > 1) {
      report.witnesses.push_back(make_witness(tuple, tau, results[t]));
    }
  }

  std::ostringstream desc;
  desc << (report.exhaustive ? "exhaustive" : "sampled") << ": " << collection.label()
       << ", k<=" << policy.k_max << ", lengths " << policy.min_length << ".."
       << policy.max_length << ", " << w << " words, " << tuples.size() << " tuples";
  report.sample = desc.str();
  return report;
}

GluingTime min_gluing_time(const OrbitCollection& collection, ScaleIndex depth,
                           std::size_t tau_max, const SamplingPolicy& policy) {
  GluingTime out;
  for (std::size_t tau = 0; tau <= tau_max; ++tau) {
    SpecificationReport r = check_specification(collection, depth, tau, policy);
    bool pass = r.pass;
    bool exhaustive = r.exhaustive;
    if (!pass && r.failure) out.best_failure = r.failure;
    out.attempts.push_back(std::move(r));
    if (pass && exhaustive) {
      out.tau = tau;
      return out;
    }
    if (pass && !exhaustive) out.inconclusive = true;
  }
  return out;
}

bool ObstructionBound::hypotheses_met() const {
  constexpr double kMargin = 1e-9;
  return gluing_certified && estimate.rate + kMargin < full_entropy;
}

ObstructionBound obstruction_entropy_upper(std::shared_ptr<const DecompositionScheme> scheme,
                                           ScaleIndex depth, std::size_t n_max,
                                           const std::vector<std::size_t>& levels,
                                           std::size_t tau_max, const SamplingPolicy& policy) {
  ObstructionBound out;
  out.estimate = upper_entropy(obstruction_collection(scheme), depth, n_max);
  out.full_entropy = upper_entropy(whole_space(scheme->language()), depth, n_max).rate;
  out.gluing_certified = true;
  for (std::size_t level : levels) {
    GluingTime gt = min_gluing_time(filtration_collection(scheme, level), depth, tau_max, policy);
    out.gluing.emplace_back(level, gt.tau);
    if (!gt.tau) out.gluing_certified = false;
  }
  return out;
}

}  // namespace obstruct
