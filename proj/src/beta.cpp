#include "obstruct/beta.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "obstruct/errors.hpp"

namespace obstruct {

namespace mp = boost::multiprecision;

std::string to_string(TailKind kind) {
  switch (kind) {
    case TailKind::finite:
      return "finite";
    case TailKind::eventually_periodic:
      return "eventually-periodic";
    case TailKind::truncated:
      return "truncated";
  }
  return "unknown";
}

Symbol BetaExpansion::digit(std::size_t i) const {
  if (i < digits.size()) return digits[i];
  switch (kind) {
    case TailKind::finite:
      return 0;
    case TailKind::eventually_periodic:
      return digits[preperiod + (i - preperiod) % period];
    case TailKind::truncated:
      break;
  }
  throw HorizonExceeded("digit w_" + std::to_string(i + 1) + " of a truncated expansion",
                        digits.size());
}

std::string BetaExpansion::notation() const {
  std::size_t alphabet = digits.empty() ? 1 : *std::max_element(digits.begin(), digits.end()) + 1U;
  auto text = [&](std::size_t from, std::size_t to) {
    return format_word(WordView(digits).subspan(from, to - from), alphabet);
  };
  switch (kind) {
    case TailKind::finite:
      return text(0, digits.size());
    case TailKind::eventually_periodic:
      if (digits.size() - preperiod == 1) return text(0, digits.size()) + "^∞";
      return text(0, preperiod) + "(" + text(preperiod, digits.size()) + ")^∞";
    case TailKind::truncated:
      return text(0, digits.size()) + "...";
  }
  return {};
}

bool BetaExpansion::self_admissible() const {
  if (digits.empty()) return false;
  // Beyond preperiod + 2 * period digits two eventually periodic sequences
  // with these parameters cannot first differ.
  std::size_t horizon = digits.size();
  std::size_t shifts = digits.size();
  if (kind == TailKind::eventually_periodic) {
    horizon = preperiod + 2 * period;
    shifts = preperiod + period;
  } else if (kind == TailKind::finite) {
    horizon = digits.size() + 1;
  }
  for (std::size_t s = 1; s < shifts; ++s) {
    std::size_t span = kind == TailKind::truncated ? horizon - s : horizon;
    for (std::size_t i = 0; i < span; ++i) {
      Symbol shifted = digit(s + i);
      Symbol base = digit(i);
      if (shifted < base) break;
      if (shifted > base) return false;
    }
  }
  return true;
}

BetaExpansion greedy_expansion(const QuadraticNumber& beta, std::size_t max_digits) {
  if (beta <= QuadraticNumber(1)) {
    throw InputError("beta must be greater than 1, got " + beta.to_string());
  }
  if (max_digits == 0) {
    throw InputError("greedy_expansion needs at least one digit");
  }
  BetaExpansion out;
  out.beta = beta;
  if (beta.is_rational() && mp::denominator(beta.rational_part()) == 1) {
    // The raw greedy step would emit the out-of-range digit beta.
    Symbol top = beta.rational_part().convert_to<Symbol>() - 1U;
    out.digits = {top};
    out.kind = TailKind::eventually_periodic;
    out.preperiod = 0;
    out.period = 1;
    return out;
  }
  using Key = std::pair<Rational, Rational>;
  std::map<Key, std::size_t> seen;
  QuadraticNumber x(1);
  for (std::size_t i = 0; i < max_digits; ++i) {
    QuadraticNumber y = beta * x;
    BigInt d = y.floor();
    out.digits.push_back(d.convert_to<Symbol>());
    x = y - QuadraticNumber(Rational(d));
    if (x.sign() == 0) {
      out.kind = TailKind::finite;
      return out;
    }
    Key key{x.rational_part(), x.irrational_part()};
    auto [it, inserted] = seen.emplace(key, i + 1);
    if (!inserted) {
      out.kind = TailKind::eventually_periodic;
      out.preperiod = it->second;
      out.period = i + 1 - it->second;
      return out;
    }
  }
  out.kind = TailKind::truncated;
  return out;
}

BetaExpansion quasi_greedy(const BetaExpansion& e) {
  if (e.is_infinite()) return e;
  BetaExpansion out = e;
  while (!out.digits.empty() && out.digits.back() == 0) out.digits.pop_back();
  if (out.digits.empty()) {
    throw InputError("quasi_greedy: expansion has no nonzero digit");
  }
  out.digits.back() -= 1;
  out.kind = TailKind::eventually_periodic;
  out.preperiod = 0;
  out.period = out.digits.size();
  return out;
}

BetaExpansion read_expansion(std::istream& in) {
  BetaExpansion out;
  std::string line;
  std::optional<std::size_t> period;
  bool finite = false;
  std::string digit_text;
  while (std::getline(in, line)) {
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::string trimmed = line.substr(first);
    while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' ')) trimmed.pop_back();
    if (trimmed.rfind("period=", 0) == 0) {
      try {
        period = std::stoul(trimmed.substr(7));
      } catch (const std::exception&) {
        throw InputError("expansion file: bad period header '" + trimmed + "'");
      }
      continue;
    }
    if (trimmed == "finite") {
      finite = true;
      continue;
    }
    if (!digit_text.empty()) digit_text += ' ';
    digit_text += trimmed;
  }
  bool spaced = digit_text.find(' ') != std::string::npos;
  out.digits = parse_word(digit_text, spaced ? 1000000 : 10);
  if (out.digits.empty()) throw InputError("expansion file: no digits");
  if (out.digits.front() == 0) throw InputError("expansion file: w_1 must be at least 1");
  if (period) {
    if (*period == 0 || *period > out.digits.size()) {
      throw InputError("expansion file: period must lie in [1, number of digits]");
    }
    out.kind = TailKind::eventually_periodic;
    out.period = *period;
    out.preperiod = out.digits.size() - *period;
  } else if (finite) {
    out.kind = TailKind::finite;
  } else {
    out.kind = TailKind::truncated;
  }
  return out;
}

void write_expansion(std::ostream& out, const BetaExpansion& e) {
  if (e.kind == TailKind::eventually_periodic) out << "period=" << e.period << '\n';
  if (e.kind == TailKind::finite) out << "finite\n";
  std::size_t alphabet = *std::max_element(e.digits.begin(), e.digits.end()) + 1U;
  out << format_word(e.digits, alphabet) << '\n';
}

namespace {

// Root of sum_{i<N} w_{i+1} x^{-(i+1)} = 1 on [w_1, w_1 + 1] by bisection.
HighFloat beta_from_truncated(const BetaExpansion& w) {
  HighFloat lo = HighFloat(w.digits.front());
  HighFloat hi = lo + 1;
  auto value = [&](const HighFloat& x) {
    HighFloat sum = 0;
    HighFloat power = 1;
    for (Symbol d : w.digits) {
      power /= x;
      sum += HighFloat(d) * power;
    }
    return sum;
  };
  for (int it = 0; it < 400; ++it) {
    HighFloat mid = (lo + hi) / 2;
    if (value(mid) > 1) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

}  // namespace

BetaSystem::BetaSystem(BetaExpansion w, unsigned precision_bits)
    : w_(quasi_greedy(w)), precision_bits_(std::max(precision_bits, 64U)) {
  if (w_.digits.empty() || w_.digits.front() == 0) {
    throw InputError("beta expansion must start with a nonzero digit");
  }
  if (!w_.self_admissible()) {
    throw InputError("expansion " + w_.notation() +
                     " is not self-admissible (some shift exceeds it lexicographically)");
  }
  const std::size_t alphabet = alphabet_size();
  for (Symbol d : w_.digits) {
    if (d >= alphabet) throw InputError("expansion digit exceeds w_1");
  }
  if (w_.kind == TailKind::eventually_periodic) {
    const std::size_t states = w_.digits.size();
    automaton_ = Presentation(states, alphabet, 0);
    for (std::size_t k = 0; k < states; ++k) {
      Symbol next_digit = w_.digits[k];
      for (Symbol a = 0; a < next_digit; ++a) automaton_.set_edge(k, a, 0);
      automaton_.set_edge(k, next_digit, k + 1 < states ? k + 1 : w_.preperiod);
    }
  } else {
    const std::size_t n = w_.digits.size();
    automaton_ = Presentation(n + 1, alphabet, 0);
    for (std::size_t k = 0; k < n; ++k) {
      Symbol next_digit = w_.digits[k];
      for (Symbol a = 0; a < next_digit; ++a) automaton_.set_edge(k, a, 0);
      automaton_.set_edge(k, next_digit, k + 1);
    }
  }

  PrecisionGuard guard(precision_bits_ + 64);
  if (w_.beta) {
    beta_value_ = w_.beta->to_high();
  } else if (w_.kind == TailKind::eventually_periodic) {
    HighFloat tolerance = mp::pow(HighFloat(2), -static_cast<int>(precision_bits_));
    beta_value_ = spectral_radius(automaton_.adjacency(), tolerance).upper;
  } else {
    beta_value_ = beta_from_truncated(w_);
  }
}

std::string BetaSystem::describe() const {
  std::ostringstream out;
  out << "beta-shift";
  if (w_.beta) out << " beta=" << w_.beta->to_string();
  out << " w=" << w_.notation();
  return out.str();
}

std::size_t BetaSystem::horizon() const {
  return is_truncated() ? w_.digits.size() : Language::unlimited;
}

double BetaSystem::log_beta() const {
  PrecisionGuard guard(precision_bits_);
  return mp::log(beta_value_).convert_to<double>();
}

std::size_t BetaSystem::advance(std::size_t match, Symbol a) const {
  Symbol next_digit = w_.digit(match);
  if (a < next_digit) return 0;
  if (a == next_digit) return match + 1;
  return npos;
}

std::optional<std::size_t> BetaSystem::match_length(WordView v) const {
  require_within_horizon(v.size(), "match length");
  std::size_t k = 0;
  for (Symbol a : v) {
    if (a >= alphabet_size()) return std::nullopt;
    k = advance(k, a);
    if (k == npos) return std::nullopt;
  }
  return k;
}

Presentation::State BetaSystem::fold(std::size_t match) const {
  if (w_.kind != TailKind::eventually_periodic || match < w_.digits.size()) return match;
  return w_.preperiod + (match - w_.preperiod) % w_.period;
}

std::vector<Word> BetaSystem::enumerate_language(std::size_t n, std::size_t cap) const {
  return enumerate(n, cap);
}

BigInt BetaSystem::count_language(std::size_t n) const {
  if (n > kCountCap) {
    throw BudgetExceeded("count_language: n = " + std::to_string(n) + " exceeds the cap " +
                         std::to_string(kCountCap));
  }
  return count(n);
}

std::vector<BigInt> BetaSystem::match_length_distribution(std::size_t n) const {
  require_within_horizon(n, "match-length distribution");
  std::vector<BigInt> dist(n + 1, BigInt(0));
  dist[0] = 1;
  const std::size_t alphabet = alphabet_size();
  for (std::size_t step = 0; step < n; ++step) {
    std::vector<BigInt> next(n + 1, BigInt(0));
    for (std::size_t k = 0; k <= step; ++k) {
      if (dist[k] == 0) continue;
      Symbol d = w_.digit(k);
      // Symbols below the next digit reset to 0; the digit itself extends.
      next[0] += dist[k] * std::min<std::size_t>(d, alphabet);
      next[k + 1] += dist[k];
    }
    dist.swap(next);
  }
  return dist;
}

Word BetaSystem::w_prefix(std::size_t n) const {
  Word out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(w_.digit(i));
  return out;
}

bool BetaSystem::zero_tail_admissible() const {
  for (std::size_t s = 0; s < automaton_.num_states(); ++s) {
    if (is_truncated() && s == w_.digits.size()) continue;
    if (automaton_.next(s, 0) == Presentation::npos) return false;
  }
  return true;
}

std::string BetaSystem::automaton_csv() const {
  std::ostringstream out;
  out << "state,symbol,state\n";
  for (const auto& e : automaton_.edges()) out << e.from << ',' << e.symbol << ',' << e.to << '\n';
  return out.str();
}

std::shared_ptr<const BetaSystem> make_beta_shift(const QuadraticNumber& beta,
                                                  std::size_t max_digits,
                                                  unsigned precision_bits) {
  return std::make_shared<const BetaSystem>(greedy_expansion(beta, max_digits), precision_bits);
}

}  // namespace obstruct
