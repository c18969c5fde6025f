#include <doctest.h>

#include <sstream>

#include "obstruct/beta.hpp"
#include "obstruct/errors.hpp"
#include "oracles.hpp"

using namespace obstruct;

namespace {

// Greedy digits of 1 in base p/q by exact rational arithmetic.
Word rational_greedy(const Rational& beta, std::size_t count) {
  Word out;
  Rational r = 1;
  for (std::size_t i = 0; i < count && r != 0; ++i) {
    Rational x = beta * r;
    BigInt d = boost::multiprecision::numerator(x) / boost::multiprecision::denominator(x);
    out.push_back(static_cast<Symbol>(d));
    r = x - Rational(d);
  }
  return out;
}

// Greedy digits of 1 in base beta by 2048-bit floating point.
Word float_greedy(const HighFloat& beta, std::size_t count) {
  Word out;
  HighFloat r = 1;
  for (std::size_t i = 0; i < count; ++i) {
    HighFloat x = beta * r;
    HighFloat d = boost::multiprecision::floor(x);
    out.push_back(d.convert_to<unsigned>());
    r = x - d;
  }
  return out;
}

std::function<Symbol(std::size_t)> digits_of(const BetaSystem& sys) {
  return [&sys](std::size_t i) { return sys.expansion().digit(i); };
}

void check_membership(const BetaSystem& sys, std::size_t n_max,
                      const std::function<Symbol(std::size_t)>& w) {
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::size_t expected = 0;
    for (const Word& v : oracle::all_words(sys.alphabet_size(), n)) {
      bool member = oracle::beta_member(v, w);
      expected += member ? 1 : 0;
      REQUIRE(sys.contains(v) == member);
    }
    CHECK(sys.count(n) == expected);
  }
}

}  // namespace

TEST_CASE("greedy expansion of phi terminates; quasi-greedy is (10)^inf") {
  auto g = greedy_expansion(parse_quadratic("phi"), 60);
  CHECK(g.kind == TailKind::finite);
  CHECK(g.digits == Word{1, 1});
  auto q = quasi_greedy(g);
  CHECK(q.notation() == "(10)^∞");
  CHECK(q.self_admissible());
  auto sys = make_beta_shift(parse_quadratic("phi"));
  CHECK(sys->expansion().notation() == "(10)^∞");
  CHECK_FALSE(sys->is_truncated());
}

TEST_CASE("integer beta uses the full-shift convention") {
  auto sys = make_beta_shift(parse_quadratic("2"));
  CHECK(sys->expansion().notation() == "1^∞");
  CHECK(sys->alphabet_size() == 2);
  for (std::size_t n = 0; n <= 64; ++n) CHECK(sys->count(n) == boost::multiprecision::pow(BigInt(2), n));
  auto three = make_beta_shift(parse_quadratic("3"));
  CHECK(three->expansion().notation() == "2^∞");
  CHECK(three->count(10) == 59049);
}

TEST_CASE("3/2: digits match exact rational greedy, truncated with a horizon") {
  auto sys = make_beta_shift(parse_quadratic("3/2"), 60);
  CHECK(sys->is_truncated());
  Word expected = rational_greedy(Rational(3, 2), 60);
  CHECK(sys->expansion().digits == expected);
  CHECK(sys->horizon() <= 60);
  CHECK_THROWS_AS(sys->expansion().digit(60), HorizonExceeded);
  CHECK_THROWS_AS(sys->require_within_horizon(sys->horizon() + 1, "test"), HorizonExceeded);
  check_membership(*sys, 14, [&](std::size_t i) { return expected.at(i); });
}

TEST_CASE("quadratic betas: digits match 2048-bit greedy") {
  PrecisionGuard guard(2048);
  HighFloat s5 = boost::multiprecision::sqrt(HighFloat(5));
  HighFloat s3 = boost::multiprecision::sqrt(HighFloat(3));
  struct Case {
    const char* text;
    HighFloat value;
  };
  // Non-terminating greedy expansions only; terminating ones hit exact zeros
  // that floating point cannot see.
  std::vector<Case> cases{{"phi*phi", (3 + s5) / 2}, {"2+sqrt(3)", 2 + s3}};
  for (const auto& c : cases) {
    auto sys = make_beta_shift(parse_quadratic(c.text));
    Word expected = float_greedy(c.value, 40);
    Word got;
    for (std::size_t i = 0; i < 40; ++i) got.push_back(sys->expansion().digit(i));
    CHECK_MESSAGE(got == expected, c.text);
    CHECK(sys->expansion().kind == TailKind::eventually_periodic);
  }
  auto g = greedy_expansion(parse_quadratic("1+sqrt(3)"), 60);
  CHECK(g.kind == TailKind::finite);
  CHECK(g.digits == Word{2, 2});
  CHECK(quasi_greedy(g).notation() == "(21)^∞");
  (void)s3;
}

TEST_CASE("membership agrees with the lexicographic characterization") {
  check_membership(*make_beta_shift(parse_quadratic("phi")), 14, oracle::periodic({}, {1, 0}));
  auto phi2 = make_beta_shift(parse_quadratic("phi*phi"));
  check_membership(*phi2, 9, digits_of(*phi2));
  auto s3 = make_beta_shift(parse_quadratic("1+sqrt(3)"));
  check_membership(*s3, 8, oracle::periodic({}, {2, 1}));
  auto s2 = make_beta_shift(parse_quadratic("1+sqrt(2)"));
  check_membership(*s2, 8, oracle::periodic({}, {2, 0}));
}

TEST_CASE("count_language(n) >= beta^n on sofic systems") {
  for (const char* b : {"phi", "phi*phi", "1+sqrt(2)", "1+sqrt(3)", "2"}) {
    auto sys = make_beta_shift(parse_quadratic(b));
    PrecisionGuard guard(256);
    HighFloat beta = sys->beta_value();
    for (std::size_t n = 1; n <= 40; ++n) {
      CHECK_MESSAGE(HighFloat(sys->count_language(n)) >= boost::multiprecision::pow(beta, n) * (1 - HighFloat("1e-60")), b);
    }
  }
}

TEST_CASE("match-length distribution matches brute-force suffix matching") {
  for (const char* b : {"phi", "1+sqrt(2)", "3/2"}) {
    auto sys = make_beta_shift(parse_quadratic(b));
    auto w = digits_of(*sys);
    for (std::size_t n = 1; n <= 9; ++n) {
      std::vector<BigInt> expected(n + 1, 0);
      for (const Word& v : sys->enumerate(n)) {
        std::size_t s = oracle::longest_w_suffix(v, w);
        expected[s] += 1;
        CHECK(sys->match_length(v) == s);
      }
      CHECK(sys->match_length_distribution(n) == expected);
    }
  }
  CHECK_FALSE(make_beta_shift(parse_quadratic("phi"))->match_length(Word{1, 1}).has_value());
}

TEST_CASE("w prefixes, zero tails and the automaton dump") {
  auto sys = make_beta_shift(parse_quadratic("phi"));
  CHECK(sys->w_prefix(5) == Word{1, 0, 1, 0, 1});
  CHECK(sys->zero_tail_admissible());
  std::string csv = sys->automaton_csv();
  CHECK(csv.rfind("state,symbol,state", 0) == 0);
  CHECK(sys->log_beta() == doctest::Approx(0.48121182505960344));
}

TEST_CASE("expansion files round trip and reject bad input") {
  auto sys = make_beta_shift(parse_quadratic("phi*phi"));
  std::stringstream buf;
  write_expansion(buf, sys->expansion());
  BetaExpansion back = read_expansion(buf);
  CHECK(back.digits == sys->expansion().digits);
  CHECK(back.kind == sys->expansion().kind);
  CHECK(back.period == sys->expansion().period);

  std::stringstream periodic("period=2\n10\n");
  BetaSystem golden(read_expansion(periodic));
  CHECK(golden.count(10) == oracle::fibonacci(12));

  std::stringstream bad_period("period=0\n10\n");
  CHECK_THROWS_AS(read_expansion(bad_period), InputError);
  std::stringstream leading_zero("01\n");
  CHECK_THROWS_AS(read_expansion(leading_zero), InputError);
  std::stringstream not_admissible("period=2\n12\n");
  CHECK_THROWS_AS(BetaSystem(read_expansion(not_admissible)), InputError);
}
