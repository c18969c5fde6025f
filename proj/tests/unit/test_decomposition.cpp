#include <doctest.h>

#include <cmath>

#include "obstruct/beta.hpp"
#include "obstruct/decomposition.hpp"
#include "obstruct/errors.hpp"
#include "obstruct/symbolic.hpp"
#include "oracles.hpp"

using namespace obstruct;

namespace {

std::shared_ptr<const BetaSystem> golden() { return make_beta_shift(parse_quadratic("phi")); }
std::shared_ptr<const BetaSystem> full2() { return make_beta_shift(parse_quadratic("2")); }

const auto kGoldenW = oracle::periodic({}, {1, 0});

bool in_golden(const Word& v) { return oracle::beta_member(v, kGoldenW); }

Word slice(const Word& v, std::size_t from, std::size_t len) {
  return Word(v.begin() + static_cast<std::ptrdiff_t>(from),
              v.begin() + static_cast<std::ptrdiff_t>(from + len));
}

}  // namespace

TEST_CASE("separated counts of the whole space are |L_{n+j}|") {
  auto whole = whole_space(golden());
  for (std::size_t j = 0; j <= 3; ++j) {
    for (std::size_t n = 1; n <= 30; ++n) {
      CHECK(count_separated(whole, n, ScaleIndex{j}).count == oracle::fibonacci(n + j + 2));
    }
  }
}

TEST_CASE("enumerated collections count distinct Bowen cylinders") {
  auto sys = golden();
  OrbitCollection ends_zero("ends-in-0", sys, [](WordView v) { return !v.empty() && v.back() == 0; });
  for (std::size_t j = 0; j <= 2; ++j) {
    for (std::size_t n = 1; n <= 10; ++n) {
      std::size_t expected = oracle::count_if_words(2, n + j, [&](const Word& u) {
        return in_golden(u) && u[n - 1] == 0;
      });
      CHECK(count_separated(ends_zero, n, ScaleIndex{j}).count == expected);
    }
  }
}

TEST_CASE("entropy estimates") {
  auto g = upper_entropy(whole_space(golden()), ScaleIndex{0}, 40);
  CHECK(std::abs(g.rate - std::log((1 + std::sqrt(5.0)) / 2)) < 0.02);
  auto f = upper_entropy(whole_space(full2()), ScaleIndex{0}, 40);
  CHECK(f.rate == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  for (std::size_t s = 2; s <= 40; ++s) CHECK(tail_supremum(g, s) <= tail_supremum(g, s - 1) + 1e-15);
  CHECK_THROWS_AS(upper_entropy(whole_space(golden()), ScaleIndex{0}, 5), InputError);

  OrbitCollection even("even-times", golden(), [](WordView v) { return v.size() % 2 == 0; });
  auto lo = lower_entropy(even, ScaleIndex{0}, 16);
  CHECK(lo.rate == 0);
  CHECK_FALSE(lo.empty_lengths.empty());
  auto up = upper_entropy(even, ScaleIndex{0}, 16);
  CHECK(up.rate > 0.3);
}

TEST_CASE("beta decomposition: split examples") {
  auto g = beta_decomposition(golden());
  CHECK(g->split(Word{0, 0, 1, 0, 1}) == Split{0, 2, 3});
  CHECK(g->split(Word{1, 0}) == Split{0, 0, 2});
  CHECK(g->split(Word{0, 0}) == Split{0, 2, 0});
  CHECK(g->split(Word{}) == Split{0, 0, 0});
  CHECK_THROWS_AS(g->split(Word{1, 1}), InputError);
  auto f = beta_decomposition(full2());
  CHECK(f->split(Word{0, 1, 1, 1}) == Split{0, 1, 3});
}

TEST_CASE("beta decomposition: totality, core correctness and idempotence, n <= 14") {
  auto sys = golden();
  auto g = beta_decomposition(sys);
  for (std::size_t n = 0; n <= 14; ++n) {
    for (const Word& v : sys->enumerate(n)) {
      Split s = g->split(v);
      REQUIRE(s.p + s.g + s.s == n);
      CHECK(s.p == 0);
      CHECK(s.s == oracle::longest_w_suffix(v, kGoldenW));
      Word core = slice(v, s.p, s.g);
      Word suffix = slice(v, s.p + s.g, s.s);
      CHECK(g->member_P(slice(v, 0, s.p)));
      CHECK(g->member_G(core));
      CHECK(oracle::longest_w_suffix(core, kGoldenW) == 0);
      CHECK(g->member_S(suffix));
      CHECK(g->split(core) == Split{0, core.size(), 0});
      if (!suffix.empty()) CHECK(g->split(suffix) == Split{0, 0, suffix.size()});
      for (std::size_t m = 0; m <= n; ++m) {
        CHECK(g->member_GM(v, m) == (s.p <= m && s.s <= m));
        if (g->member_GM(v, m)) CHECK(g->member_GM(v, m + 1));
      }
      CHECK(g->member_GM(v, n));
    }
  }
}

TEST_CASE("property (1): v 0^k reaches the good core with minimal k") {
  auto sys = golden();
  for (std::size_t n = 0; n <= 10; ++n) {
    for (const Word& v : sys->enumerate(n)) {
      std::optional<std::size_t> expected;
      Word x = v;
      for (std::size_t k = 0; k <= 4 && !expected; ++k) {
        if (in_golden(x) && oracle::longest_w_suffix(x, kGoldenW) == 0) expected = k;
        x.push_back(0);
      }
      CHECK(minimal_zero_padding(*sys, v, 4) == expected);
    }
  }
}

TEST_CASE("property (2): uv in L for u in the good core, |u|+|v| <= 14") {
  auto sys = golden();
  auto g = beta_decomposition(sys);
  std::size_t checked = 0;
  for (std::size_t a = 0; a <= 14; ++a) {
    for (const Word& u : sys->enumerate(a)) {
      if (!g->member_G(u)) continue;
      for (std::size_t b = 0; a + b <= 14; ++b) {
        for (const Word& v : sys->enumerate(b)) {
          ++checked;
          REQUIRE(in_golden(concat(u, v)));
        }
      }
    }
  }
  CHECK(checked > 10000);
}

TEST_CASE("class counts match enumeration at depth j") {
  for (const char* b : {"phi", "1+sqrt(2)", "3/2"}) {
    auto sys = make_beta_shift(parse_quadratic(b));
    auto scheme = beta_decomposition(sys);
    DegenerateDecomposition degenerate(sys);
    for (std::size_t j = 0; j <= 2; ++j) {
      for (std::size_t n = 0; n <= 8; ++n) {
        std::size_t good = 0, obstruction = 0, gm1 = 0;
        std::size_t d_good = 0, d_gm2 = 0, d_obs = 0;
        for (const Word& u : sys->enumerate(n + j)) {
          Word v = slice(u, 0, n);
          Split s = scheme->split(v);
          good += s.s == 0 ? 1 : 0;
          obstruction += (s.g == 0) ? 1 : 0;
          gm1 += s.s <= 1 ? 1 : 0;
          d_good += n == 0 ? 1 : 0;
          d_gm2 += n <= 2 ? 1 : 0;
          d_obs += 1;
        }
        ScaleIndex depth{j};
        CHECK(scheme->count_good(n, depth) == good);
        CHECK(scheme->count_obstruction(n, depth) == obstruction);
        CHECK(scheme->count_filtration(1, n, depth) == gm1);
        CHECK(degenerate.count_good(n, depth) == d_good);
        CHECK(degenerate.count_filtration(2, n, depth) == d_gm2);
        CHECK(degenerate.count_obstruction(n, depth) == d_obs);
      }
    }
  }
}

TEST_CASE("filtration coverage") {
  auto f = beta_decomposition(full2());
  CHECK(filtration_coverage(*f, 3, 10) == Rational(15, 16));
  for (std::size_t n = 1; n <= 12; ++n) CHECK(filtration_coverage(*f, n, n) == 1);

  auto sys = golden();
  auto g = beta_decomposition(sys);
  std::size_t in_gm = 0;
  auto words = sys->enumerate(12);
  for (const Word& v : words) in_gm += g->member_GM(v, 2) ? 1 : 0;
  CHECK(filtration_coverage(*g, 2, 12) == Rational(in_gm, words.size()));
  for (std::size_t n = 1; n <= 20; ++n) {
    for (std::size_t m = 0; m < n; ++m) {
      CHECK(filtration_coverage(*g, m, n) <= filtration_coverage(*g, m + 1, n));
    }
    CHECK(filtration_coverage(*g, n, n) == 1);
  }
}

TEST_CASE("specification checks on the golden mean") {
  auto sys = golden();
  auto scheme = beta_decomposition(sys);
  SamplingPolicy policy;
  auto good = good_collection(scheme);
  auto whole = whole_space(sys);

  auto r0 = check_specification(good, ScaleIndex{0}, 0, policy);
  CHECK(r0.pass);
  CHECK(r0.exhaustive);
  for (const auto& w : r0.witnesses) {
    CHECK(in_golden(w.glued));
    Word expected;
    for (std::size_t i = 0; i < w.tuple.size(); ++i) {
      if (i > 0) expected = concat(expected, w.gaps[i - 1]);
      expected = concat(expected, w.tuple[i]);
    }
    CHECK(w.glued == expected);
  }

  auto fail = check_specification(whole, ScaleIndex{0}, 0, policy);
  CHECK_FALSE(fail.pass);
  REQUIRE(fail.failure.has_value());
  Word joined;
  for (const Word& w : fail.failure->tuple) joined = concat(joined, w);
  CHECK_FALSE(in_golden(joined));

  CHECK(check_specification(whole, ScaleIndex{0}, 1, policy).pass);
  CHECK(min_gluing_time(good, ScaleIndex{0}, 3, policy).tau == std::size_t{0});
  CHECK(min_gluing_time(whole, ScaleIndex{0}, 3, policy).tau == std::size_t{1});
  CHECK(min_gluing_time(whole_space(full2()), ScaleIndex{0}, 3, policy).tau == std::size_t{0});

  CHECK(glue(*sys, {Word{0, 1}, Word{1, 0}}, {2, 2}, 0) == std::nullopt);
  CHECK(glue(*sys, {Word{0, 1}, Word{1, 0}}, {2, 2}, 1) == Word{0, 1, 0, 1, 0});
}

TEST_CASE("specification at depth j glues Bowen cylinders") {
  auto sys = golden();
  auto good = good_collection(beta_decomposition(sys));
  SamplingPolicy policy;
  policy.max_length = 4;
  // The two extension symbols past the core are arbitrary, so the language gap
  // of 1 is paid after them.
  CHECK_FALSE(check_specification(good, ScaleIndex{2}, 2, policy).pass);
  auto rep = check_specification(good, ScaleIndex{2}, 3, policy);
  CHECK(rep.pass);
  CHECK(min_gluing_time(good, ScaleIndex{2}, 5, policy).tau == std::size_t{3});
  for (const auto& w : rep.witnesses) CHECK(in_golden(w.glued));
}

TEST_CASE("sampled runs are flagged non-exhaustive") {
  auto whole = whole_space(make_beta_shift(parse_quadratic("1+sqrt(2)")));
  SamplingPolicy policy;
  policy.tuple_budget = 500;
  auto rep = check_specification(whole, ScaleIndex{0}, 1, policy);
  CHECK_FALSE(rep.exhaustive);
  CHECK(rep.tuples_tested == 500);
  auto again = check_specification(whole, ScaleIndex{0}, 1, policy);
  CHECK(again.sample == rep.sample);
  auto t = min_gluing_time(whole, ScaleIndex{0}, 2, policy);
  CHECK_FALSE(t.tau.has_value());
  CHECK(t.inconclusive);
}

TEST_CASE("counting bounds with the certified gap") {
  auto sys = golden();
  auto scheme = beta_decomposition(sys);
  const std::size_t tau = 0;
  std::vector<BigInt> core(31);
  for (std::size_t n = 0; n <= 30; ++n) core[n] = scheme->count_good(n, ScaleIndex{0});
  for (std::size_t a = 1; a <= 16; ++a) {
    for (std::size_t b = 1; a + b <= 18; ++b) {
      CHECK(sys->count(a + b + tau) >= core[a] * core[b]);
      for (std::size_t c = 1; a + b + c <= 18; ++c) {
        CHECK(sys->count(a + b + c + 2 * tau) >= core[a] * core[b] * core[c]);
      }
    }
  }
  PrecisionGuard guard(256);
  HighFloat beta = sys->beta_value();
  for (std::size_t n = 1; n <= 30; ++n) {
    CHECK(HighFloat(core[n]) <= boost::multiprecision::pow(beta, n + tau));
  }
}

TEST_CASE("obstruction entropy bound") {
  SamplingPolicy policy;
  auto good = obstruction_entropy_upper(beta_decomposition(golden()), ScaleIndex{0}, 24, {0, 1, 2},
                                        4, policy);
  CHECK(good.estimate.rate == 0);
  CHECK(good.gluing_certified);
  CHECK(good.hypotheses_met());
  auto full = obstruction_entropy_upper(beta_decomposition(full2()), ScaleIndex{0}, 24, {0, 1}, 4,
                                        policy);
  CHECK(full.estimate.rate == 0);

  auto degenerate = std::make_shared<const DegenerateDecomposition>(golden());
  auto bad = obstruction_entropy_upper(degenerate, ScaleIndex{0}, 24, {0, 1, 2}, 4, policy);
  CHECK(std::abs(bad.estimate.rate - std::log((1 + std::sqrt(5.0)) / 2)) < 0.02);
  CHECK(bad.gluing_certified);
  CHECK_FALSE(bad.hypotheses_met());
}
