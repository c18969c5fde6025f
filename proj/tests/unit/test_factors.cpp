#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "obstruct/beta.hpp"
#include "obstruct/decomposition.hpp"
#include "obstruct/errors.hpp"
#include "obstruct/factors.hpp"
#include "oracles.hpp"

using namespace obstruct;

namespace {

std::shared_ptr<const BetaSystem> golden() { return make_beta_shift(parse_quadratic("phi")); }
std::shared_ptr<const BetaSystem> full2() { return make_beta_shift(parse_quadratic("2")); }
std::shared_ptr<const BetaSystem> phi2() { return make_beta_shift(parse_quadratic("phi*phi")); }

BlockCode merge12() { return BlockCode::one_block("merge12", 3, {0, 1, 1}); }

// Images of L_{n+k-1} computed without the factor automaton.
std::set<Word> brute_image(const BetaSystem& sys, const BlockCode& code, std::size_t n) {
  std::set<Word> out;
  for (const Word& x : oracle::all_words(sys.alphabet_size(), n + code.window() - 1)) {
    if (!oracle::beta_member(x, [&](std::size_t i) { return sys.expansion().digit(i); })) continue;
    Word y;
    for (std::size_t i = 0; i + code.window() <= x.size(); ++i) {
      y.push_back(code.rule().at(Word(x.begin() + static_cast<std::ptrdiff_t>(i),
                                      x.begin() + static_cast<std::ptrdiff_t>(i + code.window()))));
    }
    out.insert(y);
  }
  return out;
}

struct Case {
  std::shared_ptr<const BetaSystem> sys;
  BlockCode code;
};

std::vector<Case> cases() {
  return {{golden(), BlockCode::identity(2)},
          {full2(), BlockCode::xor2()},
          {golden(), BlockCode::merge_to_one(2)},
          {phi2(), merge12()},
          {golden(), BlockCode::xor2()}};
}

}  // namespace

TEST_CASE("block codes: builtins, application and text format") {
  BlockCode x = BlockCode::xor2();
  CHECK(x.window() == 2);
  CHECK(apply_code(x, Word{1, 1, 0, 1}) == Word{0, 1, 1});
  CHECK(apply_code(BlockCode::merge_to_one(3), Word{2, 0, 1}) == Word{0, 0, 0});
  CHECK_THROWS_AS(apply_code(x, Word{1}), InputError);

  std::stringstream text(x.to_text());
  BlockCode back = BlockCode::parse(text, 2, "xor");
  CHECK(back.rule() == x.rule());
  CHECK(back.window() == 2);

  std::stringstream partial("# only one block\n0 -> 0\n");
  BlockCode p = BlockCode::parse(partial, 2, "partial");
  CHECK_THROWS_AS(p(Word{1}), InputError);
  CHECK_THROWS_AS(p.require_total(*golden()), InputError);
  std::stringstream mixed("0 -> 0\n10 -> 1\n");
  CHECK_THROWS_AS(BlockCode::parse(mixed, 2), InputError);
  std::stringstream garbage("0 => 1\n");
  CHECK_THROWS_AS(BlockCode::parse(garbage, 2), InputError);
}

TEST_CASE("factor languages") {
  CHECK(factor_language(*full2(), BlockCode::xor2(), 3).size() == 8);
  for (std::size_t n = 1; n <= 10; ++n) {
    CHECK(factor_language(*golden(), BlockCode::merge_to_one(2), n).size() == 1);
    CHECK(factor_language(*full2(), BlockCode::xor2(), n).size() == (std::size_t{1} << n));
  }
  CHECK(factor_language(*golden(), BlockCode::identity(2), 3).size() == 5);
}

TEST_CASE("factor languages match brute force and are closed under factors") {
  for (const auto& c : cases()) {
    auto factor = std::make_shared<const FactorSystem>(c.sys, c.code);
    for (std::size_t n = 1; n <= 8; ++n) {
      auto image = factor_language(*c.sys, c.code, n);
      auto brute = brute_image(*c.sys, c.code, n);
      CHECK(std::set<Word>(image.begin(), image.end()) == brute);
      CHECK(factor->count(n) == brute.size());
      for (const Word& y : brute) CHECK(factor->contains(y));
      auto next = factor_language(*c.sys, c.code, n + 1);
      std::set<Word> prefixes, suffixes;
      for (const Word& y : next) {
        prefixes.insert(Word(y.begin(), y.end() - 1));
        suffixes.insert(Word(y.begin() + 1, y.end()));
      }
      CHECK(prefixes == brute);
      CHECK(suffixes == brute);
    }
  }
}

TEST_CASE("induced decomposition: identity reproduces the beta decomposition") {
  auto sys = golden();
  auto factor = std::make_shared<const FactorSystem>(sys, BlockCode::identity(2));
  InducedDecomposition induced(sys, factor);
  auto base = beta_decomposition(sys);
  for (std::size_t n = 0; n <= 10; ++n) {
    for (const Word& v : sys->enumerate(n)) {
      CHECK(induced.split(v) == base->split(v));
      CHECK(induced.member_G(v) == base->member_G(v));
      CHECK(induced.member_S(v) == base->member_S(v));
    }
  }
  for (std::size_t n = 1; n <= 20; ++n) CHECK(induced.count_suffix(n) == 1);
}

TEST_CASE("induced decomposition: totality on image words, n <= 10") {
  for (const auto& c : cases()) {
    auto factor = std::make_shared<const FactorSystem>(c.sys, c.code);
    InducedDecomposition induced(c.sys, factor);
    for (std::size_t n = 0; n <= 8; ++n) {
      for (const Word& y : factor->enumerate(n)) {
        Split s = induced.split(y);
        REQUIRE(s.p + s.g + s.s == n);
        CHECK(s.p == 0);
        Word core(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(s.g));
        Word suffix(y.begin() + static_cast<std::ptrdiff_t>(s.g), y.end());
        CHECK(induced.member_G(core));
        if (!suffix.empty()) CHECK(induced.member_S(suffix));
      }
    }
  }
}

TEST_CASE("induced decomposition: images of good-core words are good, 1-block codes") {
  auto sys = golden();
  auto base = beta_decomposition(sys);
  for (auto code : {BlockCode::identity(2), BlockCode::merge_to_one(2),
                    BlockCode::one_block("swap", 2, {1, 0})}) {
    auto factor = std::make_shared<const FactorSystem>(sys, code);
    InducedDecomposition induced(sys, factor);
    for (std::size_t n = 1; n <= 10; ++n) {
      for (const Word& v : sys->enumerate(n)) {
        if (base->member_G(v)) CHECK(induced.member_G(apply_code(code, v)));
      }
    }
  }
}

TEST_CASE("induced suffix counts: distinct images of w-prefix extensions") {
  for (const auto& c : cases()) {
    auto factor = std::make_shared<const FactorSystem>(c.sys, c.code);
    InducedDecomposition induced(c.sys, factor);
    const std::size_t k = c.code.window();
    for (std::size_t n = 1; n <= 10; ++n) {
      Word w = c.sys->w_prefix(n);
      std::set<Word> images;
      for (const Word& t : oracle::all_words(c.sys->alphabet_size(), k - 1)) {
        Word x = concat(w, t);
        if (c.sys->contains(x)) images.insert(apply_code(c.code, x));
      }
      CHECK(induced.count_suffix(n) == images.size());
      CHECK(images.size() <= c.sys->count(k - 1));
    }
  }
  auto f2 = full2();
  auto x = std::make_shared<const FactorSystem>(f2, BlockCode::xor2());
  InducedDecomposition xi(f2, x);
  CHECK(xi.count_suffix(6) == 2);
  CHECK(xi.member_S(Word{0, 0, 0, 0, 0, 0}));
  CHECK(xi.member_S(Word{0, 0, 0, 0, 0, 1}));
}

TEST_CASE("induced suffix entropy is zero") {
  for (const auto& c : cases()) {
    auto factor = std::make_shared<const FactorSystem>(c.sys, c.code);
    auto induced = std::make_shared<const InducedDecomposition>(c.sys, factor);
    CHECK(factor_suffix_entropy(induced, 24).rate < 1e-9);
  }
}

TEST_CASE("induced specification: gluing time within the source time at depth k - 1") {
  SamplingPolicy policy;
  policy.max_length = 5;
  for (const auto& c : cases()) {
    auto factor = std::make_shared<const FactorSystem>(c.sys, c.code);
    auto induced = std::make_shared<const InducedDecomposition>(c.sys, factor);
    auto base = beta_decomposition(c.sys);
    for (std::size_t m = 0; m <= 1; ++m) {
      const std::size_t k = c.code.window();
      auto source_tau =
          min_gluing_time(filtration_collection(base, m), ScaleIndex{k - 1}, 6, policy).tau;
      REQUIRE(source_tau.has_value());
      auto tau = min_gluing_time(filtration_collection(induced, m), ScaleIndex{0}, 6, policy);
      REQUIRE(tau.tau.has_value());
      CHECK(*tau.tau <= *source_tau);
    }
  }
}

TEST_CASE("induced specification: xor on the golden mean exceeds k - 1 + tau_M at depth 0") {
  SamplingPolicy policy;
  policy.max_length = 5;
  auto g = golden();
  auto factor = std::make_shared<const FactorSystem>(g, BlockCode::xor2());
  auto induced = std::make_shared<const InducedDecomposition>(g, factor);
  auto base = beta_decomposition(g);
  auto source = min_gluing_time(filtration_collection(base, 0), ScaleIndex{0}, 4, policy);
  auto image = min_gluing_time(filtration_collection(induced, 0), ScaleIndex{0}, 6, policy);
  CHECK(source.tau == std::size_t{0});
  CHECK(image.tau == std::size_t{2});
  // 01 has the preimage 001 and 100 forces 1000: 001 a 1000 contains 11.
  CHECK(glue(*factor, {Word{0, 1}, Word{1, 0, 0}}, {2, 3}, 1) == std::nullopt);
}

TEST_CASE("factor entropy: separated good-core pairs") {
  auto id = factor_entropy_positive(*golden(), BlockCode::identity(2), ScaleIndex{0});
  CHECK(id.verdict == FactorVerdict::positive_entropy);
  auto base = beta_decomposition(golden());
  CHECK(base->member_G(id.v1));
  CHECK(base->member_G(id.v2));
  CHECK(id.v1.size() == id.n);
  CHECK(id.rate_bound == doctest::Approx(std::log(2.0) / id.n));

  auto x = factor_entropy_positive(*full2(), BlockCode::xor2(), ScaleIndex{0});
  CHECK(x.verdict == FactorVerdict::positive_entropy);
  CHECK(x.n == 2);
  CHECK(x.v1 == Word{0, 0});
  CHECK(x.v2 == Word{1, 0});
  CHECK(x.rate_bound >= std::log(2.0) / 2 - 1e-15);

  CHECK(factor_entropy_positive(*golden(), BlockCode::merge_to_one(2), ScaleIndex{0}).verdict ==
        FactorVerdict::single_point);
  CHECK(factor_entropy_positive(*full2(), BlockCode::xor2(), ScaleIndex{0}, 16, 3, 1).verdict ==
        FactorVerdict::inconclusive);
}

TEST_CASE("pair automaton path counts match double enumeration, n <= 8") {
  for (const auto& c : cases()) {
    PairAutomaton pairs(*c.sys, c.code);
    for (std::size_t n = 1; n <= 8; ++n) {
      auto words = c.sys->enumerate(n);
      BigInt brute = 0;
      for (const Word& a : words) {
        for (const Word& b : words) {
          bool same = n < c.code.window() || apply_code(c.code, a) == apply_code(c.code, b);
          brute += same ? 1 : 0;
        }
      }
      CHECK(pairs.count_pairs(n) == brute);
    }
    CHECK(pairs.to_csv().rfind("from,", 0) == 0);
  }
}

TEST_CASE("non-expansive growth") {
  auto id = nonexpansive_growth(*golden(), BlockCode::identity(2), ScaleIndex{0});
  CHECK(id.positively_expansive);
  CHECK(std::isinf(id.growth));

  auto merge = nonexpansive_growth(*golden(), BlockCode::merge_to_one(2), ScaleIndex{0});
  CHECK_FALSE(merge.positively_expansive);
  CHECK(merge.growth == doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-9));

  auto x = nonexpansive_growth(*full2(), BlockCode::xor2(), ScaleIndex{0});
  CHECK_FALSE(x.positively_expansive);
  CHECK(x.growth == doctest::Approx(std::log(2.0)).epsilon(1e-9));

  // Lowering a 2 to 1 keeps a point admissible, so every point carrying a 2
  // has a partner: the growth reaches log beta.
  auto sys = phi2();
  auto m12 = nonexpansive_growth(*sys, merge12(), ScaleIndex{0});
  CHECK_FALSE(m12.positively_expansive);
  CHECK(m12.growth > 0);
  CHECK(m12.growth <= sys->log_beta() + 1e-9);

  auto deep = nonexpansive_growth(*golden(), BlockCode::identity(2), ScaleIndex{3});
  CHECK(deep.positively_expansive);
}

TEST_CASE("Theorem C instantiation") {
  auto id = theorem_c_check(golden(), BlockCode::identity(2));
  CHECK(id.verdict == "positively expansive; intrinsic-ergodicity hypotheses met");
  CHECK(id.hypotheses_met);
  CHECK(id.uniqueness_confirmed);
  CHECK(id.mme_difference < 0.05);
  CHECK(id.suffix.rate < 1e-9);

  CHECK(theorem_c_check(golden(), BlockCode::merge_to_one(2)).verdict == "single point");
  auto x = theorem_c_check(full2(), BlockCode::xor2());
  CHECK_FALSE(x.hypotheses_met);
  CHECK(x.verdict == "not positively expansive; intrinsic-ergodicity hypotheses not established");
}
