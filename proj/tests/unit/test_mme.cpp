#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "obstruct/beta.hpp"
#include "obstruct/decomposition.hpp"
#include "obstruct/errors.hpp"
#include "obstruct/mme.hpp"
#include "oracles.hpp"

using namespace obstruct;

namespace {

const double kPhi = (1 + std::sqrt(5.0)) / 2;

std::shared_ptr<const BetaSystem> golden() { return make_beta_shift(parse_quadratic("phi")); }
std::shared_ptr<const BetaSystem> full2() { return make_beta_shift(parse_quadratic("2")); }

// Parry chain of the golden mean: P(0,0) = 1/phi, P(0,1) = 1/phi^2, P(1,0) = 1.
double golden_parry(const Word& u) {
  if (u.empty()) return 1;
  double pi0 = kPhi * kPhi / (kPhi * kPhi + 1);
  double m = u[0] == 0 ? pi0 : 1 - pi0;
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (u[i - 1] == 1 && u[i] == 1) return 0;
    m *= u[i - 1] == 1 ? 1 : (u[i] == 0 ? 1 / kPhi : 1 / (kPhi * kPhi));
  }
  return m;
}

// mu_n([u]) for the points v 0^inf, v uniform in L_n, by direct enumeration.
Rational brute_empirical(const Language& lang, std::size_t n, const Word& u) {
  auto words = lang.enumerate(n);
  BigInt hits = 0;
  for (const Word& v : words) {
    Word x = v;
    x.resize(n + u.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::equal(u.begin(), u.end(), x.begin() + static_cast<std::ptrdiff_t>(i))) hits += 1;
    }
  }
  return Rational(hits, BigInt(n) * BigInt(words.size()));
}

class GraphLanguage : public Language {
 public:
  explicit GraphLanguage(Presentation p) : p_(std::move(p)) {}
  std::size_t alphabet_size() const override { return p_.alphabet_size(); }
  const Presentation& presentation() const override { return p_; }
  std::string describe() const override { return "graph"; }

 private:
  Presentation p_;
};

}  // namespace

TEST_CASE("golden-mean Parry measure matches the closed-form Markov chain") {
  auto m = parry_measure(*golden(), 10);
  CHECK(m.provenance() == MeasureProvenance::parry_exact);
  CHECK(m.is_exact());
  CHECK(*m.exact_mass(Word{1}) == parse_quadratic("1/2-sqrt(5)/10"));
  for (std::size_t n = 0; n <= 10; ++n) {
    for (const Word& u : oracle::all_words(2, n)) CHECK(m.mass(u) == doctest::Approx(golden_parry(u)).epsilon(1e-12));
  }
  auto v = validate_measure(m);
  CHECK(v.ok(true));
  CHECK(10 * measure_entropy(m, 10) - 9 * measure_entropy(m, 9) == doctest::Approx(std::log(kPhi)).epsilon(1e-10));
  CHECK_THROWS_AS(m.mass(Word(11, 0)), InputError);
}

TEST_CASE("full-shift Parry measure is uniform, exactly") {
  auto m = parry_measure(*full2(), 8);
  for (std::size_t n = 0; n <= 8; ++n) {
    for (const Word& u : oracle::all_words(2, n)) {
      CHECK(*m.exact_mass(u) == QuadraticNumber(Rational(1, BigInt(1) << n)));
    }
  }
}

TEST_CASE("other quadratic betas give exact invariant measures") {
  for (const char* b : {"phi*phi", "1+sqrt(2)", "1+sqrt(3)"}) {
    auto m = parry_measure(*make_beta_shift(parse_quadratic(b)), 6);
    CHECK_MESSAGE(m.is_exact(), b);
    CHECK_MESSAGE(validate_measure(m).ok(true), b);
  }
}

TEST_CASE("truncated beta: parry-truncated provenance with a small defect") {
  auto m = parry_measure(*make_beta_shift(parse_quadratic("3/2")), 6);
  CHECK(m.provenance() == MeasureProvenance::parry_truncated);
  CHECK(m.error_bound() < 1e-6);
  CHECK(validate_measure(m, 1e-6).ok(true));
}

TEST_CASE("periodic presentations are rejected") {
  Presentation cycle(2, 2);
  cycle.set_edge(0, 0, 1);
  cycle.set_edge(1, 1, 0);
  GraphLanguage lang(cycle);
  CHECK_THROWS(parry_measure(lang, 3));
}

TEST_CASE("empirical measures match direct enumeration exactly") {
  for (auto sys : {golden(), full2(), make_beta_shift(parse_quadratic("1+sqrt(2)"))}) {
    for (std::size_t n : {3, 7, 11}) {
      auto m = empirical_mme(*sys, n, 3);
      CHECK(m.sample_length() == n);
      for (std::size_t len = 0; len <= 3; ++len) {
        for (const Word& u : oracle::all_words(sys->alphabet_size(), len)) {
          Rational expected = brute_empirical(*sys, n, u);
          auto got = m.exact_mass(u);
          REQUIRE(got.has_value());
          CHECK(*got == QuadraticNumber(expected));
        }
      }
      CHECK(validate_measure(m).ok(false));
    }
  }
  auto full = empirical_mme(*full2(), 50, 1);
  CHECK(*full.exact_mass(Word{1}) == QuadraticNumber(Rational(1, 2)));
  CHECK_THROWS_AS(empirical_mme(*golden(), 2, 3), InputError);
}

TEST_CASE("Gibbs constants") {
  auto f = full2();
  auto mf = parry_measure(*f, 12);
  auto rf = gibbs_check(mf, GrowthBase::of(*f), good_collection(beta_decomposition(f)), 1, 12,
                        ScaleIndex{0});
  CHECK(rf.pass());
  REQUIRE(rf.constant_exact.has_value());
  CHECK(*rf.constant_exact == QuadraticNumber(1));

  auto g = golden();
  auto mg = parry_measure(*g, 14);
  auto rg = gibbs_check(mg, GrowthBase::of(*g), good_collection(beta_decomposition(g)), 1, 12,
                        ScaleIndex{2});
  CHECK(rg.pass());
  // Oracle: min over u in L_{n+2} with n-prefix in the good core of mu[u] phi^n.
  double expected = 1e9;
  for (std::size_t n = 1; n <= 12; ++n) {
    for (const Word& u : g->enumerate(n + 2)) {
      Word v(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(n));
      if (oracle::longest_w_suffix(v, oracle::periodic({}, {1, 0})) != 0) continue;
      expected = std::min(expected, golden_parry(u) * std::pow(kPhi, n));
    }
  }
  CHECK(rg.constant == doctest::Approx(expected).epsilon(1e-10));
  CHECK(gibbs_proof_constant(2.0, 1, 0.5) == doctest::Approx(std::exp(-1.0) / 8));
  CHECK(mixing_proof_constant(2.0, 1, 0.5) == doctest::Approx(std::exp(-2.0) / 16));
}

TEST_CASE("joint masses and the mixing constant") {
  auto f = full2();
  auto mf = parry_measure(*f, 12);
  std::vector<std::pair<Word, Word>> pairs;
  for (std::size_t a = 1; a <= 3; ++a) {
    for (std::size_t b = 1; b <= 3; ++b) {
      for (const Word& u : oracle::all_words(2, a)) {
        for (const Word& v : oracle::all_words(2, b)) {
          pairs.emplace_back(u, v);
          for (std::size_t q = 0; q <= 4; ++q) {
            CHECK(*joint_mass_exact(mf, u, a + q, v) == QuadraticNumber(Rational(1, BigInt(1) << (a + b))));
          }
        }
      }
    }
  }
  auto rep = mixing_check(mf, GrowthBase::of(*f), pairs, 0, 4, 0);
  CHECK(rep.pass());
  CHECK(*rep.constant_exact == QuadraticNumber(1));

  auto g = golden();
  auto mg = parry_measure(*g, 12);
  Word zero{0};
  for (std::size_t m = 1; m <= 10; ++m) {
    double expected = 0;
    for (const Word& u : g->enumerate(m + 1)) {
      if (u.front() == 0 && u.back() == 0) expected += golden_parry(u);
    }
    CHECK(joint_mass(mg, zero, m, zero) == doctest::Approx(expected).epsilon(1e-12));
  }
  auto probe = mixing_liminf_probe(mg, {zero}, {zero}, 1, 10);
  REQUIRE(probe.size() == 10);
  for (std::size_t i = 1; i < probe.size(); ++i) CHECK(probe[i].running_inf <= probe[i - 1].running_inf);
  CHECK_THROWS_AS(mixing_liminf_probe(mg, {Word{0}, Word{0, 1}}, {zero}, 1, 3), InputError);
  CHECK_THROWS_AS(joint_mass(mg, zero, 12, zero), InputError);
}

TEST_CASE("gap precondition entries do not enter K'") {
  auto g = golden();
  auto mg = parry_measure(*g, 10);
  auto rep = mixing_check(mg, GrowthBase::of(*g), {{Word{1}, Word{1}}}, 0, 3, 1);
  // q = 0 puts "11" inside the word: zero mass, but q < 2 tau.
  CHECK(rep.expected_failures == 1);
  CHECK(rep.pass());
}

TEST_CASE("positive-mass counting") {
  auto mf = parry_measure(*full2(), 10);
  CHECK(positive_mass_count(mf, Rational(1, 2), 10) == 512);
  CHECK(positive_mass_count(mf, Rational(1, 4), 10) == 256);
  auto mg = parry_measure(*golden(), 12);
  for (Rational gamma : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
    for (std::size_t n = 1; n <= 12; ++n) {
      std::vector<double> masses;
      for (const Word& u : golden()->enumerate(n)) masses.push_back(golden_parry(u));
      std::sort(masses.rbegin(), masses.rend());
      double total = 0;
      std::size_t count = 0;
      while (total < to_double(gamma) - 1e-12) total += masses[count++];
      CHECK(positive_mass_count(mg, gamma, n) == count);
    }
  }
  CHECK_THROWS_AS(positive_mass_count(mf, Rational(0), 3), InputError);
}

TEST_CASE("counting suite: golden mean and full shift") {
  auto g = golden();
  auto rg = counting_suite(*beta_decomposition(g), GrowthBase::of(*g), 24, ScaleIndex{0}, 0);
  CHECK(rg.pass());
  CHECK(std::abs(rg.c1 - kPhi * kPhi / std::sqrt(5.0)) < 1e-6);
  CHECK(rg.c2 == doctest::Approx(std::log(rg.c1) + std::log(2.0)));
  for (const auto& c : rg.checks) CHECK_MESSAGE(c.pass, c.id);

  auto f = full2();
  auto rf = counting_suite(*beta_decomposition(f), GrowthBase::of(*f), 24, ScaleIndex{0}, 0);
  CHECK(rf.pass());
  CHECK(rf.c1 == 1);
  for (const auto& t : rf.tails) {
    REQUIRE(t.exact.has_value());
    CHECK(*t.exact == QuadraticNumber(Rational(2, BigInt(1) << t.level)));
  }

  auto rj = counting_suite(*beta_decomposition(g), GrowthBase::of(*g), 20, ScaleIndex{2}, 3);
  CHECK(rj.pass());
  CHECK_THROWS_AS(counting_suite(*beta_decomposition(g), GrowthBase::of(*g), 4, ScaleIndex{0}, 0),
                  InputError);
}

TEST_CASE("measure table bookkeeping") {
  CylinderMeasure m(2, 2, MeasureProvenance::empirical);
  m.set(Word{}, Mass{QuadraticNumber(1), 1.0});
  CHECK(m.is_exact());
  m.set(Word{0}, Mass{std::nullopt, 0.5});
  CHECK_FALSE(m.is_exact());
  m.set(Word{0}, Mass{QuadraticNumber(Rational(1, 2)), 0.5});
  CHECK(m.is_exact());
  CHECK_THROWS_AS(m.set(Word{0, 0, 0}, Mass{}), InputError);
  CHECK_THROWS_AS(m.set(Word{2}, Mass{}), InputError);
  CHECK(parse_provenance(to_string(MeasureProvenance::parry_truncated)) ==
        MeasureProvenance::parry_truncated);
}
