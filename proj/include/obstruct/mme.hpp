#ifndef OBSTRUCT_MME_HPP
#define OBSTRUCT_MME_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "obstruct/beta.hpp"
#include "obstruct/decomposition.hpp"
#include "obstruct/language.hpp"
#include "obstruct/numeric.hpp"
#include "obstruct/symbolic.hpp"
#include "obstruct/word.hpp"

namespace obstruct {

enum class MeasureProvenance { empirical, parry_exact, parry_truncated };

std::string to_string(MeasureProvenance p);
MeasureProvenance parse_provenance(const std::string& text);

struct Mass {
  std::optional<QuadraticNumber> exact;
  double value = 0;
};

// Masses of the cylinders [u] for the admissible words u with |u| <= depth.
// Words missing from the table have mass zero.
class CylinderMeasure {
 public:
  CylinderMeasure(std::size_t alphabet_size, std::size_t depth, MeasureProvenance provenance);

  std::size_t alphabet_size() const { return alphabet_size_; }
  std::size_t depth() const { return depth_; }
  MeasureProvenance provenance() const { return provenance_; }

  // n of mu_n for empirical measures.
  std::size_t sample_length() const { return sample_length_; }
  void set_sample_length(std::size_t n) { sample_length_ = n; }
  // Perron-eigenvalue defect of a truncated presentation; 0 otherwise.
  double error_bound() const { return error_bound_; }
  void set_error_bound(double e) { error_bound_ = e; }

  void set(Word u, Mass m);
  const std::map<Word, Mass>& entries() const { return table_; }
  // Every stored mass carries an exact value.
  bool is_exact() const;

  // Throws InputError when |u| exceeds the depth.
  double mass(WordView u) const;
  // Exact mass when the measure is exact (zero for absent words).
  std::optional<QuadraticNumber> exact_mass(WordView u) const;
  std::vector<std::pair<Word, Mass>> level(std::size_t n) const;

 private:
  void require_depth(std::size_t length) const;

  std::size_t alphabet_size_;
  std::size_t depth_;
  MeasureProvenance provenance_;
  std::size_t sample_length_ = 0;
  double error_bound_ = 0;
  std::map<Word, Mass> table_;
  std::size_t inexact_ = 0;
};

struct MeasureValidation {
  bool normalized = true;
  bool consistent = true;      // mass(u) = sum_a mass(ua)
  bool shift_invariant = true;  // mass(u) = sum_a mass(au)
  double max_error = 0;
  std::string detail;
  bool ok(bool require_invariance) const {
    return normalized && consistent && (!require_invariance || shift_invariant);
  }
};

MeasureValidation validate_measure(const CylinderMeasure& m, double tolerance = 1e-12);

// mu_n of the canonical separated set {v 0^∞ : v in L_n}, tabulated to depth
// d through occurrence counts on the presentation. Exact rational masses.
CylinderMeasure empirical_mme(const Language& lang, std::size_t n, std::size_t depth);

// Reading 0 is possible forever from every state reachable from the start.
bool zero_tail_admissible(const Presentation& pres);

// Stationary Markov measure of the dominant irreducible component. Exact in
// Q(sqrt d) when `lambda` is supplied and is an eigenvalue; otherwise by
// high-precision power iteration. A periodic dominant component is an error.
CylinderMeasure parry_measure(const Language& lang, std::size_t depth,
                              const std::optional<QuadraticNumber>& lambda = std::nullopt);
// Exact for eventually periodic w with quadratic beta; truncated systems get
// provenance parry-truncated and the eigenvalue defect as error bound.
CylinderMeasure parry_measure(const BetaSystem& sys, std::size_t depth);

double measure_entropy(const CylinderMeasure& m, std::size_t n);
double max_cylinder_difference(const CylinderMeasure& a, const CylinderMeasure& b,
                               std::size_t length);

// beta = e^{h(X)}, exact when possible.
struct GrowthBase {
  std::optional<QuadraticNumber> exact;
  HighFloat value;

  static GrowthBase of(const BetaSystem& sys);
  double to_double() const { return value.convert_to<double>(); }
  double log() const;
  // Sign of c - beta^e.
  int compare_power(const BigInt& c, long e) const;
  std::optional<QuadraticNumber> exact_power(long e) const;
  HighFloat power(long e) const;
};

struct GibbsReport {
  std::string tested_class;
  std::size_t depth_offset = 0;
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  double constant = 0;  // K = min mass([u]) beta^n
  std::optional<QuadraticNumber> constant_exact;
  Word argmin;
  std::size_t argmin_n = 0;
  std::vector<std::pair<std::size_t, double>> per_length;  // (n, min ratio at n)
  std::vector<Word> violations;                            // tested cylinders of mass zero
  std::size_t tested = 0;
  std::optional<double> proof_constant;
  std::string note;
  bool pass() const { return violations.empty() && constant > 0; }
  // Minimum of per_length over n in [lo, hi]; 0 when no length is tested.
  double window_minimum(std::size_t lo, std::size_t hi) const;
};

// K = min over (x, n) in D with n in [n_min, n_max] of mu(B_n(x, 2^-j)) beta^n.
GibbsReport gibbs_check(const CylinderMeasure& m, const GrowthBase& base,
                        const OrbitCollection& collection, std::size_t n_min, std::size_t n_max,
                        ScaleIndex depth);

// Proof constants: K_M = (4 C1)^-1 e^{-2 tau h}, K'_M = (8 C1)^-1 e^{-4 tau h}.
double gibbs_proof_constant(double c1, std::size_t tau, double h);
double mixing_proof_constant(double c1, std::size_t tau, double h);

// mu([u] ∩ σ^{-m}[v]) by summing the masses of the admissible words of length
// max(|u|, m + |v|) that carry u at 0 and v at m.
double joint_mass(const CylinderMeasure& m, const Word& u, std::size_t shift, const Word& v);
std::optional<QuadraticNumber> joint_mass_exact(const CylinderMeasure& m, const Word& u,
                                                std::size_t shift, const Word& v);

struct MixingEntry {
  Word u;
  Word v;
  std::size_t gap = 0;
  double mass = 0;
  double scaled = 0;  // mass * beta^{|u|+|v|}
  bool below_precondition = false;
};

struct MixingReport {
  std::size_t tau = 0;
  double constant = 0;  // K' over entries meeting the gap precondition
  std::optional<QuadraticNumber> constant_exact;
  std::optional<MixingEntry> argmin;
  std::vector<MixingEntry> entries;
  std::size_t expected_failures = 0;  // entries below 2 tau with zero mass
  std::optional<double> proof_constant;
  bool pass() const { return constant > 0; }
};

MixingReport mixing_check(const CylinderMeasure& m, const GrowthBase& base,
                          const std::vector<std::pair<Word, Word>>& pairs, std::size_t gap_min,
                          std::size_t gap_max, std::size_t tau);

struct ProbeRow {
  std::size_t shift = 0;
  double mass = 0;
  double running_inf = 0;
};

// mu(U ∩ σ^{-m} V) for m in [m_min, m_max]; U and V are unions of
// cylinders given by words none of which is a prefix of another.
std::vector<ProbeRow> mixing_liminf_probe(const CylinderMeasure& m, const std::vector<Word>& U,
                                          const std::vector<Word>& V, std::size_t m_min,
                                          std::size_t m_max);

// Fewest length-n cylinders with total mass >= gamma (greedy by mass).
std::size_t positive_mass_count(const CylinderMeasure& m, const Rational& gamma, std::size_t n);

struct LemmaCheck {
  std::string id;
  std::string lemma;
  bool pass = true;
  bool skipped = false;
  std::size_t checked = 0;
  std::string detail;
  std::optional<std::string> witness;
};

struct TailRow {
  std::size_t level = 0;
  double value = 0;
  std::optional<QuadraticNumber> exact;
};

struct CoverageRow {
  Rational gamma;
  std::optional<std::size_t> level_found;  // least M meeting the bound for all n tested
  std::optional<std::size_t> level_proof;  // least M with e^{tau h} b_M^2 < gamma
  bool holds = false;                      // the bound holds at level_proof
};

struct CountingReport {
  std::size_t n_max = 0;
  ScaleIndex depth;
  std::size_t tau = 0;
  std::vector<LemmaCheck> checks;
  double c1 = 0;  // max of Lambda(n)/beta^n over the tail window
  std::optional<QuadraticNumber> c1_exact;
  double c1_all = 0;  // max over every tested n >= 1
  double c2 = 0;      // log C1 + log 2
  bool tail_closed = false;
  std::vector<TailRow> tails;
  std::vector<CoverageRow> coverage;
  bool hypotheses_met = false;
  bool pass() const;
};

// The counting lemmas at depth j with exact integer arithmetic. tau is the
// certified gluing time of the good core.
CountingReport counting_suite(const DecompositionScheme& scheme, const GrowthBase& base,
                              std::size_t n_max, ScaleIndex depth, std::size_t tau);

}  // namespace obstruct

#endif  // OBSTRUCT_MME_HPP
