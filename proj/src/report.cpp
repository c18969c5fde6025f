#include "obstruct/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "obstruct/errors.hpp"

namespace obstruct {

Json to_json(const BigInt& x) { return x.str(); }

Json to_json(const Rational& q) {
  Json j;
  j["num"] = boost::multiprecision::numerator(q).str();
  j["den"] = boost::multiprecision::denominator(q).str();
  return j;
}

Json to_json(const QuadraticNumber& x) {
  if (x.is_rational()) return to_json(x.rational_part());
  return x.to_string();
}

Json to_json_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

namespace {

Json optional_exact(const std::optional<QuadraticNumber>& x) {
  return x ? to_json(*x) : Json(nullptr);
}

Json words(const std::vector<Word>& ws, std::size_t alphabet) {
  Json out = Json::array();
  for (const auto& w : ws) out.push_back(format_word(w, alphabet));
  return out;
}

Json witness(const GluingWitness& w, std::size_t alphabet) {
  Json j;
  j["tuple"] = words(w.tuple, alphabet);
  j["gaps"] = words(w.gaps, alphabet);
  j["glued"] = format_word(w.glued, alphabet);
  return j;
}

}  // namespace

Json to_json(const BetaExpansion& e) {
  Json j;
  j["notation"] = e.notation();
  j["kind"] = to_string(e.kind);
  j["digits"] = format_word(e.digits, e.digits.empty() ? 2 : e.digits.front() + 1U);
  j["preperiod"] = e.preperiod;
  j["period"] = e.period;
  j["beta"] = optional_exact(e.beta);
  return j;
}

Json to_json(const EntropyEstimate& e) {
  Json j;
  j["rate"] = to_json_number(e.rate);
  j["method"] = to_string(e.method);
  j["tail_value"] = to_json_number(e.tail_value);
  j["regression"] = to_json_number(e.regression);
  j["depth"] = e.depth.j;
  j["tail_start"] = e.tail_start;
  Json samples = Json::array();
  for (const auto& s : e.samples) samples.push_back(Json::array({s.n, to_json_number(s.log_count)}));
  j["samples"] = samples;
  j["empty_lengths"] = e.empty_lengths;
  return j;
}

Json to_json(const SpecificationReport& r, std::size_t alphabet) {
  Json j;
  j["tau"] = r.tau;
  j["depth"] = r.depth.j;
  j["pass"] = r.pass;
  j["exhaustive"] = r.exhaustive;
  j["sample"] = r.sample;
  j["tuples_tested"] = r.tuples_tested;
  j["collection_words"] = r.collection_words;
  j["failure"] = r.failure ? witness(*r.failure, alphabet) : Json(nullptr);
  Json ws = Json::array();
  for (const auto& w : r.witnesses) ws.push_back(witness(w, alphabet));
  j["witnesses"] = ws;
  return j;
}

Json to_json(const GluingTime& g, std::size_t alphabet) {
  Json j;
  j["tau"] = g.tau ? Json(*g.tau) : Json(nullptr);
  j["inconclusive"] = g.inconclusive;
  Json attempts = Json::array();
  for (const auto& a : g.attempts) {
    Json row;
    row["tau"] = a.tau;
    row["pass"] = a.pass;
    row["exhaustive"] = a.exhaustive;
    row["tuples_tested"] = a.tuples_tested;
    attempts.push_back(row);
  }
  j["attempts"] = attempts;
  j["best_failure"] = g.best_failure ? witness(*g.best_failure, alphabet) : Json(nullptr);
  if (!g.attempts.empty()) j["sample"] = g.attempts.back().sample;
  return j;
}

Json to_json(const ObstructionBound& b) {
  Json j;
  j["rate"] = to_json_number(b.estimate.rate);
  j["full_entropy"] = to_json_number(b.full_entropy);
  j["gluing_certified"] = b.gluing_certified;
  j["hypotheses_met"] = b.hypotheses_met();
  Json levels = Json::array();
  for (const auto& [m, tau] : b.gluing) {
    Json row;
    row["M"] = m;
    row["tau"] = tau ? Json(*tau) : Json(nullptr);
    levels.push_back(row);
  }
  j["gluing"] = levels;
  j["estimate"] = to_json(b.estimate);
  return j;
}

Json to_json(const CountingReport& r) {
  Json j;
  j["pass"] = r.pass();
  j["n_max"] = r.n_max;
  j["depth"] = r.depth.j;
  j["tau"] = r.tau;
  j["C1"] = to_json_number(r.c1);
  j["C1_exact"] = optional_exact(r.c1_exact);
  j["C1_all"] = to_json_number(r.c1_all);
  j["C2"] = to_json_number(r.c2);
  j["tail_closed"] = r.tail_closed;
  j["hypotheses_met"] = r.hypotheses_met;
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json row;
    row["id"] = c.id;
    row["lemma"] = c.lemma;
    row["pass"] = c.pass;
    row["skipped"] = c.skipped;
    row["checked"] = c.checked;
    row["detail"] = c.detail;
    row["witness"] = c.witness ? Json(*c.witness) : Json(nullptr);
    checks.push_back(row);
  }
  j["checks"] = checks;
  Json tails = Json::array();
  for (const auto& t : r.tails) {
    Json row;
    row["M"] = t.level;
    row["b"] = to_json_number(t.value);
    row["exact"] = optional_exact(t.exact);
    tails.push_back(row);
  }
  j["tails"] = tails;
  Json coverage = Json::array();
  for (const auto& c : r.coverage) {
    Json row;
    row["gamma"] = to_json(c.gamma);
    row["M_found"] = c.level_found ? Json(*c.level_found) : Json(nullptr);
    row["M_proof"] = c.level_proof ? Json(*c.level_proof) : Json(nullptr);
    row["holds"] = c.holds;
    coverage.push_back(row);
  }
  j["coverage"] = coverage;
  return j;
}

Json to_json(const GibbsReport& r, std::size_t alphabet) {
  Json j;
  j["pass"] = r.pass();
  j["class"] = r.tested_class;
  j["depth"] = r.depth_offset;
  j["n_min"] = r.n_min;
  j["n_max"] = r.n_max;
  j["K"] = to_json_number(r.constant);
  j["K_exact"] = optional_exact(r.constant_exact);
  j["argmin"] = format_word(r.argmin, alphabet);
  j["argmin_n"] = r.argmin_n;
  j["tested"] = r.tested;
  j["K_proof"] = r.proof_constant ? to_json_number(*r.proof_constant) : Json(nullptr);
  Json rows = Json::array();
  for (const auto& [n, v] : r.per_length) rows.push_back(Json::array({n, to_json_number(v)}));
  j["per_length"] = rows;
  j["violations"] = words(r.violations, alphabet);
  j["note"] = r.note;
  return j;
}

Json to_json(const MixingReport& r, std::size_t alphabet) {
  auto entry = [&](const MixingEntry& e) {
    Json row;
    row["u"] = format_word(e.u, alphabet);
    row["v"] = format_word(e.v, alphabet);
    row["gap"] = e.gap;
    row["mass"] = to_json_number(e.mass);
    row["scaled"] = to_json_number(e.scaled);
    row["below_precondition"] = e.below_precondition;
    return row;
  };
  Json j;
  j["pass"] = r.pass();
  j["tau"] = r.tau;
  j["K_prime"] = to_json_number(r.constant);
  j["K_prime_exact"] = optional_exact(r.constant_exact);
  j["argmin"] = r.argmin ? entry(*r.argmin) : Json(nullptr);
  j["entries_tested"] = r.entries.size();
  j["expected_failures"] = r.expected_failures;
  j["K_prime_proof"] = r.proof_constant ? to_json_number(*r.proof_constant) : Json(nullptr);
  return j;
}

Json to_json(const ExpansivityReport& r) {
  Json j;
  j["depth"] = r.depth.j;
  j["positively_expansive"] = r.positively_expansive;
  j["inconclusive"] = r.inconclusive;
  j["horizon_only"] = r.horizon_only;
  j["growth"] = to_json_number(r.growth);
  j["pair_growth"] = to_json_number(r.pair_growth);
  j["pair_states"] = r.pair_states;
  j["nondiagonal_live_states"] = r.nondiagonal_live_states;
  j["detail"] = r.detail;
  return j;
}

Json to_json(const FactorEntropyResult& r, std::size_t alphabet) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["n"] = r.n;
  j["v1"] = format_word(r.v1, alphabet);
  j["v2"] = format_word(r.v2, alphabet);
  j["rate_bound"] = to_json_number(r.rate_bound);
  j["certified_m"] = r.certified_m;
  j["detail"] = r.detail;
  return j;
}

Json to_json(const TheoremCReport& r, std::size_t alphabet) {
  Json j;
  j["verdict"] = r.verdict;
  j["hypotheses_met"] = r.hypotheses_met;
  j["factor_entropy_rate"] = to_json_number(r.factor_entropy_rate);
  j["expansivity"] = to_json(r.expansivity);
  j["factor_entropy"] = to_json(r.factor_entropy, alphabet);
  j["suffix_rate"] = to_json_number(r.suffix.rate);
  j["n_first"] = r.n_first;
  j["n_second"] = r.n_second;
  j["mme_difference"] = to_json_number(r.mme_difference);
  j["uniqueness_confirmed"] = r.uniqueness_confirmed;
  return j;
}

Json measure_to_json(const CylinderMeasure& m) {
  Json j;
  j["schema"] = kReportSchema;
  j["alphabet"] = m.alphabet_size();
  j["depth"] = m.depth();
  j["provenance"] = to_string(m.provenance());
  j["n"] = m.sample_length();
  j["error_bound"] = to_json_number(m.error_bound());
  Json entries = Json::array();
  for (const auto& [w, mass] : m.entries()) {
    Json row;
    row["word"] = format_word(w, m.alphabet_size());
    row["mass"] = to_json_number(mass.value);
    row["exact"] = optional_exact(mass.exact);
    entries.push_back(row);
  }
  j["entries"] = entries;
  return j;
}

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("measure: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("measure: field '") + key + "' has the wrong type");
  }
}

QuadraticNumber exact_from_json(const Json& j) {
  if (j.is_string()) return parse_quadratic(j.get<std::string>());
  if (j.is_object()) {
    auto num = field<std::string>(j, "num");
    auto den = field<std::string>(j, "den");
    try {
      BigInt n{num};
      BigInt d{den};
      if (d == 0) throw InputError("zero denominator");
      return QuadraticNumber(Rational(n, d));
    } catch (const std::exception&) {
      throw InputError("measure: bad rational " + num + "/" + den);
    }
  }
  throw InputError("measure: exact mass must be a string or {num, den}");
}

}  // namespace

CylinderMeasure measure_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("measure: top level must be an object");
  if (field<int>(j, "schema") != kReportSchema) throw InputError("measure: unsupported schema");
  auto alphabet = field<std::size_t>(j, "alphabet");
  auto depth = field<std::size_t>(j, "depth");
  if (alphabet < 1) throw InputError("measure: alphabet must be positive");
  CylinderMeasure m(alphabet, depth, parse_provenance(field<std::string>(j, "provenance")));
  m.set_sample_length(field<std::size_t>(j, "n"));
  const Json& eb = j.contains("error_bound") ? j.at("error_bound") : Json(nullptr);
  if (!eb.is_number()) throw InputError("measure: field 'error_bound' must be a number");
  m.set_error_bound(eb.get<double>());
  if (!j.contains("entries") || !j.at("entries").is_array()) {
    throw InputError("measure: 'entries' must be an array");
  }
  for (const auto& row : j.at("entries")) {
    if (!row.is_object()) throw InputError("measure: entry must be an object");
    Word w = parse_word(field<std::string>(row, "word"), alphabet);
    Mass mass;
    if (!row.contains("mass") || !row.at("mass").is_number()) {
      throw InputError("measure: entry mass must be a number");
    }
    mass.value = row.at("mass").get<double>();
    if (!(mass.value >= 0 && mass.value <= 1)) throw InputError("measure: mass outside [0, 1]");
    if (row.contains("exact") && !row.at("exact").is_null()) {
      mass.exact = exact_from_json(row.at("exact"));
      if (std::abs(mass.exact->to_double() - mass.value) > 1e-9) {
        throw InputError("measure: exact and floating masses disagree for " +
                         row.at("word").get<std::string>());
      }
    }
    m.set(std::move(w), std::move(mass));
  }
  return m;
}

CylinderMeasure read_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open measure file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("measure file " + path + ": " + e.what());
  }
  return measure_from_json(j);
}

Json strip_timestamp(Json report) {
  if (report.is_object()) report.erase("timestamp");
  return report;
}

}  // namespace obstruct
