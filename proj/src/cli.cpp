#include "obstruct/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "obstruct/decomposition.hpp"
#include "obstruct/errors.hpp"
#include "obstruct/factors.hpp"
#include "obstruct/mme.hpp"
#include "obstruct/symbolic.hpp"

namespace obstruct {

namespace fs = std::filesystem;

std::string to_string(ReportFormat f) { return f == ReportFormat::json ? "json" : "csv"; }

ReportFormat parse_format(const std::string& text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  throw InputError("unknown report format '" + text + "' (json or csv)");
}

namespace {

const std::set<std::string> kCommands{"expand", "entropy", "verify", "factor", "mme", "decomp"};

}  // namespace

Json RunConfig::to_json() const {
  Json j;
  j["command"] = command;
  j["beta"] = beta;
  j["expansion_file"] = expansion_file;
  j["precision"] = precision;
  j["digits"] = digits;
  j["n_max"] = n_max;
  j["depth"] = depth;
  j["tau_max"] = tau_max;
  j["level"] = level;
  j["enumeration_cap"] = enumeration_cap;
  j["scheme"] = scheme;
  j["code"] = code;
  j["measure_file"] = measure_file;
  j["measure_kind"] = measure_kind;
  j["sample_length"] = sample_length;
  j["measure_depth"] = measure_depth;
  j["op"] = op;
  j["word"] = word;
  j["out_dir"] = out_dir;
  j["format"] = to_string(format);
  j["emit_csv"] = emit_csv;
  return j;
}

RunConfig RunConfig::from_json(const Json& j) {
  if (!j.is_object()) throw InputError("config: expected an object");
  RunConfig c;
  const Json keys = c.to_json();
  for (const auto& [key, value] : j.items()) {
    if (!keys.contains(key)) throw InputError("config: unknown key '" + key + "'");
    const Json& ref = keys.at(key);
    bool ok = (ref.is_string() && value.is_string()) ||
              (ref.is_boolean() && value.is_boolean()) ||
              (ref.is_number_unsigned() && value.is_number_unsigned());
    if (!ok) throw InputError("config: key '" + key + "' has the wrong type");
  }
  auto str = [&](const char* k, std::string& out) {
    if (j.contains(k)) out = j.at(k).get<std::string>();
  };
  auto num = [&](const char* k, auto& out) {
    if (j.contains(k)) out = j.at(k).get<std::remove_reference_t<decltype(out)>>();
  };
  str("command", c.command);
  str("beta", c.beta);
  str("expansion_file", c.expansion_file);
  num("precision", c.precision);
  num("digits", c.digits);
  num("n_max", c.n_max);
  num("depth", c.depth);
  num("tau_max", c.tau_max);
  num("level", c.level);
  num("enumeration_cap", c.enumeration_cap);
  str("scheme", c.scheme);
  str("code", c.code);
  str("measure_file", c.measure_file);
  str("measure_kind", c.measure_kind);
  num("sample_length", c.sample_length);
  num("measure_depth", c.measure_depth);
  str("op", c.op);
  str("word", c.word);
  str("out_dir", c.out_dir);
  if (j.contains("format")) c.format = parse_format(j.at("format").get<std::string>());
  num("emit_csv", c.emit_csv);
  return c;
}

void RunConfig::validate() const {
  if (!kCommands.count(command)) throw InputError("unknown command '" + command + "'");
  if (precision == 0 || digits == 0 || n_max == 0 || tau_max == 0 || enumeration_cap == 0 ||
      sample_length == 0 || measure_depth == 0) {
    throw InputError("caps must be positive");
  }
  if (scheme != "beta" && scheme != "degenerate") {
    throw InputError("unknown scheme '" + scheme + "' (beta or degenerate)");
  }
  if (measure_kind != "parry" && measure_kind != "empirical") {
    throw InputError("unknown measure kind '" + measure_kind + "' (parry or empirical)");
  }
  if (op != "split" && op != "coverage" && op != "spec") {
    throw InputError("unknown decomposition op '" + op + "' (split, coverage or spec)");
  }
  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir)) throw InputError("output directory " + out_dir + " unavailable");
    fs::path probe = fs::path(out_dir) / ".obstruct-write-probe";
    {
      std::ofstream out(probe);
      if (!out) throw InputError("output directory " + out_dir + " is not writable");
    }
    fs::remove(probe, ec);
  }
}

std::shared_ptr<const BetaSystem> build_system(const RunConfig& cfg) {
  if (!cfg.beta.empty() && !cfg.expansion_file.empty()) {
    throw InputError("give either --beta or --expansion-file, not both");
  }
  if (!cfg.expansion_file.empty()) {
    std::ifstream in(cfg.expansion_file);
    if (!in) throw InputError("cannot open expansion file " + cfg.expansion_file);
    return std::make_shared<const BetaSystem>(read_expansion(in), cfg.precision);
  }
  if (cfg.beta.empty()) throw InputError("missing --beta (or --expansion-file)");
  return make_beta_shift(parse_quadratic(cfg.beta), cfg.digits, cfg.precision);
}

namespace {

Json system_json(const BetaSystem& sys) {
  Json j;
  j["describe"] = sys.describe();
  j["w"] = sys.expansion().notation();
  j["kind"] = to_string(sys.expansion().kind);
  j["alphabet"] = sys.alphabet_size();
  j["truncated"] = sys.is_truncated();
  j["horizon"] = sys.horizon() == Language::unlimited ? Json(nullptr) : Json(sys.horizon());
  j["beta"] = to_json_number(sys.beta());
  j["beta_exact"] = sys.exact_beta() ? to_json(*sys.exact_beta()) : Json(nullptr);
  j["log_beta"] = to_json_number(sys.log_beta());
  return j;
}

std::shared_ptr<const DecompositionScheme> build_scheme(const RunConfig& cfg,
                                                        std::shared_ptr<const BetaSystem> sys) {
  if (cfg.scheme == "degenerate") return std::make_shared<const DegenerateDecomposition>(sys);
  return beta_decomposition(sys);
}

Json check_row(const std::string& id, bool pass, bool skipped, const std::string& detail) {
  Json j;
  j["id"] = id;
  j["pass"] = pass;
  j["skipped"] = skipped;
  j["detail"] = detail;
  return j;
}

std::string fmt(double x) {
  std::ostringstream out;
  out << std::setprecision(10) << x;
  return out.str();
}

std::vector<std::size_t> levels_up_to(std::size_t m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i <= m; ++i) out.push_back(i);
  return out;
}

// Deepest table the measure checks use: 16 + j, kept below 2e5 words.
std::size_t verify_measure_depth(const BetaSystem& sys, std::size_t j) {
  std::size_t d = 16 + j;
  while (d > 1 && (d > sys.horizon() || sys.count(d) > 200000)) --d;
  return d;
}

BlockCode resolve_code(const RunConfig& cfg, std::size_t alphabet) {
  const std::string& c = cfg.code;
  if (c == "identity") return BlockCode::identity(alphabet);
  if (c == "xor") {
    if (alphabet != 2) throw InputError("xor code needs a two-letter source");
    return BlockCode::xor2();
  }
  if (c == "merge-to-one") return BlockCode::merge_to_one(alphabet);
  if (c.rfind("merge:", 0) == 0) {
    std::vector<Symbol> map;
    std::stringstream in(c.substr(6));
    std::string item;
    while (std::getline(in, item, ',')) {
      try {
        map.push_back(static_cast<Symbol>(std::stoul(item)));
      } catch (const std::exception&) {
        throw InputError("bad one-block map '" + c + "'");
      }
    }
    return BlockCode::one_block(c, alphabet, map);
  }
  std::ifstream in(c);
  if (!in) throw InputError("unknown code '" + c + "' and no such file");
  return BlockCode::parse(in, alphabet, fs::path(c).filename().string());
}

std::string timestamp_now() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace

CommandResult cmd_expand(const RunConfig& cfg) {
  auto sys = build_system(cfg);
  CommandResult r;
  r.report["system"] = system_json(*sys);
  if (sys->exact_beta()) {
    r.report["greedy"] = to_json(greedy_expansion(*sys->exact_beta(), cfg.digits));
  }
  r.report["quasi_greedy"] = to_json(sys->expansion());
  r.report["self_admissible"] = sys->expansion().self_admissible();
  r.report["automaton_states"] = sys->presentation().num_states();
  r.tables["automaton.csv"] = sys->automaton_csv();
  r.exit_code = sys->expansion().self_admissible() ? kExitPass : kExitViolation;
  return r;
}

CommandResult cmd_entropy(const RunConfig& cfg) {
  auto sys = build_system(cfg);
  const ScaleIndex depth{cfg.depth};
  if (cfg.n_max < 8) throw InputError("entropy needs --nmax >= 8");
  sys->require_within_horizon(cfg.n_max + depth.j, "entropy");
  auto whole = whole_space(sys);
  CommandResult r;
  r.report["system"] = system_json(*sys);
  EntropyEstimate upper = upper_entropy(whole, depth, cfg.n_max);
  EntropyEstimate lower = lower_entropy(whole, depth, cfg.n_max);
  r.report["upper"] = to_json(upper);
  r.report["lower_rate"] = to_json_number(lower.rate);
  r.report["log_beta"] = to_json_number(sys->log_beta());
  r.report["difference"] = to_json_number(std::abs(upper.rate - sys->log_beta()));
  Json counts = Json::array();
  std::ostringstream csv;
  csv << "n,depth,count,log_count_over_n\n";
  for (std::size_t n = 1; n <= cfg.n_max; ++n) {
    BigInt c = count_separated(whole, n, depth).count;
    counts.push_back(Json::array({n, to_json(c)}));
    csv << n << ',' << depth.j << ',' << c << ',' << std::setprecision(17) << log_of(c) / n
        << '\n';
  }
  r.report["counts"] = counts;
  r.tables["entropy.csv"] = csv.str();
  return r;
}

CommandResult cmd_verify(const RunConfig& cfg) {
  auto sys = build_system(cfg);
  auto scheme = build_scheme(cfg, sys);
  const ScaleIndex depth{cfg.depth};
  if (cfg.n_max < 8) throw InputError("verify needs --nmax >= 8");
  sys->require_within_horizon(cfg.n_max + depth.j, "verify");
  const GrowthBase base = GrowthBase::of(*sys);
  const double h = sys->log_beta();
  const bool beta_scheme = cfg.scheme == "beta";

  CommandResult r;
  r.report["system"] = system_json(*sys);
  r.report["scheme"] = scheme->name();
  Json checks = Json::array();
  bool violation = false;
  bool inconclusive = false;
  auto record = [&](const std::string& id, bool pass, bool skipped, const std::string& detail) {
    checks.push_back(check_row(id, pass, skipped, detail));
    if (!pass && !skipped) violation = true;
  };
  auto record_inconclusive = [&](const std::string& id, const std::string& detail) {
    Json row = check_row(id, false, false, detail);
    row["inconclusive"] = true;
    checks.push_back(row);
    inconclusive = true;
  };

  // Specification of G^M and the obstruction bound.
  SamplingPolicy policy;
  policy.tuple_budget = 400000;
  bool gluing_open = false;
  ObstructionBound bound = obstruction_entropy_upper(scheme, depth, cfg.n_max,
                                                     levels_up_to(cfg.level), cfg.tau_max, policy);
  r.report["obstruction"] = to_json(bound);
  Json spec = Json::array();
  std::optional<std::size_t> tau0;
  for (std::size_t m = 0; m <= cfg.level; ++m) {
    GluingTime g = min_gluing_time(filtration_collection(scheme, m), depth, cfg.tau_max, policy);
    if (m == 0) tau0 = g.tau;
    Json row = to_json(g, sys->alphabet_size());
    row["M"] = m;
    spec.push_back(row);
    if (!g.tau && g.inconclusive) {
      gluing_open = true;
      record_inconclusive("spec-G" + std::to_string(m), "sampled gluing only; raise the budget");
    } else {
      record("spec-G" + std::to_string(m), g.tau.has_value(), false,
             g.tau ? "tau = " + std::to_string(*g.tau) : "no gluing time up to tau_max");
    }
  }
  r.report["specification"] = spec;
  GluingTime whole = min_gluing_time(whole_space(sys), depth, cfg.tau_max, policy);
  r.report["language_gluing_time"] = whole.tau ? Json(*whole.tau) : Json(nullptr);

  const bool theorem_b = bound.hypotheses_met();
  r.report["theorem_b_hypotheses_met"] = theorem_b;
  if (beta_scheme && gluing_open) {
    record_inconclusive("obstruction-entropy", "gluing not certified");
  } else if (beta_scheme) {
    record("obstruction-entropy", theorem_b && bound.estimate.rate < 0.02, false,
           "P u S rate " + fmt(bound.estimate.rate) + " against h = " + fmt(h));
  } else {
    record("obstruction-entropy", true, false,
           "hypotheses " + std::string(theorem_b ? "met" : "unmet") + ": P u S rate " +
               fmt(bound.estimate.rate) + ", h = " + fmt(h));
  }

  // Counting lemmas.
  CountingReport counting = counting_suite(*scheme, base, cfg.n_max, depth, tau0.value_or(0));
  r.report["counting"] = to_json(counting);
  record("counting-suite", counting.pass(), false,
         "C1 = " + fmt(counting.c1) + ", C2 = " + fmt(counting.c2));

  // Filtration coverage, monotone in M.
  {
    bool monotone = true;
    std::string detail = "n <= " + std::to_string(cfg.n_max) + ", M <= " + std::to_string(cfg.level);
    Json rows = Json::array();
    for (std::size_t n = 1; n <= cfg.n_max; ++n) {
      Rational prev(0);
      for (std::size_t m = 0; m <= cfg.level; ++m) {
        Rational c = filtration_coverage(*scheme, m, n);
        if (c < prev && monotone) {
          monotone = false;
          detail = "coverage drops at n = " + std::to_string(n) + ", M = " + std::to_string(m);
        }
        prev = c;
        if (n == cfg.n_max) {
          Json row;
          row["M"] = m;
          row["n"] = n;
          row["coverage"] = to_json(c);
          rows.push_back(row);
        }
      }
    }
    r.report["coverage"] = rows;
    record("coverage-monotone", monotone, false, detail);
  }

  // Measure-based lemmas need the hypotheses.
  Json measure_json;
  if (!theorem_b) {
    for (const char* id : {"gibbs", "mixing", "mixing-probe", "positive-mass"}) {
      record(id, true, true, "hypotheses unmet");
    }
  } else {
    std::size_t mdepth = verify_measure_depth(*sys, depth.j);
    std::optional<CylinderMeasure> loaded;
    if (!cfg.measure_file.empty()) {
      loaded = read_measure_file(cfg.measure_file);
      if (loaded->alphabet_size() != sys->alphabet_size()) {
        throw InputError("measure alphabet does not match the system");
      }
      MeasureValidation v = validate_measure(*loaded, 1e-9);
      if (!v.ok(true)) throw InputError("measure file is not an invariant measure: " + v.detail);
      mdepth = loaded->depth();
    }
    CylinderMeasure measure = loaded ? *loaded : parry_measure(*sys, mdepth);
    measure_json["provenance"] = to_string(measure.provenance());
    measure_json["depth"] = measure.depth();
    measure_json["error_bound"] = to_json_number(measure.error_bound());
    measure_json["source"] = loaded ? "file" : "computed";

    const std::size_t n_gibbs = mdepth > depth.j ? mdepth - depth.j : 0;
    if (n_gibbs == 0) throw InputError("measure depth too small for depth j");
    Json gibbs = Json::array();
    for (std::size_t m : {std::size_t{0}, cfg.level}) {
      GibbsReport g = gibbs_check(measure, base, filtration_collection(scheme, m), 1, n_gibbs, depth);
      g.proof_constant = gibbs_proof_constant(counting.c1, tau0.value_or(0), h);
      Json row = to_json(g, sys->alphabet_size());
      row["M"] = m;
      if (n_gibbs >= 4) {
        double a = g.window_minimum(1, n_gibbs / 2);
        double b = g.window_minimum(n_gibbs / 2 + 1, n_gibbs);
        row["window_drift"] = to_json_number(std::abs(a - b) / std::max(a, b));
      }
      gibbs.push_back(row);
      record("gibbs-G" + std::to_string(m), g.pass(), false, "K = " + fmt(g.constant));
      if (cfg.level == 0) break;
    }
    r.report["gibbs"] = gibbs;

    const std::size_t len = std::min<std::size_t>(3, mdepth / 3);
    const std::size_t q_max = std::min<std::size_t>(9, mdepth - 2 * len);
    std::vector<Word> core;
    auto good = good_collection(scheme);
    for (std::size_t l = 1; l <= len; ++l) {
      for (Word& w : good.cylinders(l, ScaleIndex{0}, cfg.enumeration_cap)) core.push_back(std::move(w));
    }
    std::vector<std::pair<Word, Word>> pairs;
    for (const auto& u : core) {
      for (const auto& v : core) pairs.emplace_back(u, v);
    }
    MixingReport mix = mixing_check(measure, base, pairs, 0, q_max, tau0.value_or(0));
    mix.proof_constant = mixing_proof_constant(counting.c1, tau0.value_or(0), h);
    r.report["mixing"] = to_json(mix, sys->alphabet_size());
    record("mixing", mix.pass(), false, "K' = " + fmt(mix.constant) + " over " +
                                             std::to_string(mix.entries.size()) + " entries");

    const Word zero{0};
    auto probe = mixing_liminf_probe(measure, {zero}, {zero}, 1, q_max + 1);
    double floor = mix.constant / std::pow(sys->beta(), 2);
    bool probe_ok = !probe.empty();
    Json rows = Json::array();
    for (const auto& p : probe) {
      probe_ok = probe_ok && p.mass > 0 && p.running_inf >= floor * (1 - 1e-12);
      rows.push_back(Json::array({p.shift, to_json_number(p.mass), to_json_number(p.running_inf)}));
    }
    r.report["mixing_probe"] = {{"floor", to_json_number(floor)}, {"rows", rows}};
    record("mixing-probe", probe_ok, false, "mu([0] n s^-m [0]) >= K' beta^-2 = " + fmt(floor));

    bool pm_ok = true;
    Json pm = Json::array();
    std::string pm_detail = "gamma in {1/4, 1/2, 3/4}";
    for (Rational gamma : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
      double g = to_double(gamma);
      for (std::size_t n = 1; n <= std::min<std::size_t>(14, mdepth); ++n) {
        std::size_t count = positive_mass_count(measure, gamma, n);
        double bound_n = counting.c1 * std::exp(-counting.c2 / g) * std::pow(sys->beta(), n);
        if (static_cast<double>(count) < bound_n && pm_ok) {
          pm_ok = false;
          pm_detail = "count " + std::to_string(count) + " < " + fmt(bound_n) + " at n = " +
                      std::to_string(n);
        }
        pm.push_back(Json::array({to_json(gamma), n, count, to_json_number(bound_n)}));
      }
    }
    r.report["positive_mass"] = pm;
    record("positive-mass", pm_ok, false, pm_detail);
  }
  r.report["measure"] = measure_json;
  r.report["checks"] = checks;
  r.exit_code = violation ? kExitViolation : inconclusive ? kExitInconclusive : kExitPass;

  std::ostringstream csv;
  csv << "n,coverage_M0,coverage_M" << cfg.level << '\n';
  for (std::size_t n = 1; n <= cfg.n_max; ++n) {
    csv << n << ',' << std::setprecision(17) << to_double(filtration_coverage(*scheme, 0, n)) << ','
        << to_double(filtration_coverage(*scheme, cfg.level, n)) << '\n';
  }
  r.tables["coverage.csv"] = csv.str();
  return r;
}

CommandResult cmd_factor(const RunConfig& cfg) {
  auto sys = build_system(cfg);
  BlockCode code = resolve_code(cfg, sys->alphabet_size());
  if (code.window() > cfg.enumeration_cap) {
    throw InputError("code window " + std::to_string(code.window()) + " exceeds the enumeration cap " +
                     std::to_string(cfg.enumeration_cap));
  }
  code.require_total(*sys);
  CommandResult r;
  r.report["system"] = system_json(*sys);
  r.report["code"] = {{"name", code.name()}, {"window", code.window()},
                      {"output_alphabet", code.output_alphabet_size()}};

  TheoremCReport c = theorem_c_check(sys, code, std::max<std::size_t>(cfg.n_max, 8));
  r.report["theorem_c"] = to_json(c, code.output_alphabet_size());
  if (cfg.depth > 0) {
    r.report["expansivity_at_depth"] = to_json(nonexpansive_growth(*sys, code, ScaleIndex{cfg.depth}));
  }

  Json image = Json::array();
  bool full = true;
  const std::size_t n_img = std::min<std::size_t>(10, cfg.enumeration_cap);
  for (std::size_t n = 1; n <= n_img; ++n) {
    auto words = factor_language(*sys, code, n, cfg.enumeration_cap);
    BigInt all = boost::multiprecision::pow(BigInt(code.output_alphabet_size()), n);
    full = full && BigInt(words.size()) == all;
    image.push_back(Json::array({n, words.size()}));
  }
  r.report["image_counts"] = image;
  r.report["image_is_full_shift"] = full;

  PairAutomaton pairs(*sys, code);
  Json pair_rows = Json::array();
  bool pairs_ok = true;
  for (std::size_t n = 1; n <= 8; ++n) {
    std::map<Word, BigInt> classes;
    for (const Word& x : sys->enumerate(n, cfg.enumeration_cap)) {
      Word y = n >= code.window() ? apply_code(code, x) : Word{};
      classes[y] += 1;
    }
    BigInt brute = 0;
    for (const auto& [y, k] : classes) brute += k * k;
    BigInt automaton = pairs.count_pairs(n);
    pairs_ok = pairs_ok && brute == automaton;
    pair_rows.push_back(Json::array({n, to_json(automaton), to_json(brute)}));
  }
  r.report["pair_counts"] = pair_rows;
  r.report["pair_counts_match"] = pairs_ok;
  r.tables["pairs.csv"] = pairs.to_csv();

  if (!pairs_ok) {
    r.exit_code = kExitViolation;
  } else if (c.verdict == "inconclusive") {
    r.exit_code = kExitInconclusive;
  } else if (c.hypotheses_met && !c.uniqueness_confirmed) {
    r.exit_code = kExitViolation;
  } else {
    r.exit_code = kExitPass;
  }
  return r;
}

CommandResult cmd_mme(const RunConfig& cfg) {
  auto sys = build_system(cfg);
  CommandResult r;
  r.report["system"] = system_json(*sys);
  const std::size_t d = cfg.measure_depth;
  CylinderMeasure m = cfg.measure_kind == "empirical" ? empirical_mme(*sys, cfg.sample_length, d)
                                                      : parry_measure(*sys, d);
  MeasureValidation v = validate_measure(m, 1e-9);
  r.report["validation"] = {{"normalized", v.normalized},
                            {"consistent", v.consistent},
                            {"shift_invariant", v.shift_invariant},
                            {"max_error", to_json_number(v.max_error)},
                            {"detail", v.detail}};
  r.report["entropy_at_depth"] = to_json_number(measure_entropy(m, d) / static_cast<double>(d));
  if (cfg.measure_kind == "empirical") {
    CylinderMeasure parry = parry_measure(*sys, d);
    double diff = 0;
    for (std::size_t l = 1; l <= d; ++l) diff = std::max(diff, max_cylinder_difference(m, parry, l));
    r.report["difference_to_parry"] = to_json_number(diff);
  }
  r.report["measure"] = measure_to_json(m);
  std::ostringstream csv;
  csv << "word,mass\n";
  for (const auto& [w, mass] : m.entries()) {
    csv << format_word(w, m.alphabet_size()) << ',' << std::setprecision(17) << mass.value << '\n';
  }
  r.tables["measure.csv"] = csv.str();
  bool required = cfg.measure_kind == "parry";
  r.exit_code = v.ok(required) ? kExitPass : kExitViolation;
  return r;
}

CommandResult cmd_decomp(const RunConfig& cfg) {
  auto sys = build_system(cfg);
  auto scheme = build_scheme(cfg, sys);
  CommandResult r;
  r.report["system"] = system_json(*sys);
  r.report["scheme"] = scheme->name();
  r.report["op"] = cfg.op;
  if (cfg.op == "split") {
    Word v = parse_word(cfg.word, sys->alphabet_size());
    Split s = scheme->split(v);
    r.report["word"] = cfg.word;
    r.report["split"] = {{"p", s.p}, {"g", s.g}, {"s", s.s}};
    r.report["pieces"] = {
        {"prefix", format_word(WordView(v).subspan(0, s.p), sys->alphabet_size())},
        {"core", format_word(WordView(v).subspan(s.p, s.g), sys->alphabet_size())},
        {"suffix", format_word(WordView(v).subspan(s.p + s.g), sys->alphabet_size())}};
    r.report["in_GM"] = scheme->member_GM(v, cfg.level);
  } else if (cfg.op == "coverage") {
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "n,coverage\n";
    for (std::size_t n = 1; n <= cfg.n_max; ++n) {
      Rational c = filtration_coverage(*scheme, cfg.level, n);
      rows.push_back(Json::array({n, to_json(c)}));
      csv << n << ',' << std::setprecision(17) << to_double(c) << '\n';
    }
    r.report["M"] = cfg.level;
    r.report["coverage"] = rows;
    r.tables["coverage.csv"] = csv.str();
  } else {
    SamplingPolicy policy;
    GluingTime g = min_gluing_time(filtration_collection(scheme, cfg.level), ScaleIndex{cfg.depth},
                                   cfg.tau_max, policy);
    r.report["M"] = cfg.level;
    r.report["gluing"] = to_json(g, sys->alphabet_size());
    r.exit_code = g.tau ? kExitPass : g.inconclusive ? kExitInconclusive : kExitViolation;
  }
  return r;
}

CommandResult execute(const RunConfig& cfg) {
  CommandResult r;
  try {
    cfg.validate();
    if (cfg.command == "expand") r = cmd_expand(cfg);
    else if (cfg.command == "entropy") r = cmd_entropy(cfg);
    else if (cfg.command == "verify") r = cmd_verify(cfg);
    else if (cfg.command == "factor") r = cmd_factor(cfg);
    else if (cfg.command == "mme") r = cmd_mme(cfg);
    else r = cmd_decomp(cfg);
  } catch (const BudgetExceeded& e) {
    r = CommandResult{};
    r.report["error"] = e.what();
    r.exit_code = kExitInconclusive;
  } catch (const std::exception& e) {
    r = CommandResult{};
    r.report["error"] = e.what();
    r.exit_code = kExitInput;
  }
  Json out;
  out["schema"] = kReportSchema;
  out["command"] = cfg.command;
  out["config"] = cfg.to_json();
  for (auto& [key, value] : r.report.items()) out[key] = value;
  out["exit_code"] = r.exit_code;
  out["verdict"] = r.exit_code == kExitPass          ? "pass"
                   : r.exit_code == kExitViolation   ? "violation"
                   : r.exit_code == kExitInconclusive ? "inconclusive"
                                                      : "error";
  out["timestamp"] = timestamp_now();
  r.report = std::move(out);
  return r;
}

void write_outputs(const RunConfig& cfg, const CommandResult& result) {
  if (cfg.out_dir.empty()) return;
  fs::path dir(cfg.out_dir);
  std::ofstream(dir / (cfg.command + ".json")) << result.report.dump(2) << '\n';
  if (result.report.contains("measure") && result.report["measure"].contains("entries")) {
    std::ofstream(dir / "measure.json") << result.report["measure"].dump(2) << '\n';
  }
  if (!cfg.emit_csv) return;
  for (const auto& [name, text] : result.tables) std::ofstream(dir / name) << text;
}

}  // namespace obstruct
