#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "obstruct/cli.hpp"
#include "obstruct/errors.hpp"

using namespace obstruct;

int main(int argc, char** argv) {
  CLI::App app{"obstruct: entropy, specification and measures for beta-shifts and their factors"};
  RunConfig cfg;
  std::string config_file;
  std::string format = "json";

  app.add_option("command", cfg.command, "expand | entropy | verify | factor | mme | decomp")
      ->required();
  app.add_option("--config", config_file, "RunConfig JSON; flags given on the command line win");
  auto* beta = app.add_option("--beta", cfg.beta, "beta as an exact real: 2, phi, 3/2, 1+sqrt(2)");
  auto* exp = app.add_option("--expansion-file", cfg.expansion_file, "expansion of 1 in base beta");
  auto* prec = app.add_option("--precision", cfg.precision, "working precision in bits");
  auto* digits = app.add_option("--digits", cfg.digits, "expansion digits before truncation");
  auto* nmax = app.add_option("--nmax", cfg.n_max, "largest word length");
  auto* depth = app.add_option("--depth", cfg.depth, "symbolic depth j (epsilon = 2^-j)");
  auto* tau = app.add_option("--tau-max", cfg.tau_max, "largest gluing time tried");
  auto* level = app.add_option("--M", cfg.level, "filtration level M");
  auto* cap = app.add_option("--cap", cfg.enumeration_cap, "longest enumerated word");
  auto* scheme = app.add_option("--scheme", cfg.scheme, "beta | degenerate");
  auto* code = app.add_option("--code", cfg.code,
                              "identity | xor | merge-to-one | merge:a,b,.. | code file");
  auto* mfile = app.add_option("--measure", cfg.measure_file, "measure JSON used by verify");
  auto* kind = app.add_option("--kind", cfg.measure_kind, "parry | empirical");
  auto* n = app.add_option("--n", cfg.sample_length, "n of the empirical measure");
  auto* mdepth = app.add_option("--measure-depth", cfg.measure_depth, "cylinder depth of mme");
  auto* op = app.add_option("--op", cfg.op, "split | coverage | spec");
  auto* word = app.add_option("--word", cfg.word, "word for decomp --op split");
  auto* out = app.add_option("--out", cfg.out_dir, "output directory");
  auto* fmt = app.add_option("--format", format, "stdout format: json | csv");
  auto* csv = app.add_flag("--emit-csv", cfg.emit_csv, "write CSV tables into --out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    cfg.format = parse_format(format);
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw InputError("cannot open config " + config_file);
      RunConfig base = RunConfig::from_json(Json::parse(in));
      RunConfig cli = cfg;
      base.command = cli.command;
      auto take = [](CLI::Option* o, auto& dst, const auto& src) {
        if (o->count() > 0) dst = src;
      };
      take(beta, base.beta, cli.beta);
      take(exp, base.expansion_file, cli.expansion_file);
      take(prec, base.precision, cli.precision);
      take(digits, base.digits, cli.digits);
      take(nmax, base.n_max, cli.n_max);
      take(depth, base.depth, cli.depth);
      take(tau, base.tau_max, cli.tau_max);
      take(level, base.level, cli.level);
      take(cap, base.enumeration_cap, cli.enumeration_cap);
      take(scheme, base.scheme, cli.scheme);
      take(code, base.code, cli.code);
      take(mfile, base.measure_file, cli.measure_file);
      take(kind, base.measure_kind, cli.measure_kind);
      take(n, base.sample_length, cli.sample_length);
      take(mdepth, base.measure_depth, cli.measure_depth);
      take(op, base.op, cli.op);
      take(word, base.word, cli.word);
      take(out, base.out_dir, cli.out_dir);
      take(fmt, base.format, cli.format);
      take(csv, base.emit_csv, cli.emit_csv);
      cfg = base;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }

  CommandResult result = execute(cfg);
  if (result.report.contains("error")) {
    std::cerr << "error: " << result.report["error"].get<std::string>() << '\n';
  }
  try {
    write_outputs(cfg, result);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  if (cfg.format == ReportFormat::csv && !result.tables.empty()) {
    std::cout << result.tables.begin()->second;
  } else {
    std::cout << result.report.dump(2) << '\n';
  }
  return result.exit_code;
}
