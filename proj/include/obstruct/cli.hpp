#ifndef OBSTRUCT_CLI_HPP
#define OBSTRUCT_CLI_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <string>

#include "obstruct/beta.hpp"
#include "obstruct/report.hpp"

namespace obstruct {

enum class ReportFormat { json, csv };

std::string to_string(ReportFormat f);
ReportFormat parse_format(const std::string& text);

struct RunConfig {
  std::string command;
  std::string beta;            // exact real such as "phi", "2", "3/2"
  std::string expansion_file;  // alternative to beta
  unsigned precision = 128;    // bits
  std::size_t digits = 60;     // expansion digits before truncation
  std::size_t n_max = 24;
  std::size_t depth = 0;       // j
  std::size_t tau_max = 4;
  std::size_t level = 2;       // M
  std::size_t enumeration_cap = 24;
  std::string scheme = "beta";  // beta | degenerate
  std::string code = "identity";  // identity | xor | merge-to-one | merge:a,b,.. | file
  std::string measure_file;
  std::string measure_kind = "parry";  // parry | empirical
  std::size_t sample_length = 1000;    // n of mu_n
  std::size_t measure_depth = 3;
  std::string op = "split";  // split | coverage | spec
  std::string word;
  std::string out_dir;
  ReportFormat format = ReportFormat::json;
  bool emit_csv = false;

  Json to_json() const;
  // Unknown keys and wrong types throw InputError.
  static RunConfig from_json(const Json& j);
  // Caps positive, command known, output directory writable.
  void validate() const;
};

struct CommandResult {
  Json report;
  int exit_code = 0;
  std::map<std::string, std::string> tables;  // file name -> CSV text
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInconclusive = 3;

std::shared_ptr<const BetaSystem> build_system(const RunConfig& cfg);

CommandResult cmd_expand(const RunConfig& cfg);
CommandResult cmd_entropy(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_factor(const RunConfig& cfg);
CommandResult cmd_mme(const RunConfig& cfg);
CommandResult cmd_decomp(const RunConfig& cfg);

// Validates, dispatches on cfg.command and turns errors into a report with
// exit code 2 (input) or 3 (budget). Adds schema, config and timestamp.
CommandResult execute(const RunConfig& cfg);

// Writes <command>.json and, with emit_csv, the CSV tables into cfg.out_dir.
void write_outputs(const RunConfig& cfg, const CommandResult& result);

}  // namespace obstruct

#endif  // OBSTRUCT_CLI_HPP
