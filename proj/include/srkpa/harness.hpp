#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srkpa/dimacs.hpp"
#include "srkpa/encoder.hpp"

namespace srkpa {

/// One solver command-line option, rendered as --name=value (or --name).
struct Flag {
  std::string name;
  std::string value;

  std::string render() const { return value.empty() ? "--" + name : "--" + name + "=" + value; }
  bool operator==(const Flag&) const = default;
};

/// A named solver parameter combination. `base` holds the options set for
/// every run (verbosity, thread count, component handling); `flags` the
/// combination itself. Rendering keeps the order: base first.
struct NamedConfig {
  std::string name;
  std::vector<Flag> base;
  std::vector<Flag> flags;

  std::vector<std::string> argv_flags() const;
  bool operator==(const NamedConfig&) const = default;
};

/// --verb=4 --threads=<threads> --comps=0
std::vector<Flag> base_flags(int threads = 31);

/// default, sw1, sw2, sw3, sw4, sw6, sw7 and sw10 (sw4 plus gluecut1 and
/// gluehist). sw3 and sw4 were measured with a solver patched to use the
/// same settings on all threads; that patch lives on the solver side.
std::map<std::string, NamedConfig> builtin_configs(int threads = 31);
/// Throws InputError for unknown names.
NamedConfig builtin_config(const std::string& name, int threads = 31);

/// Parses "--a=1 --b 2 --c" style text (whitespace or newline separated,
/// `#` starts a comment). Throws InputError.
std::vector<Flag> parse_flags(std::string_view text);
/// Flags file: `# name=<name>` line then one rendered flag per line.
std::string render_flags_file(const NamedConfig& config);
NamedConfig parse_flags_file(std::string_view text, int threads = 31);

/// Substitutes {flags} (expands to one argument per flag), {seed},
/// {instance} and {timeout} in a whitespace-separated template. Any other
/// {placeholder} throws InputError.
std::vector<std::string> build_command(const NamedConfig& config, std::string_view solver_template,
                                       const std::string& instance_path, std::uint64_t seed, double timeout);

constexpr std::string_view kDefaultSolverTemplate = "cryptominisat5 {flags} --random={seed} {instance}";

enum class RunStatus { Sat, Unsat, Unknown, Timeout, Error };
std::string_view to_string(RunStatus s);
RunStatus run_status_from_string(std::string_view s);

struct RunRecord {
  std::string instance;
  std::string config;
  std::uint64_t seed = 0;
  int repetition = 0;
  RunStatus status = RunStatus::Unknown;
  double wall_time = 0.0;
  std::optional<double> solve_time;  // as reported by the solver
  std::string recovered_key;
  bool verified = false;
  std::string anomaly;
  std::string solver;  // version line or program name
  std::string error;

  /// Solver-reported time when available, wall time otherwise.
  double effective_time() const { return solve_time.value_or(wall_time); }
};

struct CampaignItem {
  std::string instance_path;
  std::string instance_token;
  std::optional<InstanceSpec> spec;  // enables key extraction and verification
  NamedConfig config;
  std::string solver_template{kDefaultSolverTemplate};
  std::vector<std::string> env;
  std::uint64_t seed = 0;
  int repetition = 0;
  double timeout = 3600.0;
};

struct Campaign {
  CampaignItem item;  // seed and repetition are filled per run
  int repetitions = 1;
  int max_concurrent = 1;
  std::uint64_t seed = 0;
};

/// Distinct per-run solver seeds derived from the campaign seed.
std::vector<std::uint64_t> seed_schedule(std::uint64_t campaign_seed, int repetitions);

/// Runs one solver process. Timeouts are a status, not an error; a process
/// that cannot start or whose output cannot be parsed throws HarnessError.
RunRecord run_once(const CampaignItem& item);

/// Runs `repetitions` processes, at most `max_concurrent` at a time.
/// Records come back in repetition order; failures are recorded per run
/// with status Error.
std::vector<RunRecord> run_campaign(const Campaign& campaign);

/// Round-key-0 bits of a SAT model as hex. Throws InputError when the model
/// does not assign every key variable.
std::string extract_key(const SolverModel& model, const VarLayout& layout, const CipherParams& params);

/// Last "Total time" figure printed in solver comment lines, if any.
std::optional<double> parse_solve_time(std::string_view output);

std::string records_csv_header();
std::string to_csv_row(const RunRecord& r);
std::string to_json_line(const RunRecord& r);
RunRecord record_from_json_line(std::string_view line);
/// Appends records; writes the CSV header when the file is new or empty.
void append_records_csv(const std::string& path, const std::vector<RunRecord>& records);
void append_records_jsonl(const std::string& path, const std::vector<RunRecord>& records);

}  // namespace srkpa
