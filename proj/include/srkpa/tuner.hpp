#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <istream>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "srkpa/harness.hpp"
#include "srkpa/pcs.hpp"

namespace srkpa {

/// What a target algorithm evaluator reports for one run.
struct TaeOutcome {
  double runtime = 0;
  bool timed_out = false;
};

/// Boundary between the tuner and whatever runs the solver. Implementations
/// must tolerate concurrent calls. Failures to run are thrown, never
/// reported as a long runtime.
class TargetEvaluator {
 public:
  virtual ~TargetEvaluator() = default;
  virtual TaeOutcome run(const Configuration& config, const std::string& instance, std::uint64_t seed,
                         double cap) = 0;
};

/// Deterministic function of (configuration, seed).
class SyntheticTae : public TargetEvaluator {
 public:
  using Surface = std::function<double(const Configuration&, std::uint64_t seed)>;
  explicit SyntheticTae(Surface f) : f_(std::move(f)) {}
  TaeOutcome run(const Configuration& config, const std::string&, std::uint64_t seed, double cap) override;

 private:
  Surface f_;
};

/// scale * (param - optimum)^2 + offset + N(0, sigma), the noise drawn from a
/// generator seeded by the configuration id and the seed.
SyntheticTae::Surface quadratic_surface(std::string param, double optimum, double scale = 100.0,
                                        double offset = 10.0, double sigma = 1.0);

/// Runs the solver through run_once. The item supplies the instance,
/// template, base flags and optional spec; configuration, seed and timeout
/// are filled per call. UNSAT, unknown and error outcomes throw HarnessError.
class SolverTae : public TargetEvaluator {
 public:
  explicit SolverTae(CampaignItem item) : item_(std::move(item)) {}
  TaeOutcome run(const Configuration& config, const std::string& instance, std::uint64_t seed, double cap) override;

 private:
  CampaignItem item_;
};

enum class EvalStatus { Ok, TimeoutCapped };
std::string_view to_string(EvalStatus s);

struct EvalResult {
  std::string config_id;
  std::string instance;
  std::size_t pool_index = 0;
  std::uint64_t seed = 0;
  double runtime = 0;  // equals cap when capped
  double cap = 0;
  EvalStatus status = EvalStatus::Ok;
  bool operator==(const EvalResult&) const = default;
};

/// One call into the TAE. Runtime at or beyond the cutoff comes back as
/// TimeoutCapped carrying the cutoff. Throws std::invalid_argument for a
/// non-positive cutoff; TAE exceptions propagate.
EvalResult evaluate(TargetEvaluator& tae, const Configuration& config, const std::string& instance,
                    std::uint64_t seed, double cutoff);

/// Replays the eval events of a journal. Unknown requests throw.
class JournalTae : public TargetEvaluator {
 public:
  explicit JournalTae(std::istream& journal);
  TaeOutcome run(const Configuration& config, const std::string& instance, std::uint64_t seed, double cap) override;

 private:
  std::map<std::tuple<std::string, std::string, std::uint64_t>, std::vector<EvalResult>> results_;
};

struct Incumbent {
  Configuration config;
  std::vector<EvalResult> support;  // by pool index
  double median = 0;
  std::size_t tae_calls = 0;  // budget spent when it became incumbent
};

struct RaceOptions {
  std::size_t budget = 500;      // TAE calls
  double cutoff = 3600.0;        // per-run limit in seconds
  double cap_factor = 2.0;       // challenger cap relative to the incumbent median
  std::size_t max_runs = 16;     // shared seeds per configuration
  std::size_t workers = 1;
  std::size_t max_stall = 1000;  // consecutive samples without any TAE call
  std::uint64_t seed = 0;
  std::vector<std::string> instances{"instance"};  // cycled over the seed pool
  std::ostream* journal = nullptr;                 // JSON lines
};

struct RaceResult {
  std::vector<Incumbent> history;     // append-only, first entry is the default
  std::vector<EvalResult> evaluations;  // every TAE call in decision order
  std::size_t tae_calls = 0;
  std::size_t challengers = 0;
};

/// Random sampling plus racing. The default configuration starts as the
/// incumbent. Each round the incumbent gets one more run on the shared pool
/// (up to max_runs), then a sampled challenger runs on the incumbent's
/// pool entries in batches of 1, 2, 4, ... with its runs capped at
/// cap_factor times the incumbent median. It is dropped as soon as its
/// median exceeds the incumbent's and replaces it only on a strictly lower
/// median over all shared entries. Decisions depend on gathered results
/// only, so the worker count never changes the outcome.
RaceResult race(const ParamSpace& space, TargetEvaluator& tae, const RaceOptions& options);

/// Pool entry i: instance i mod |instances| with seed derive_seed(seed, i)
/// truncated to 31 bits.
std::vector<std::pair<std::string, std::uint64_t>> race_pool(const RaceOptions& options);

/// Flags of the last incumbent named "aac-<first 8 id digits>".
/// Throws std::invalid_argument on an empty history.
NamedConfig export_incumbent(std::span<const Incumbent> history, int threads = 31);

/// Incumbent events of a journal as (config id, median) in order.
std::vector<std::pair<std::string, double>> journal_incumbents(std::istream& journal);

}  // namespace srkpa
