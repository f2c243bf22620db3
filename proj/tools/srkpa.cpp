// srkpa: small-scale AES known-plaintext SAT instances, solver runs,
// statistics and parameter tuning.
//
// Exit codes: 0 ok, 2 usage, 3 malformed input, 4 file I/O, 5 solver
// harness failure, 6 verification failed, 7 internal error. The `solve`
// subcommand follows SAT-competition convention instead (10 SAT, 20 UNSAT,
// 0 unknown).

#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "srkpa/cipher.hpp"
#include "srkpa/dimacs.hpp"
#include "srkpa/encoder.hpp"
#include "srkpa/errors.hpp"
#include "srkpa/harness.hpp"
#include "srkpa/pcs.hpp"
#include "srkpa/rng.hpp"
#include "srkpa/solver.hpp"
#include "srkpa/stats.hpp"
#include "srkpa/tuner.hpp"

namespace {

using namespace srkpa;
using json = nlohmann::json;

enum Exit { kOk = 0, kUsage = 2, kInput = 3, kIo = 4, kHarness = 5, kVerify = 6, kInternal = 7 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + path);
}

std::string self_exe() {
  std::error_code ec;
  auto p = std::filesystem::read_symlink("/proc/self/exe", ec);
  return ec ? std::string("srkpa") : p.string();
}

// Keys used in the experiments, 64-bit blocks only.
const std::map<std::string, std::string>& named_keys() {
  static const std::map<std::string, std::string> keys{
      {"k3", "0123456789abcdef"}, {"k4", "0101010101010101"}, {"k6", "b25286f7d3e7b3e1"}, {"k6s", "b25286f7d3e7b3e1"}};
  return keys;
}

struct CipherArgs {
  int rounds = 3, rows = 4, cols = 4, word_bits = 4;
  std::string config_file;

  void add(CLI::App* cmd) {
    cmd->add_option("-n,--rounds", rounds, "Rounds")->capture_default_str();
    cmd->add_option("-r,--rows", rows, "State rows")->capture_default_str();
    cmd->add_option("-c,--cols", cols, "State columns")->capture_default_str();
    cmd->add_option("-e,--word-bits", word_bits, "Bits per word (4 or 8)")->capture_default_str();
    cmd->add_option("--config", config_file, "JSON config file (cipher overrides, solver template)");
  }
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

unsigned json_uint(const json& v) {
  if (v.is_number_unsigned()) return v.get<unsigned>();
  if (v.is_string()) return static_cast<unsigned>(std::stoul(v.get<std::string>(), nullptr, 0));
  throw InputError("config: expected a number, got " + v.dump());
}

CipherParams make_params(const CipherArgs& a, CLI::App* cmd) {
  const json cfg = load_config(a.config_file);
  const json cj = cfg.value("cipher", json::object());
  auto pick = [&](const char* flag, const char* key, int cli_value) {
    if (cmd->count(flag) == 0 && cj.contains(key)) return static_cast<int>(json_uint(cj[key]));
    return cli_value;
  };
  CipherParams p;
  try {
    p = CipherParams::small_scale(pick("--rounds", "rounds", a.rounds), pick("--rows", "rows", a.rows),
                                  pick("--cols", "cols", a.cols), pick("--word-bits", "word_bits", a.word_bits));
    if (cj.contains("modulus")) p.modulus = json_uint(cj["modulus"]);
    if (cj.contains("mix")) {
      p.mix_matrix.clear();
      for (const auto& row : cj["mix"]) {
        std::vector<Word> r;
        for (const auto& v : row) r.push_back(static_cast<Word>(json_uint(v)));
        p.mix_matrix.push_back(std::move(r));
      }
    }
    if (cj.contains("affine_rows")) {
      p.affine_rows.clear();
      for (const auto& v : cj["affine_rows"]) p.affine_rows.push_back(json_uint(v));
    }
    if (cj.contains("affine_const")) p.affine_const = static_cast<Word>(json_uint(cj["affine_const"]));
    if (cj.contains("rcon_base")) p.rcon_base = static_cast<Word>(json_uint(cj["rcon_base"]));
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("cipher parameters: ") + e.what());
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  return p;
}

std::string solver_template(const std::string& cli_value, const std::string& config_file) {
  std::string t = cli_value;
  if (t.empty()) t = load_config(config_file).value("solver", json::object()).value("template", "");
  if (t.empty()) t = std::string(kDefaultSolverTemplate);
  if (t == "internal") t = self_exe() + " solve {flags} --random={seed} --timeout={timeout} {instance}";
  return t;
}

int config_threads(int cli_value, bool given, const std::string& config_file) {
  if (given) return cli_value;
  return load_config(config_file).value("solver", json::object()).value("threads", cli_value);
}

struct KeyArg {
  std::string key = "k3";
  std::string token;

  State resolve(const CipherParams& p, std::string* token_out = nullptr) const {
    const auto it = named_keys().find(key);
    if (token_out) *token_out = !token.empty() ? token : it != named_keys().end() ? key : "kx";
    return State::from_hex(it != named_keys().end() ? it->second : key, p);
  }
};

State random_state(const CipherParams& p, std::mt19937_64& rng) {
  State s(p.rows, p.cols);
  std::uniform_int_distribution<int> word(0, (1 << p.word_bits) - 1);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<Word>(word(rng));
  return s;
}

std::string bytes_hex(std::string_view bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (unsigned char b : bytes) {
    out += digits[b >> 4];
    out += digits[b & 15];
  }
  return out;
}

std::string plaintext_hex(const std::string& value, bool ascii) { return ascii ? bytes_hex(value) : value; }

std::vector<State> text_windows(const std::string& text, const CipherParams& p, int count) {
  if (p.block_bits() % 8) throw UsageError("--text-file needs a block size that is a whole number of bytes");
  const std::size_t width = static_cast<std::size_t>(p.block_bits() / 8);
  std::vector<State> out;
  std::set<std::string> seen;
  for (std::size_t off = 0; off + width <= text.size() && static_cast<int>(out.size()) < count; off += width) {
    const std::string hex = bytes_hex(std::string_view(text).substr(off, width));
    if (seen.insert(hex).second) out.push_back(State::from_hex(hex, p));
  }
  if (static_cast<int>(out.size()) < count)
    throw InputError("text file yields only " + std::to_string(out.size()) + " distinct blocks");
  return out;
}

struct LoadedInstance {
  CnfInstance cnf;
  InstanceSpec spec;
};

LoadedInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  LoadedInstance li{read_dimacs(in), {}};
  Metadata meta = li.cnf.metadata;
  if (li.cnf.secret_key_hex) meta.emplace_back("key", *li.cnf.secret_key_hex);
  li.spec = spec_from_metadata(meta);
  return li;
}

std::string joined_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

// ---------------------------------------------------------------------------

int cmd_encrypt(const CipherParams& p, const KeyArg& key, const std::string& text, bool ascii, bool decrypt) {
  const State k = key.resolve(p);
  const State in = State::from_hex(plaintext_hex(text, ascii), p);
  const KeyMaterial km = expand_key(k, p);
  const State out = decrypt ? decrypt_block(in, km, p) : encrypt_block(in, km, p).ciphertext;
  std::cout << out.to_hex(p.word_bits) << "\n";
  return kOk;
}

struct GenArgs {
  KeyArg key;
  int pairs = 1;
  std::uint64_t seed = 1;
  std::vector<std::string> plaintexts;
  bool ascii = false;
  std::string text_file;
  std::string out;
  bool include_key = false;
  int workers = 1;
};

int cmd_gen(const CipherParams& p, const GenArgs& g, const std::string& invocation) {
  std::string token;
  const State key = g.key.resolve(p, &token);
  std::vector<State> pts;
  if (!g.plaintexts.empty()) {
    for (const auto& t : g.plaintexts) pts.push_back(State::from_hex(plaintext_hex(t, g.ascii), p));
  } else if (!g.text_file.empty()) {
    pts = text_windows(read_file(g.text_file), p, g.pairs);
  } else {
    std::mt19937_64 rng(derive_seed(g.seed, 0));
    std::set<std::string> seen;
    while (static_cast<int>(pts.size()) < g.pairs) {
      State s = random_state(p, rng);
      if (seen.insert(s.to_hex(p.word_bits)).second) pts.push_back(std::move(s));
    }
  }
  EncoderOptions eo;
  eo.workers = g.workers;
  CnfInstance cnf;
  try {
    cnf = generate_instance(p, key, pts, token, eo);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::string cnf_path = g.out;
  if (!cnf_path.ends_with(".cnf")) cnf_path += ".cnf";
  const std::string json_path = cnf_path.substr(0, cnf_path.size() - 4) + ".json";
  {
    std::ofstream out(cnf_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + cnf_path);
    write_dimacs(out, cnf, g.include_key);
    if (!out) throw IoError("cannot write " + cnf_path);
  }
  nlohmann::ordered_json meta;
  meta["token"] = cnf.token;
  meta["num_vars"] = cnf.num_vars;
  meta["num_clauses"] = cnf.num_clauses();
  meta["density"] = cnf.density();
  meta["key"] = key.to_hex(p.word_bits);
  meta["seed"] = g.seed;
  meta["cnf"] = cnf_path;
  meta["invocation"] = invocation;
  nlohmann::ordered_json m;
  for (const auto& [k, v] : cnf.metadata) m[k] = v;
  meta["metadata"] = m;
  write_file(json_path, meta.dump(2) + "\n");
  std::cout << cnf.token << " L=" << cnf.num_vars << " N=" << cnf.num_clauses() << " density=" << cnf.density()
            << " -> " << cnf_path << "\n";
  return kOk;
}

int cmd_solve(const std::string& path, double timeout, std::size_t max_clauses) {
  const auto start = std::chrono::steady_clock::now();
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  const CnfInstance cnf = read_dimacs(in);
  SolveOptions so;
  so.max_clauses = max_clauses;
  if (timeout > 0) so.time_limit = timeout;
  std::cout << "c srkpa internal CDCL solver\n";
  SolveResult r;
  try {
    r = solve_internal(cnf.clauses, cnf.num_vars, so);
  } catch (const std::length_error& e) {
    throw UsageError(e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "c conflicts " << r.stats.conflicts << " decisions " << r.stats.decisions << "\n";
  std::cout << "c Total time (this thread) : " << secs << "\n";
  if (r.status == SolveStatus::Sat) {
    std::cout << "s SATISFIABLE\n";
    const auto lits = r.model.to_literals();
    std::string line = "v";
    for (const Literal l : lits) {
      line += " " + std::to_string(l);
      if (line.size() > 72) {
        std::cout << line << "\n";
        line = "v";
      }
    }
    std::cout << line << " 0\n";
    return 10;
  }
  if (r.status == SolveStatus::Unsat) {
    std::cout << "s UNSATISFIABLE\n";
    return 20;
  }
  std::cout << "s INDETERMINATE\n";
  return 0;
}

struct BenchArgs {
  std::string instance;
  std::string config_name = "default";
  std::string flags_file;
  int reps = 1;
  double timeout = 3600;
  int jobs = 1;
  std::uint64_t seed = 1;
  std::string solver;
  int threads = 31;
  std::string csv, jsonl, summary;
};

NamedConfig resolve_config(const std::string& name, const std::string& flags_file, int threads) {
  if (!flags_file.empty()) return parse_flags_file(read_file(flags_file), threads);
  return builtin_config(name, threads);
}

int cmd_bench(const BenchArgs& b, const std::string& tmpl, int threads) {
  const LoadedInstance li = load_instance(b.instance);
  Campaign c;
  c.item.instance_path = b.instance;
  c.item.instance_token = li.spec.token();
  c.item.spec = li.spec;
  c.item.config = resolve_config(b.config_name, b.flags_file, threads);
  c.item.solver_template = tmpl;
  c.item.timeout = b.timeout;
  c.repetitions = b.reps;
  c.max_concurrent = b.jobs;
  c.seed = b.seed;
  const auto records = run_campaign(c);
  if (!b.csv.empty()) append_records_csv(b.csv, records);
  if (!b.jsonl.empty()) append_records_jsonl(b.jsonl, records);
  int failures = 0;
  for (const auto& r : records) {
    std::cerr << r.instance << " " << r.config << " seed=" << r.seed << " " << to_string(r.status)
              << " t=" << r.effective_time() << (r.recovered_key.empty() ? "" : " key=" + r.recovered_key)
              << (r.anomaly.empty() ? "" : " anomaly: " + r.anomaly) << (r.error.empty() ? "" : " error: " + r.error)
              << "\n";
    if (r.status == RunStatus::Error) ++failures;
    if (r.status == RunStatus::Sat && !r.verified) ++failures;
  }
  std::string table;
  try {
    table = to_table({summarize_runs(records, c.item.instance_token + "-" + c.item.config.name)});
  } catch (const std::invalid_argument&) {
    table = "no successful run\n";
  }
  std::cout << table;
  if (!b.summary.empty()) write_file(b.summary, table);
  if (failures == b.reps && failures > 0) return kHarness;
  return failures ? kVerify : kOk;
}

struct TuneArgs {
  std::string pcs;
  std::vector<std::string> instances;
  std::size_t budget = 500;
  std::size_t workers = 1;
  double cutoff = 3600;
  std::size_t max_runs = 16;
  double cap_factor = 2.0;
  std::uint64_t seed = 1;
  std::string journal, export_path, replay, synthetic, solver;
  int threads = 31;
};

int cmd_tune(const TuneArgs& t, const std::string& tmpl, int threads) {
  const ParamSpace space = parse_pcs(read_file(t.pcs));
  RaceOptions ro;
  ro.budget = t.budget;
  ro.workers = t.workers;
  ro.cutoff = t.cutoff;
  ro.max_runs = t.max_runs;
  ro.cap_factor = t.cap_factor;
  ro.seed = t.seed;
  if (!t.instances.empty()) ro.instances = t.instances;

  std::unique_ptr<TargetEvaluator> tae;
  std::ifstream replay_in;
  if (!t.replay.empty()) {
    replay_in.open(t.replay);
    if (!replay_in) throw IoError("cannot read " + t.replay);
    tae = std::make_unique<JournalTae>(replay_in);
  } else if (!t.synthetic.empty()) {
    const auto eq = t.synthetic.find('=');
    if (eq == std::string::npos) throw UsageError("--synthetic expects PARAM=OPTIMUM");
    const std::string param = t.synthetic.substr(0, eq);
    if (!space.find(param)) throw UsageError("--synthetic: '" + param + "' is not in the PCS");
    tae = std::make_unique<SyntheticTae>(quadratic_surface(param, std::stod(t.synthetic.substr(eq + 1))));
  } else {
    if (t.instances.empty()) throw UsageError("tune needs --instance (or --synthetic / --replay)");
    CampaignItem item;
    item.config = NamedConfig{"aac", base_flags(threads), {}};
    item.solver_template = tmpl;
    item.spec = load_instance(t.instances.front()).spec;
    if (t.instances.size() > 1) item.spec.reset();  // per-instance specs are not tracked
    tae = std::make_unique<SolverTae>(item);
  }

  std::ofstream journal;
  if (!t.journal.empty()) {
    journal.open(t.journal, std::ios::trunc);
    if (!journal) throw IoError("cannot write " + t.journal);
    ro.journal = &journal;
  }
  const RaceResult res = race(space, *tae, ro);
  for (const auto& inc : res.history) {
    std::cout << "incumbent " << inc.config.id() << " median=" << inc.median << " runs=" << inc.support.size()
              << " after=" << inc.tae_calls << " ";
    for (const auto& f : inc.config.flags()) std::cout << " " << f.render();
    std::cout << "\n";
  }
  std::cout << "tae_calls=" << res.tae_calls << " challengers=" << res.challengers << "\n";
  const NamedConfig exported = export_incumbent(res.history, threads);
  if (!t.export_path.empty()) write_file(t.export_path, render_flags_file(exported));
  return kOk;
}

int cmd_verify(const std::string& instance, const std::string& model_file, const std::string& key_hex) {
  const LoadedInstance li = load_instance(instance);
  const CipherParams& p = li.spec.params;
  State key;
  if (!key_hex.empty()) {
    const auto it = named_keys().find(key_hex);
    key = State::from_hex(it != named_keys().end() ? it->second : key_hex, p);
  } else {
    const SolverModel m = parse_solver_output(read_file(model_file));
    if (m.status != SolveStatus::Sat) {
      std::cout << "failed: solver output is " << to_string(m.status) << "\n";
      return kVerify;
    }
    Assignment a(li.cnf.num_vars);
    for (const Literal l : m.assignment)
      if (l != 0 && std::abs(l) <= li.cnf.num_vars) a.set(std::abs(l), l > 0);
    if (!a.complete()) {
      std::cout << "failed: model does not assign every variable\n";
      return kVerify;
    }
    const CheckResult cr = check_assignment(li.cnf.clauses, li.cnf.num_vars, a);
    if (!cr.satisfied) {
      std::cout << "failed: model falsifies clause " << cr.first_falsified.value_or(0) << "\n";
      return kVerify;
    }
    key = key_from_assignment(a, VarLayout::for_params(p, li.spec.pair_count()), p);
  }
  if (!key_matches_pairs(li.spec, key)) {
    std::cout << "failed: key " << key.to_hex(p.word_bits) << " does not reproduce the ciphertexts\n";
    return kVerify;
  }
  std::cout << "verified: key " << key.to_hex(p.word_bits) << "\n";
  return kOk;
}

int cmd_configs(const std::string& write_name, const std::string& path, int threads) {
  if (!write_name.empty()) {
    if (path.empty()) throw UsageError("--write needs --out");
    write_file(path, render_flags_file(builtin_config(write_name, threads)));
    return kOk;
  }
  for (const auto& [name, cfg] : builtin_configs(threads)) {
    std::cout << name;
    for (const auto& f : cfg.argv_flags()) std::cout << " " << f;
    std::cout << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small-scale AES known-plaintext SAT instances and solver experiments"};
  app.require_subcommand(1);
  std::function<int()> action;

  // encrypt / decrypt
  CipherArgs enc_c, dec_c;
  KeyArg enc_k, dec_k;
  std::string enc_text, dec_text;
  bool enc_ascii = false;
  auto* enc = app.add_subcommand("encrypt", "Encrypt one block");
  enc_c.add(enc);
  enc->add_option("-k,--key", enc_k.key, "Key hex or k3/k4/k6/k6s")->capture_default_str();
  enc->add_option("-p,--plaintext", enc_text, "Plaintext hex (ASCII with --ascii)")->required();
  enc->add_flag("--ascii", enc_ascii, "Treat the plaintext as ASCII bytes");
  enc->callback([&] { action = [&] { return cmd_encrypt(make_params(enc_c, enc), enc_k, enc_text, enc_ascii, false); }; });
  auto* dec = app.add_subcommand("decrypt", "Decrypt one block");
  dec_c.add(dec);
  dec->add_option("-k,--key", dec_k.key, "Key hex or k3/k4/k6/k6s")->capture_default_str();
  dec->add_option("-x,--ciphertext", dec_text, "Ciphertext hex")->required();
  dec->callback([&] { action = [&] { return cmd_encrypt(make_params(dec_c, dec), dec_k, dec_text, false, true); }; });

  // gen
  CipherArgs gen_c;
  GenArgs g;
  auto* gen = app.add_subcommand("gen", "Write a known-plaintext DIMACS instance and its metadata JSON");
  gen_c.add(gen);
  gen->add_option("-k,--key", g.key.key, "Key hex or k3/k4/k6/k6s")->capture_default_str();
  gen->add_option("--key-token", g.key.token, "Key label used in the instance token");
  gen->add_option("-P,--pairs", g.pairs, "Number of text pairs")->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--seed", g.seed, "Seed for random plaintexts")->capture_default_str();
  gen->add_option("--plaintext", g.plaintexts, "Explicit plaintexts (repeatable)");
  gen->add_flag("--ascii", g.ascii, "Explicit plaintexts are ASCII");
  gen->add_option("--text-file", g.text_file, "Take plaintexts from consecutive blocks of this file");
  gen->add_option("-o,--out", g.out, "Output path (.cnf; .json written alongside)")->required();
  gen->add_flag("--include-key", g.include_key, "Write the key as a DIMACS comment");
  gen->add_option("-j,--workers", g.workers, "Encoder threads")->capture_default_str();
  gen->callback([&] {
    action = [&] { return cmd_gen(make_params(gen_c, gen), g, joined_args(argc, argv)); };
  });

  // solve
  std::string solve_path;
  double solve_timeout = 0;
  std::uint64_t solve_random = 0;
  std::size_t solve_max = 200000;
  auto* solve = app.add_subcommand("solve", "Internal CDCL solver with DIMACS/SAT-competition output");
  solve->allow_extras();
  solve->add_option("instance", solve_path, "DIMACS file")->required();
  solve->add_option("--timeout", solve_timeout, "Seconds, 0 for none");
  solve->add_option("--random", solve_random, "Accepted for template compatibility");
  solve->add_option("--max-clauses", solve_max, "Refuse larger instances")->capture_default_str();
  solve->callback([&] { action = [&] { return cmd_solve(solve_path, solve_timeout, solve_max); }; });

  // bench
  BenchArgs b;
  std::string bench_config;
  auto* bench = app.add_subcommand("bench", "Run a solver repeatedly on one instance");
  bench->add_option("-i,--instance", b.instance, "DIMACS file written by gen")->required();
  bench->add_option("--config-name", b.config_name, "Builtin parameter combination")->capture_default_str();
  bench->add_option("--flags-file", b.flags_file, "Flags file instead of a builtin combination");
  bench->add_option("--reps", b.reps, "Repetitions")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--timeout", b.timeout, "Seconds per run")->capture_default_str();
  bench->add_option("-j,--jobs", b.jobs, "Concurrent runs")->capture_default_str();
  bench->add_option("--seed", b.seed, "Campaign seed")->capture_default_str();
  bench->add_option("--solver", b.solver, "Command template, or 'internal'");
  bench->add_option("--threads", b.threads, "Solver --threads value")->capture_default_str();
  bench->add_option("--config", bench_config, "JSON config file");
  bench->add_option("--csv", b.csv, "Append run records to this CSV");
  bench->add_option("--jsonl", b.jsonl, "Append run records to this JSON-lines file");
  bench->add_option("--summary", b.summary, "Write the summary table here");
  bench->callback([&] {
    action = [&] {
      const int threads = config_threads(b.threads, bench->count("--threads") > 0, bench_config);
      return cmd_bench(b, solver_template(b.solver, bench_config), threads);
    };
  });

  // tune
  TuneArgs t;
  std::string tune_config;
  auto* tune = app.add_subcommand("tune", "Race sampled solver configurations from a PCS file");
  tune->add_option("--pcs", t.pcs, "Parameter configuration space file")->required();
  tune->add_option("-i,--instance", t.instances, "DIMACS instances (repeatable)");
  tune->add_option("--budget", t.budget, "Solver evaluations")->capture_default_str();
  tune->add_option("-j,--workers", t.workers, "Concurrent evaluations")->capture_default_str();
  tune->add_option("--cutoff", t.cutoff, "Seconds per evaluation")->capture_default_str();
  tune->add_option("--max-runs", t.max_runs, "Seeds per configuration")->capture_default_str();
  tune->add_option("--cap-factor", t.cap_factor, "Challenger cap over the incumbent median")->capture_default_str();
  tune->add_option("--seed", t.seed, "Tuner seed")->capture_default_str();
  tune->add_option("--journal", t.journal, "Write the JSON-lines journal here");
  tune->add_option("--export", t.export_path, "Write the final incumbent as a flags file");
  tune->add_option("--replay", t.replay, "Take results from an earlier journal");
  tune->add_option("--synthetic", t.synthetic, "PARAM=OPT: quadratic test surface instead of a solver");
  tune->add_option("--solver", t.solver, "Command template, or 'internal'");
  tune->add_option("--threads", t.threads, "Solver --threads value")->capture_default_str();
  tune->add_option("--config", tune_config, "JSON config file");
  tune->callback([&] {
    action = [&] {
      const int threads = config_threads(t.threads, tune->count("--threads") > 0, tune_config);
      return cmd_tune(t, solver_template(t.solver, tune_config), threads);
    };
  });

  // verify
  std::string v_inst, v_model, v_key;
  auto* verify = app.add_subcommand("verify", "Check a solver model or a key against an instance");
  verify->add_option("-i,--instance", v_inst, "DIMACS file written by gen")->required();
  auto* vm = verify->add_option("-m,--model", v_model, "Solver output file");
  auto* vk = verify->add_option("-k,--key", v_key, "Key hex or k3/k4/k6/k6s");
  vm->excludes(vk);
  verify->callback([&] {
    action = [&] {
      if (v_model.empty() && v_key.empty()) throw UsageError("verify needs --model or --key");
      return cmd_verify(v_inst, v_model, v_key);
    };
  });

  // configs
  std::string cfg_write, cfg_out;
  int cfg_threads = 31;
  auto* configs = app.add_subcommand("configs", "List builtin parameter combinations");
  configs->add_option("--write", cfg_write, "Write this combination as a flags file");
  configs->add_option("-o,--out", cfg_out, "Flags file path");
  configs->add_option("--threads", cfg_threads, "Solver --threads value")->capture_default_str();
  configs->callback([&] { action = [&] { return cmd_configs(cfg_write, cfg_out, cfg_threads); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << "srkpa: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "srkpa: " << e.what() << "\n";
    return kInput;
  } catch (const IoError& e) {
    std::cerr << "srkpa: " << e.what() << "\n";
    return kIo;
  } catch (const HarnessError& e) {
    std::cerr << "srkpa: " << e.what() << "\n";
    return kHarness;
  } catch (const std::exception& e) {
    std::cerr << "srkpa: internal error: " << e.what() << "\n";
    return kInternal;
  }
}
