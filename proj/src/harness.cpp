#include "srkpa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "srkpa/process.hpp"
#include "srkpa/rng.hpp"

namespace srkpa {

std::vector<std::string> NamedConfig::argv_flags() const {
  std::vector<std::string> out;
  for (const auto& f : base) out.push_back(f.render());
  for (const auto& f : flags) out.push_back(f.render());
  return out;
}

std::vector<Flag> base_flags(int threads) {
  return {{"verb", "4"}, {"threads", std::to_string(threads)}, {"comps", "0"}};
}

std::map<std::string, NamedConfig> builtin_configs(int threads) {
  const auto base = base_flags(threads);
  const std::vector<Flag> sw4 = {{"restart", "glue"}, {"gluecut0", "4"}, {"updateglueonprop", "1"}};
  std::vector<Flag> sw10 = sw4;
  sw10.push_back({"gluecut1", "7"});
  sw10.push_back({"gluehist", "45"});
  std::map<std::string, NamedConfig> m;
  auto put = [&](std::string name, std::vector<Flag> flags) { m[name] = {name, base, std::move(flags)}; };
  put("default", {});
  put("sw1", {{"restart", "geom"}, {"maple", "1"}, {"bva", "0"}, {"sync", "30000"}});
  put("sw2", {{"gluehist", "30"}, {"maple", "1"}, {"maxnummatrixes", "8"}, {"bva", "0"}});
  put("sw3", {{"restart", "geom"}, {"maple", "1"}, {"cachesize", "4096"}, {"cachecutoff", "3000"}});
  put("sw4", sw4);
  put("sw6", sw4);
  put("sw7", {{"gluecut0", "5"}, {"gluecut1", "7"}, {"updateglueonprop", "1"}});
  put("sw10", sw10);
  return m;
}

NamedConfig builtin_config(const std::string& name, int threads) {
  auto all = builtin_configs(threads);
  auto it = all.find(name);
  if (it == all.end()) throw InputError("unknown parameter combination '" + name + "'");
  return it->second;
}

std::vector<Flag> parse_flags(std::string_view text) {
  std::vector<std::string> tokens;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    std::string w;
    while (words >> w) tokens.push_back(w);
  }
  std::vector<Flag> flags;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (!t.starts_with("--") || t.size() == 2) throw InputError("expected --flag, got '" + t + "'");
    const auto eq = t.find('=');
    if (eq != std::string::npos) {
      flags.push_back({t.substr(2, eq - 2), t.substr(eq + 1)});
    } else if (i + 1 < tokens.size() && !tokens[i + 1].starts_with("--")) {
      flags.push_back({t.substr(2), tokens[i + 1]});
      ++i;
    } else {
      flags.push_back({t.substr(2), ""});
    }
  }
  return flags;
}

std::string render_flags_file(const NamedConfig& config) {
  std::string out = "# name=" + config.name + "\n";
  for (const auto& f : config.flags) out += f.render() + "\n";
  return out;
}

NamedConfig parse_flags_file(std::string_view text, int threads) {
  NamedConfig cfg{"custom", base_flags(threads), parse_flags(text)};
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line))
    if (line.starts_with("# name=")) cfg.name = line.substr(7);
  return cfg;
}

std::vector<std::string> build_command(const NamedConfig& config, std::string_view solver_template,
                                       const std::string& instance_path, std::uint64_t seed, double timeout) {
  std::istringstream words{std::string(solver_template)};
  std::string w;
  std::vector<std::string> argv;
  std::ostringstream timeout_text;
  timeout_text << timeout;
  while (words >> w) {
    if (w == "{flags}") {
      for (auto& f : config.argv_flags()) argv.push_back(std::move(f));
      continue;
    }
    std::string out;
    for (std::size_t i = 0; i < w.size();) {
      if (w[i] != '{') {
        out.push_back(w[i++]);
        continue;
      }
      const auto close = w.find('}', i);
      if (close == std::string::npos) throw InputError("unterminated placeholder in solver template: " + w);
      const std::string name = w.substr(i + 1, close - i - 1);
      if (name == "seed") out += std::to_string(seed);
      else if (name == "instance") out += instance_path;
      else if (name == "timeout") out += timeout_text.str();
      else throw InputError("unknown placeholder {" + name + "} in solver template");
      i = close + 1;
    }
    argv.push_back(std::move(out));
  }
  if (argv.empty()) throw InputError("empty solver template");
  return argv;
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Sat: return "SAT";
    case RunStatus::Unsat: return "UNSAT";
    case RunStatus::Timeout: return "TIMEOUT";
    case RunStatus::Error: return "ERROR";
    case RunStatus::Unknown: break;
  }
  return "UNKNOWN";
}

RunStatus run_status_from_string(std::string_view s) {
  if (s == "SAT") return RunStatus::Sat;
  if (s == "UNSAT") return RunStatus::Unsat;
  if (s == "TIMEOUT") return RunStatus::Timeout;
  if (s == "ERROR") return RunStatus::Error;
  if (s == "UNKNOWN") return RunStatus::Unknown;
  throw InputError("unknown run status '" + std::string(s) + "'");
}

std::vector<std::uint64_t> seed_schedule(std::uint64_t campaign_seed, int repetitions) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < repetitions; ++i)
    seeds.push_back(derive_seed(campaign_seed, static_cast<std::uint64_t>(i)) & 0x7fffffffu);
  return seeds;
}

std::optional<double> parse_solve_time(std::string_view output) {
  static const std::regex re(R"(^c\s.*[Tt]otal time[^:]*:\s*([0-9]+(\.[0-9]*)?([eE][-+]?[0-9]+)?))");
  std::optional<double> last;
  std::istringstream in{std::string(output)};
  std::string line;
  std::smatch m;
  while (std::getline(in, line))
    if (std::regex_search(line, m, re)) last = std::stod(m[1].str());
  return last;
}

namespace {

std::string solver_identity(std::string_view output, const std::string& program) {
  std::istringstream in{std::string(output)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.starts_with("c ")) continue;
    const auto pos = line.find("ersion");
    if (pos != std::string::npos && pos > 2 && (line[pos - 1] == 'v' || line[pos - 1] == 'V')) {
      auto text = line.substr(2);
      while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) text.pop_back();
      return text;
    }
  }
  return program;
}

}  // namespace

std::string extract_key(const SolverModel& model, const VarLayout& layout, const CipherParams& params) {
  Assignment a(layout.total());
  for (Literal l : model.assignment)
    if (var_of(l) <= layout.total()) a.set(var_of(l), l > 0);
  for (int w = 0; w < params.words(); ++w)
    for (int j = 0; j < params.word_bits; ++j)
      if (!a.get(layout.key_var(0, w, j))) throw InputError("model does not assign every key variable");
  return key_from_assignment(a, layout, params).to_hex(params.word_bits);
}

RunRecord run_once(const CampaignItem& item) {
  RunRecord rec;
  rec.instance = item.instance_token.empty() ? item.instance_path : item.instance_token;
  rec.config = item.config.name;
  rec.seed = item.seed;
  rec.repetition = item.repetition;
  const auto argv = build_command(item.config, item.solver_template, item.instance_path, item.seed, item.timeout);
  rec.solver = argv.front();
  const ProcessResult pr = run_process(argv, item.timeout, item.env);
  rec.wall_time = pr.wall_seconds;
  rec.solver = solver_identity(pr.output, argv.front());
  if (pr.timed_out) {
    rec.status = RunStatus::Timeout;
    return rec;
  }
  SolverModel model;
  try {
    model = parse_solver_output(pr.output);
  } catch (const InputError& e) {
    throw HarnessError(std::string("unparseable solver output: ") + e.what());
  }
  rec.solve_time = parse_solve_time(pr.output);
  switch (model.status) {
    case SolveStatus::Sat: rec.status = RunStatus::Sat; break;
    case SolveStatus::Unsat: rec.status = RunStatus::Unsat; break;
    default:
      rec.status = pr.exit_code == 10 ? RunStatus::Sat : pr.exit_code == 20 ? RunStatus::Unsat : RunStatus::Unknown;
  }
  if (rec.status == RunStatus::Unsat && item.spec)
    rec.anomaly = "UNSAT reported for an instance that is satisfiable by construction";
  if (rec.status == RunStatus::Sat && item.spec) {
    if (model.assignment.empty()) {
      rec.anomaly = "SAT without a model";
      return rec;
    }
    const auto layout = VarLayout::for_params(item.spec->params, item.spec->pair_count());
    try {
      rec.recovered_key = extract_key(model, layout, item.spec->params);
    } catch (const InputError& e) {
      rec.anomaly = e.what();
      return rec;
    }
    rec.verified = key_matches_pairs(*item.spec, State::from_hex(rec.recovered_key, item.spec->params));
    if (!rec.verified) rec.anomaly = "recovered key does not reproduce the ciphertexts";
  }
  return rec;
}

std::vector<RunRecord> run_campaign(const Campaign& campaign) {
  if (campaign.repetitions < 1) throw std::invalid_argument("campaign needs at least one repetition");
  const auto seeds = seed_schedule(campaign.seed, campaign.repetitions);
  std::vector<RunRecord> records(static_cast<std::size_t>(campaign.repetitions));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < campaign.repetitions; i = next++) {
      CampaignItem item = campaign.item;
      item.seed = seeds[static_cast<std::size_t>(i)];
      item.repetition = i;
      try {
        records[static_cast<std::size_t>(i)] = run_once(item);
      } catch (const std::exception& e) {
        RunRecord r;
        r.instance = item.instance_token.empty() ? item.instance_path : item.instance_token;
        r.config = item.config.name;
        r.seed = item.seed;
        r.repetition = i;
        r.status = RunStatus::Error;
        r.error = e.what();
        records[static_cast<std::size_t>(i)] = std::move(r);
      }
    }
  };
  const int workers = std::clamp(campaign.max_concurrent, 1, campaign.repetitions);
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  return records;
}

// ---------------------------------------------------------------------------
// persistence

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch == '\n' ? ' ' : ch);
  }
  return out + "\"";
}

std::string fmt_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
  return std::string(buf, end);
}

}  // namespace

std::string records_csv_header() {
  return "instance,config,repetition,seed,status,wall_time,solve_time,recovered_key,verified,anomaly,solver,error";
}

std::string to_csv_row(const RunRecord& r) {
  std::string row;
  row += csv_field(r.instance) + "," + csv_field(r.config) + "," + std::to_string(r.repetition) + "," +
         std::to_string(r.seed) + "," + std::string(to_string(r.status)) + "," + fmt_double(r.wall_time) + ",";
  if (r.solve_time) row += fmt_double(*r.solve_time);
  row += "," + r.recovered_key + "," + (r.verified ? "1" : "0") + "," + csv_field(r.anomaly) + "," +
         csv_field(r.solver) + "," + csv_field(r.error);
  return row;
}

std::string to_json_line(const RunRecord& r) {
  nlohmann::ordered_json j;
  j["instance"] = r.instance;
  j["config"] = r.config;
  j["repetition"] = r.repetition;
  j["seed"] = r.seed;
  j["status"] = std::string(to_string(r.status));
  j["wall_time"] = r.wall_time;
  j["solve_time"] = r.solve_time ? nlohmann::ordered_json(*r.solve_time) : nlohmann::ordered_json(nullptr);
  j["recovered_key"] = r.recovered_key;
  j["verified"] = r.verified;
  j["anomaly"] = r.anomaly;
  j["solver"] = r.solver;
  j["error"] = r.error;
  return j.dump();
}

RunRecord record_from_json_line(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    RunRecord r;
    r.instance = j.at("instance").get<std::string>();
    r.config = j.at("config").get<std::string>();
    r.repetition = j.at("repetition").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.status = run_status_from_string(j.at("status").get<std::string>());
    r.wall_time = j.at("wall_time").get<double>();
    if (!j.at("solve_time").is_null()) r.solve_time = j.at("solve_time").get<double>();
    r.recovered_key = j.value("recovered_key", "");
    r.verified = j.value("verified", false);
    r.anomaly = j.value("anomaly", "");
    r.solver = j.value("solver", "");
    r.error = j.value("error", "");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad run record: ") + e.what());
  }
}

void append_records_csv(const std::string& path, const std::vector<RunRecord>& records) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path);
  if (fresh) out << records_csv_header() << "\n";
  for (const auto& r : records) out << to_csv_row(r) << "\n";
}

void append_records_jsonl(const std::string& path, const std::vector<RunRecord>& records) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (const auto& r : records) out << to_json_line(r) << "\n";
}

}  // namespace srkpa
