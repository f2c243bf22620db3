#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include <unistd.h>

#include "srkpa/dimacs.hpp"
#include "srkpa/harness.hpp"
#include "srkpa/process.hpp"

using namespace srkpa;
namespace fs = std::filesystem;

namespace {

const std::string kMockTemplate = std::string(MOCK_SOLVER) + " {flags} --random={seed} {instance}";

class HarnessRun : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("srkpa_harness_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    const auto p = CipherParams::small_scale(2, 2, 1, 4);
    const CnfInstance cnf = generate_instance(
        p, State::from_hex("c7", p), {State::from_hex("00", p), State::from_hex("5a", p), State::from_hex("f1", p)},
        "kx");
    path_ = (dir_ / "2-kx-3.cnf").string();
    std::ofstream(path_) << to_dimacs(cnf);
    spec_ = spec_from_metadata(cnf.metadata);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CampaignItem item(std::vector<std::string> env = {}) const {
    CampaignItem it;
    it.instance_path = path_;
    it.instance_token = spec_.token();
    it.spec = spec_;
    it.config = builtin_config("sw4");
    it.solver_template = kMockTemplate;
    it.env = std::move(env);
    it.seed = 77;
    it.timeout = 20;
    return it;
  }

  fs::path dir_;
  std::string path_;
  InstanceSpec spec_;
};

}  // namespace

TEST(Configs, FlagSetsAreVerbatim) {
  const auto all = builtin_configs();
  for (const char* name : {"default", "sw1", "sw2", "sw3", "sw4", "sw6", "sw7", "sw10"})
    EXPECT_TRUE(all.count(name)) << name;
  auto joined = [](const NamedConfig& c) {
    std::string s;
    for (const auto& f : c.argv_flags()) s += (s.empty() ? "" : " ") + f;
    return s;
  };
  EXPECT_EQ(joined(all.at("sw4")), "--verb=4 --threads=31 --comps=0 --restart=glue --gluecut0=4 --updateglueonprop=1");
  EXPECT_EQ(joined(all.at("sw1")), "--verb=4 --threads=31 --comps=0 --restart=geom --maple=1 --bva=0 --sync=30000");
  EXPECT_EQ(joined(all.at("sw10")),
            "--verb=4 --threads=31 --comps=0 --restart=glue --gluecut0=4 --updateglueonprop=1 --gluecut1=7 "
            "--gluehist=45");
  EXPECT_EQ(joined(all.at("default")), "--verb=4 --threads=31 --comps=0");
  EXPECT_EQ(builtin_config("sw4", 8).base[1].value, "8");
  EXPECT_THROW(builtin_config("sw5"), InputError);
}

TEST(Configs, ParseFlags) {
  const auto f = parse_flags("--a=1 --b 2\n--c  # trailing comment\n# --d=4\n");
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], (Flag{"a", "1"}));
  EXPECT_EQ(f[1], (Flag{"b", "2"}));
  EXPECT_EQ(f[2], (Flag{"c", ""}));
  EXPECT_THROW(parse_flags("plain"), InputError);
}

TEST(Configs, FlagsFileRoundTrip) {
  const NamedConfig c = builtin_config("sw10");
  const std::string text = render_flags_file(c);
  EXPECT_TRUE(text.starts_with("# name=sw10\n"));
  EXPECT_EQ(parse_flags_file(text), c);
}

TEST(Command, Placeholders) {
  const auto argv = build_command(builtin_config("sw4"), kDefaultSolverTemplate, "/x/i.cnf", 42, 60);
  const std::vector<std::string> want{"cryptominisat5", "--verb=4",          "--threads=31",        "--comps=0",
                                      "--restart=glue", "--gluecut0=4",      "--updateglueonprop=1", "--random=42",
                                      "/x/i.cnf"};
  EXPECT_EQ(argv, want);
  EXPECT_EQ(build_command(builtin_config("default"), "s -t {timeout} {instance}", "i", 1, 2.5).at(2), "2.5");
  EXPECT_THROW(build_command(builtin_config("sw4"), "s {bogus}", "i", 1, 1), InputError);
  EXPECT_THROW(build_command(builtin_config("sw4"), "s {seed", "i", 1, 1), InputError);
}

TEST(Seeds, ScheduleIsStableAndDistinct) {
  const auto a = seed_schedule(9, 200), b = seed_schedule(9, 200);
  EXPECT_EQ(a, b);
  EXPECT_EQ(std::set<std::uint64_t>(a.begin(), a.end()).size(), 200u);
  for (auto s : a) EXPECT_LE(s, 0x7fffffffu);
  EXPECT_NE(seed_schedule(10, 1), seed_schedule(9, 1));
}

TEST(Output, SolveTime) {
  EXPECT_EQ(parse_solve_time("c Total time (this thread) : 12.5\nc x\nc Total time (this thread) : 13.25\n"), 13.25);
  EXPECT_FALSE(parse_solve_time("s SATISFIABLE\n"));
}

TEST(Records, CsvAndJson) {
  RunRecord r;
  r.instance = "3-k6s-30";
  r.config = "sw10";
  r.seed = 12345;
  r.repetition = 3;
  r.status = RunStatus::Sat;
  r.wall_time = 1830.5;
  r.solve_time = 1830.1;
  r.recovered_key = "b25286f7d3e7b3e1";
  r.verified = true;
  r.solver = "cryptominisat5, \"5.8\"";
  const std::string row = to_csv_row(r);
  EXPECT_TRUE(row.starts_with("3-k6s-30,sw10,3,12345,SAT,"));
  EXPECT_NE(row.find("\"cryptominisat5, \"\"5.8\"\"\""), std::string::npos);
  const RunRecord back = record_from_json_line(to_json_line(r));
  EXPECT_EQ(back.instance, r.instance);
  EXPECT_EQ(back.seed, r.seed);
  EXPECT_EQ(back.status, r.status);
  EXPECT_EQ(back.solve_time, r.solve_time);
  EXPECT_EQ(back.recovered_key, r.recovered_key);
  EXPECT_EQ(back.solver, r.solver);
  EXPECT_EQ(run_status_from_string("TIMEOUT"), RunStatus::Timeout);
}

TEST(Process, CapturesOutputAndExitCode) {
  const auto r = run_process({"sh", "-c", "echo hello; exit 3"}, 10.0);
  EXPECT_EQ(r.output, "hello\n");
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_FALSE(r.timed_out);
  EXPECT_EQ(run_process({"sh", "-c", "echo $SRKPA_T"}, 10.0, {"SRKPA_T=x1"}).output, "x1\n");
}

TEST(Process, TimeoutKillsTheGroup) {
  const auto r = run_process({"sh", "-c", "sleep 30 & sleep 30"}, 0.5);
  EXPECT_TRUE(r.timed_out);
  EXPECT_LT(r.wall_seconds, 5.0);
}

TEST(Process, ClosedStdoutStillTimesOut) {
  const auto r = run_process({"sh", "-c", "exec >&-; sleep 30"}, 0.5);
  EXPECT_TRUE(r.timed_out);
  EXPECT_LT(r.wall_seconds, 5.0);
}

TEST(Process, MissingProgramThrows) {
  EXPECT_THROW(run_process({"/nonexistent/solver"}, 1.0), HarnessError);
}

TEST_F(HarnessRun, SatIsVerified) {
  const RunRecord r = run_once(item({"MOCK_TIME=3.5"}));
  EXPECT_EQ(r.status, RunStatus::Sat);
  EXPECT_TRUE(r.verified);
  EXPECT_TRUE(r.anomaly.empty()) << r.anomaly;
  EXPECT_EQ(r.recovered_key, "c7");
  EXPECT_EQ(r.solve_time, 3.5);
  EXPECT_EQ(r.effective_time(), 3.5);
  EXPECT_EQ(r.solver, "mock solver version 0.1");
  EXPECT_EQ(r.instance, "2-kx-3");
}

TEST_F(HarnessRun, FlagsReachTheSolver) {
  const CampaignItem it = item({"MOCK_MODE=unsat"});
  const auto pr = run_process(build_command(it.config, it.solver_template, it.instance_path, 5, 10), 10.0, it.env);
  EXPECT_NE(pr.output.find("c arg --gluecut0=4\n"), std::string::npos);
  EXPECT_NE(pr.output.find("c arg --random=5\n"), std::string::npos);
}

TEST_F(HarnessRun, UnsatIsAnAnomaly) {
  const RunRecord r = run_once(item({"MOCK_MODE=unsat"}));
  EXPECT_EQ(r.status, RunStatus::Unsat);
  EXPECT_FALSE(r.anomaly.empty());
}

TEST_F(HarnessRun, TimeoutIsAStatus) {
  CampaignItem it = item({"MOCK_MODE=sleep"});
  it.timeout = 0.5;
  const RunRecord r = run_once(it);
  EXPECT_EQ(r.status, RunStatus::Timeout);
  EXPECT_LT(r.wall_time, 5.0);
}

TEST_F(HarnessRun, OrphanedChildrenDoNotBlock) {
  const RunRecord r = run_once(item({"MOCK_MODE=orphan"}));
  EXPECT_EQ(r.status, RunStatus::Sat);
  EXPECT_LT(r.wall_time, 10.0);
}

TEST_F(HarnessRun, WrongKeyIsFlagged) {
  const RunRecord r = run_once(item({"MOCK_MODE=wrong"}));
  EXPECT_EQ(r.status, RunStatus::Sat);
  EXPECT_FALSE(r.verified);
  EXPECT_FALSE(r.anomaly.empty());
}

TEST_F(HarnessRun, MalformedOutputThrows) {
  EXPECT_THROW(run_once(item({"MOCK_MODE=garbage"})), HarnessError);
  EXPECT_EQ(run_once(item({"MOCK_MODE=crash"})).status, RunStatus::Unknown);
}

TEST_F(HarnessRun, CampaignKeepsOrderAndRecordsErrors) {
  Campaign c;
  c.item = item();
  c.repetitions = 4;
  c.max_concurrent = 2;
  c.seed = 3;
  const auto recs = run_campaign(c);
  ASSERT_EQ(recs.size(), 4u);
  const auto seeds = seed_schedule(3, 4);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(recs[i].repetition, i);
    EXPECT_EQ(recs[i].seed, seeds[i]);
    EXPECT_EQ(recs[i].status, RunStatus::Sat);
  }
  c.item.solver_template = "/nonexistent/solver {instance}";
  c.repetitions = 2;
  const auto bad = run_campaign(c);
  EXPECT_EQ(bad[0].status, RunStatus::Error);
  EXPECT_FALSE(bad[0].error.empty());
}

TEST_F(HarnessRun, AppendWritesHeaderOnce) {
  Campaign c;
  c.item = item();
  c.repetitions = 2;
  const auto recs = run_campaign(c);
  const std::string csv = (dir_ / "runs.csv").string();
  append_records_csv(csv, recs);
  append_records_csv(csv, recs);
  std::ifstream in(csv);
  std::string line;
  int lines = 0, headers = 0;
  while (std::getline(in, line)) {
    ++lines;
    headers += line == records_csv_header();
  }
  EXPECT_EQ(lines, 5);
  EXPECT_EQ(headers, 1);
  const std::string jsonl = (dir_ / "runs.jsonl").string();
  append_records_jsonl(jsonl, recs);
  std::ifstream jin(jsonl);
  std::getline(jin, line);
  EXPECT_EQ(record_from_json_line(line).seed, recs[0].seed);
}

TEST(ExtractKey, FromModel) {
  const auto p = CipherParams::small_scale(1, 1, 2, 4);
  const VarLayout layout = VarLayout::for_params(p, 1);
  SolverModel m;
  m.status = SolveStatus::Sat;
  // key word 0 = 0x5 (bits 0 and 2), word 1 = 0xa
  for (int v = 1; v <= layout.total(); ++v) m.assignment.push_back(-v);
  m.assignment[layout.key_var(0, 0, 0) - 1] *= -1;
  m.assignment[layout.key_var(0, 0, 2) - 1] *= -1;
  m.assignment[layout.key_var(0, 1, 1) - 1] *= -1;
  m.assignment[layout.key_var(0, 1, 3) - 1] *= -1;
  EXPECT_EQ(extract_key(m, layout, p), "5a");
  m.assignment.resize(2);
  EXPECT_THROW(extract_key(m, layout, p), InputError);
}
