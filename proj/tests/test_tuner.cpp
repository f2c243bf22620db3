#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "srkpa/tuner.hpp"

using namespace srkpa;

namespace {

const char* kPaperPcs =
    "gluehist [40, 250] [50]i\n"
    "gluecut0 [1, 6] [3]i\n"
    "gluecut1 [5, 9] [5]i\n"
    "adjustglue [0.3, 0.9] [0.7]\n"
    "freq {0.0, 0.1, 0.2, 0.3, 0.4} [0.0]\n";

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

class Failing : public TargetEvaluator {
 public:
  TaeOutcome run(const Configuration&, const std::string&, std::uint64_t, double) override {
    throw HarnessError("cannot start solver");
  }
};

RaceOptions quick(std::uint64_t seed, std::size_t budget = 300) {
  RaceOptions o;
  o.seed = seed;
  o.budget = budget;
  o.cutoff = 1000;
  return o;
}

}  // namespace

TEST(Evaluate, ConstantAndCapped) {
  const ParamSpace s = parse_pcs(kPaperPcs);
  const Configuration c = default_config(s);
  SyntheticTae seven([](const Configuration&, std::uint64_t) { return 7.0; });
  const EvalResult r = evaluate(seven, c, "inst", 5, 100);
  EXPECT_EQ(r.status, EvalStatus::Ok);
  EXPECT_DOUBLE_EQ(r.runtime, 7.0);
  EXPECT_EQ(r.config_id, c.id());
  SyntheticTae slow([](const Configuration&, std::uint64_t) { return 200.0; });
  const EvalResult capped = evaluate(slow, c, "inst", 5, 100);
  EXPECT_EQ(capped.status, EvalStatus::TimeoutCapped);
  EXPECT_DOUBLE_EQ(capped.runtime, 100.0);
  EXPECT_DOUBLE_EQ(capped.cap, 100.0);
  EXPECT_THROW(evaluate(seven, c, "inst", 5, 0), std::invalid_argument);
}

TEST(Evaluate, FailuresPropagate) {
  const ParamSpace s = parse_pcs(kPaperPcs);
  Failing f;
  EXPECT_THROW(evaluate(f, default_config(s), "inst", 1, 10), HarnessError);
  EXPECT_THROW(race(s, f, quick(1, 10)), HarnessError);
}

TEST(Evaluate, QuadraticSurfaceIsDeterministic) {
  const ParamSpace s = parse_pcs(kPaperPcs);
  SyntheticTae tae(quadratic_surface("gluecut0", 4));
  const Configuration c = default_config(s);
  EXPECT_EQ(evaluate(tae, c, "i", 9, 1000), evaluate(tae, c, "i", 9, 1000));
  EXPECT_NEAR(evaluate(tae, c, "i", 9, 1000).runtime, 110.0, 6.0);
}

TEST(Race, SingleConfigurationSpace) {
  const ParamSpace s = parse_pcs("k [3, 3] [3]i\n");
  SyntheticTae tae([](const Configuration&, std::uint64_t seed) { return 1.0 + double(seed % 7); });
  auto o = quick(1, 50);
  o.max_stall = 20;
  const RaceResult r = race(s, tae, o);
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_EQ(r.history.back().config.get("k"), "3");
  EXPECT_LE(r.tae_calls, 50u);
}

TEST(Race, DefaultComesFirstAndBudgetHolds) {
  const ParamSpace s = parse_pcs(kPaperPcs);
  SyntheticTae tae(quadratic_surface("gluecut0", 4));
  for (std::size_t budget : {1u, 2u, 7u, 120u}) {
    const RaceResult r = race(s, tae, quick(3, budget));
    ASSERT_FALSE(r.evaluations.empty());
    EXPECT_EQ(r.evaluations.front().config_id, default_config(s).id());
    EXPECT_EQ(r.history.front().config.provenance, Provenance::Default);
    EXPECT_LE(r.tae_calls, budget);
    EXPECT_EQ(r.evaluations.size(), r.tae_calls);
    for (const auto& e : r.evaluations) EXPECT_LE(e.runtime, e.cap);
  }
  EXPECT_EQ(race(s, tae, quick(3, 1)).history.size(), 1u);
}

TEST(Race, TransitionsStrictlyImproveOnSharedSeeds) {
  const ParamSpace s = parse_pcs(kPaperPcs);
  SyntheticTae tae(quadratic_surface("gluecut0", 4));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const RaceResult r = race(s, tae, quick(seed, 400));
    std::map<std::pair<std::string, std::size_t>, double> latest;
    std::size_t idx = 0;
    for (std::size_t h = 1; h < r.history.size(); ++h) {
      // replay evaluations up to the promotion
      while (idx < r.evaluations.size() && idx < r.history[h].tae_calls) {
        latest[{r.evaluations[idx].config_id, r.evaluations[idx].pool_index}] = r.evaluations[idx].runtime;
        ++idx;
      }
      const auto& now = r.history[h];
      const std::string prev = r.history[h - 1].config.id();
      std::vector<double> prev_times;
      for (const auto& e : now.support) prev_times.push_back(latest.at({prev, e.pool_index}));
      EXPECT_LT(now.median, median(prev_times)) << "seed " << seed << " transition " << h;
    }
  }
}

TEST(Race, CappedRunsStayAtCap) {
  const ParamSpace s = parse_pcs(kPaperPcs);
  SyntheticTae tae(quadratic_surface("gluecut0", 4));
  const RaceResult r = race(s, tae, quick(7, 300));
  std::size_t capped = 0;
  for (const auto& e : r.evaluations)
    if (e.status == EvalStatus::TimeoutCapped) {
      ++capped;
      EXPECT_DOUBLE_EQ(e.runtime, e.cap);
      EXPECT_LT(e.cap, 1000.0);  // adaptive, below the cutoff
    }
  EXPECT_GT(capped, 0u);
}

TEST(Race, ReproducibleAndWorkerIndependent) {
  const ParamSpace s = parse_pcs(kPaperPcs);
  SyntheticTae tae(quadratic_surface("gluecut0", 4));
  auto o = quick(11, 250);
  const RaceResult a = race(s, tae, o);
  const RaceResult b = race(s, tae, o);
  o.workers = 4;
  const RaceResult c = race(s, tae, o);
  EXPECT_EQ(a.evaluations, b.evaluations);
  EXPECT_EQ(a.evaluations, c.evaluations);
  ASSERT_EQ(a.history.size(), c.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) EXPECT_EQ(a.history[i].config.id(), c.history[i].config.id());
}

TEST(Race, ConvergesOnQuadraticSurface) {
  const ParamSpace s = parse_pcs(kPaperPcs);
  SyntheticTae tae(quadratic_surface("gluecut0", 4));
  int hits = 0;
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const RaceResult r = race(s, tae, quick(seed, 500));
    hits += r.history.back().config.get("gluecut0") == "4";
  }
  EXPECT_GE(hits, 9);
}

TEST(Journal, ReplayGivesSameIncumbents) {
  const ParamSpace s = parse_pcs(kPaperPcs);
  SyntheticTae tae(quadratic_surface("gluecut0", 4));
  std::stringstream journal;
  auto o = quick(5, 200);
  o.journal = &journal;
  const RaceResult live = race(s, tae, o);
  const std::string text = journal.str();

  std::istringstream in1(text);
  const auto incumbents = journal_incumbents(in1);
  ASSERT_EQ(incumbents.size(), live.history.size());
  for (std::size_t i = 0; i < incumbents.size(); ++i) {
    EXPECT_EQ(incumbents[i].first, live.history[i].config.id());
    EXPECT_DOUBLE_EQ(incumbents[i].second, live.history[i].median);
  }

  std::istringstream in2(text);
  JournalTae replay(in2);
  o.journal = nullptr;
  const RaceResult again = race(s, replay, o);
  EXPECT_EQ(again.evaluations, live.evaluations);

  std::istringstream in3(text);
  JournalTae other(in3);
  o.seed = 6;  // different requests
  EXPECT_THROW(race(s, other, o), InputError);
}

TEST(Export, FlagsAndName) {
  const ParamSpace s = parse_pcs(kPaperPcs);
  Configuration c = default_config(s);
  c.values[1].second = "4";
  const std::vector<Incumbent> history{{c, {}, 1.0, 1}};
  const NamedConfig nc = export_incumbent(history);
  EXPECT_EQ(nc.name, "aac-" + c.id().substr(0, 8));
  const auto argv = nc.argv_flags();
  EXPECT_NE(std::find(argv.begin(), argv.end(), "--gluecut0=4"), argv.end());
  EXPECT_EQ(argv.front(), "--verb=4");
  EXPECT_TRUE(config_from_flags(s, nc.flags).same_values(c));
  const NamedConfig back = parse_flags_file(render_flags_file(nc));
  EXPECT_EQ(back, nc);
  EXPECT_THROW(export_incumbent(std::vector<Incumbent>{}), std::invalid_argument);
}
