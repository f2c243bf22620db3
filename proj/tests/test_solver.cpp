#include <gtest/gtest.h>

#include <random>

#include "srkpa/encoder.hpp"
#include "srkpa/solver.hpp"

using namespace srkpa;

namespace {

ClauseList random_3sat(int vars, int clauses, std::mt19937_64& rng) {
  ClauseList cl;
  std::uniform_int_distribution<int> var(1, vars);
  for (int i = 0; i < clauses; ++i) {
    std::vector<Literal> c;
    while (c.size() < 3) {
      const int v = var(rng);
      bool dup = false;
      for (Literal l : c) dup |= var_of(l) == v;
      if (!dup) c.push_back(rng() & 1 ? v : -v);
    }
    cl.add(c);
  }
  return cl;
}

bool brute_force_sat(const ClauseList& cl, int vars) {
  for (unsigned a = 0; a < (1u << vars); ++a) {
    bool all = true;
    for (auto c : cl) {
      bool any = false;
      for (Literal l : c) any |= (((a >> (var_of(l) - 1)) & 1u) != 0) == (l > 0);
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

std::size_t brute_force_count(const ClauseList& cl, int vars) {
  std::size_t n = 0;
  for (unsigned a = 0; a < (1u << vars); ++a) {
    Assignment x(vars);
    for (int v = 1; v <= vars; ++v) x.set(v, (a >> (v - 1)) & 1u);
    n += check_assignment(cl, vars, x).satisfied;
  }
  return n;
}

}  // namespace

TEST(Solver, TrivialCases) {
  ClauseList cl;
  cl.add({1});
  cl.add({-1, 2});
  auto r = solve_internal(cl, 2);
  ASSERT_EQ(r.status, SolveStatus::Sat);
  EXPECT_TRUE(r.model.value(2));
  cl.add({-2});
  EXPECT_EQ(solve_internal(cl, 2).status, SolveStatus::Unsat);
  EXPECT_EQ(solve_internal(ClauseList{}, 3).status, SolveStatus::Sat);
}

TEST(Solver, AgreesWithBruteForceOnRandom3Sat) {
  std::mt19937_64 rng(2024);
  int sat = 0, unsat = 0;
  for (int t = 0; t < 300; ++t) {
    const int vars = 12;
    const ClauseList cl = random_3sat(vars, 45 + t % 20, rng);
    const SolveResult r = solve_internal(cl, vars);
    const bool expected = brute_force_sat(cl, vars);
    ASSERT_EQ(r.status == SolveStatus::Sat, expected) << t;
    if (expected) {
      ++sat;
      EXPECT_TRUE(check_assignment(cl, vars, r.model).satisfied);
    } else {
      ++unsat;
    }
  }
  EXPECT_GT(sat, 20);
  EXPECT_GT(unsat, 20);
}

TEST(Solver, PigeonholeIsUnsat) {
  // 6 pigeons, 5 holes
  const int P = 6, H = 5;
  auto v = [&](int p, int h) { return p * H + h + 1; };
  ClauseList cl;
  for (int p = 0; p < P; ++p) {
    std::vector<Literal> c;
    for (int h = 0; h < H; ++h) c.push_back(v(p, h));
    cl.add(c);
  }
  for (int h = 0; h < H; ++h)
    for (int a = 0; a < P; ++a)
      for (int b = a + 1; b < P; ++b) cl.add({-v(a, h), -v(b, h)});
  EXPECT_EQ(solve_internal(cl, P * H).status, SolveStatus::Unsat);
}

TEST(Solver, ClauseGuard) {
  ClauseList cl;
  for (int i = 0; i < 20; ++i) cl.add({1, 2});
  SolveOptions o;
  o.max_clauses = 10;
  EXPECT_THROW(solve_internal(cl, 2, o), std::length_error);
}

TEST(Solver, EnumerationCountsModels) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 40; ++t) {
    const int vars = 8;
    const ClauseList cl = random_3sat(vars, 20, rng);
    const auto e = enumerate_models(cl, vars, 1000);
    EXPECT_TRUE(e.exhausted);
    EXPECT_EQ(e.models.size(), brute_force_count(cl, vars)) << t;
    for (const auto& m : e.models) EXPECT_TRUE(check_assignment(cl, vars, m).satisfied);
  }
}

TEST(Solver, ProjectedEnumerationAndLimit) {
  ClauseList cl;  // x1 free, x2 = x3
  cl.add({-2, 3});
  cl.add({2, -3});
  EXPECT_EQ(enumerate_models(cl, 3, 100).models.size(), 4u);
  EXPECT_EQ(enumerate_models(cl, 3, 100, {1}).models.size(), 2u);
  const auto limited = enumerate_models(cl, 3, 3);
  EXPECT_EQ(limited.models.size(), 3u);
  EXPECT_FALSE(limited.exhausted);
}

TEST(Solver, RecoversKeyOfSmallCipher) {
  const auto p = CipherParams::small_scale(2, 2, 1, 4);
  const State key = State::from_hex("c7", p);
  std::vector<State> pts{State::from_hex("00", p), State::from_hex("5a", p), State::from_hex("f1", p)};
  const CnfInstance cnf = generate_instance(p, key, pts);
  const SolveResult r = solve_internal(cnf.clauses, cnf.num_vars);
  ASSERT_EQ(r.status, SolveStatus::Sat);
  const State found = key_from_assignment(r.model, *cnf.layout, p);
  const InstanceSpec spec = spec_from_metadata(cnf.metadata);
  EXPECT_TRUE(key_matches_pairs(spec, found));
}

TEST(Solver, SolverModelConversion) {
  ClauseList cl;
  cl.add({-1});
  cl.add({2});
  const SolverModel m = to_solver_model(solve_internal(cl, 2));
  EXPECT_EQ(m.status, SolveStatus::Sat);
  EXPECT_EQ(m.assignment, (std::vector<Literal>{-1, 2}));
}
