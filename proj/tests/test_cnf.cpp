#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "srkpa/cipher.hpp"
#include "srkpa/cnf.hpp"

using namespace srkpa;

namespace {

bool satisfied(const ClauseList& cl, unsigned bits) {
  for (auto c : cl) {
    bool any = false;
    for (Literal l : c) any |= (((bits >> (var_of(l) - 1)) & 1u) != 0) == (l > 0);
    if (!any) return false;
  }
  return true;
}

}  // namespace

TEST(ClauseList, Basics) {
  ClauseList cl;
  cl.add({1, -2});
  cl.add({3});
  EXPECT_EQ(cl.size(), 2u);
  EXPECT_EQ(cl.max_variable(), 3);
  EXPECT_EQ(cl[0].size(), 2u);
  EXPECT_EQ(cl[1][0], 3);
  EXPECT_THROW(cl.add(std::span<const Literal>{}), std::invalid_argument);
  ClauseList other;
  other.add({-4, 5});
  cl.append(other);
  EXPECT_EQ(cl.size(), 3u);
  EXPECT_EQ(cl[2][1], 5);
}

TEST(XorExpansion, ExactSolutionSet) {
  for (int k = 1; k <= 6; ++k)
    for (int parity = 0; parity < 2; ++parity) {
      std::vector<Literal> lits;
      for (int v = 1; v <= k; ++v) lits.push_back(v);
      const ClauseList cl = xor_clause_expansion(lits, parity);
      EXPECT_EQ(cl.size(), std::size_t{1} << (k - 1));
      for (unsigned a = 0; a < (1u << k); ++a)
        EXPECT_EQ(satisfied(cl, a), (std::popcount(a) & 1) == parity) << k << " " << a;
    }
}

TEST(XorExpansion, NegativeLiteralsFlipParity) {
  const std::vector<Literal> lits{1, -2, 3};
  const ClauseList cl = xor_clause_expansion(lits, false);
  for (unsigned a = 0; a < 8; ++a) EXPECT_EQ(satisfied(cl, a), (std::popcount(a) & 1) == 1);
}

TEST(XorExpansion, Limits) {
  std::vector<Literal> big;
  for (int v = 1; v <= 17; ++v) big.push_back(v);
  EXPECT_THROW(xor_clause_expansion(big, true), std::length_error);
  const std::vector<Literal> dup{1, 2, -1};
  EXPECT_THROW(xor_clause_expansion(dup, true), std::invalid_argument);
  EXPECT_THROW(xor_clause_expansion(std::span<const Literal>{}, true), std::invalid_argument);
}

TEST(SboxRelation, FourBitClauseCount) {
  const auto sbox = build_sbox(CipherParams::small_scale(1, 1, 1, 4));
  std::vector<Term> in;
  for (int i = 1; i <= 4; ++i) in.push_back(Term::var(i));
  const std::vector<Literal> out{5, 6, 7, 8};
  EXPECT_EQ(sbox_relation_clauses(sbox, in, out).size(), 240u);
}

TEST(SboxRelation, ToyTwoBitBruteForce) {
  const std::vector<Word> sbox{2, 0, 3, 1};
  const std::vector<Term> in{Term::var(1), Term::var(2)};
  const std::vector<Literal> out{3, 4};
  const ClauseList cl = sbox_relation_clauses(sbox, in, out);
  EXPECT_EQ(cl.size(), 12u);
  for (unsigned a = 0; a < 16; ++a) EXPECT_EQ(satisfied(cl, a), sbox[a & 3] == (a >> 2)) << a;
}

TEST(SboxRelation, ConstantInputsFold) {
  const auto sbox = build_sbox(CipherParams::small_scale(1, 1, 1, 4));
  for (unsigned x = 0; x < 16; ++x) {
    std::vector<Term> in;
    for (int b = 0; b < 4; ++b) in.push_back(Term::constant((x >> b) & 1u));
    const std::vector<Literal> out{1, 2, 3, 4};
    const ClauseList cl = sbox_relation_clauses(sbox, in, out);
    EXPECT_EQ(cl.size(), 15u);
    for (unsigned y = 0; y < 16; ++y) EXPECT_EQ(satisfied(cl, y), y == sbox[x]);
  }
}

TEST(EmitRelation, RepeatedVariableAndTautology) {
  // y = x AND x over positions (x, x, y): allowed iff bit2 == bit0 & bit1
  ClauseList cl;
  const std::vector<Term> pos{Term::var(1), Term::var(1), Term::var(2)};
  emit_relation(cl, pos, [](std::uint32_t a) { return ((a >> 2) & 1u) == ((a & 1u) & ((a >> 1) & 1u)); });
  for (unsigned a = 0; a < 4; ++a) EXPECT_EQ(satisfied(cl, a), ((a >> 1) & 1u) == (a & 1u)) << a;
  ClauseList none;
  const std::vector<Term> consts{Term::constant(true), Term::constant(false)};
  EXPECT_THROW(emit_relation(none, consts, [](std::uint32_t a) { return a == 3; }), std::invalid_argument);
}

TEST(Assignment, CheckAndLiterals) {
  ClauseList cl;
  cl.add({1, 2});
  cl.add({-1, 3});
  Assignment a(3);
  EXPECT_THROW(check_assignment(cl, 3, a), std::invalid_argument);
  a.set(1, true);
  a.set(2, false);
  a.set(3, false);
  const auto r = check_assignment(cl, 3, a);
  EXPECT_FALSE(r.satisfied);
  EXPECT_EQ(r.first_falsified, 1u);
  a.flip(3);
  EXPECT_TRUE(check_assignment(cl, 3, a).satisfied);
  const auto lits = a.to_literals();
  EXPECT_EQ(lits, (std::vector<Literal>{1, -2, 3}));
  EXPECT_EQ(Assignment::from_literals(3, lits), a);
}
