#include "srkpa/cnf.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace srkpa {

void ClauseList::add(std::span<const Literal> clause) {
  if (clause.empty()) throw std::invalid_argument("empty clause");
  lits_.insert(lits_.end(), clause.begin(), clause.end());
  ends_.push_back(lits_.size());
}

void ClauseList::append(const ClauseList& other) {
  const std::size_t base = lits_.size();
  lits_.insert(lits_.end(), other.lits_.begin(), other.lits_.end());
  ends_.reserve(ends_.size() + other.ends_.size());
  for (std::size_t e : other.ends_) ends_.push_back(base + e);
}

void ClauseList::reserve(std::size_t clauses, std::size_t literals) {
  ends_.reserve(clauses);
  lits_.reserve(literals);
}

int ClauseList::max_variable() const {
  int m = 0;
  for (Literal l : lits_) m = std::max(m, var_of(l));
  return m;
}

ClauseList sbox_relation_clauses(std::span<const Word> sbox, std::span<const Term> in,
                                 std::span<const Literal> out) {
  const std::size_t e = in.size();
  if (e == 0 || e > 8) throw std::invalid_argument("sbox_relation_clauses: word size must be 1..8");
  if (out.size() != e || sbox.size() != (std::size_t{1} << e))
    throw std::invalid_argument("sbox_relation_clauses: arity mismatch");
  std::vector<Term> positions(in.begin(), in.end());
  for (Literal l : out) positions.push_back(Term::var(l));
  const std::uint32_t mask = (1u << e) - 1;
  ClauseList clauses;
  emit_relation(clauses, positions, [&](std::uint32_t a) { return sbox[a & mask] == (a >> e); });
  return clauses;
}

ClauseList xor_clause_expansion(std::span<const Literal> lits, bool parity, int max_arity) {
  const int k = static_cast<int>(lits.size());
  if (k == 0) throw std::invalid_argument("xor_clause_expansion: no literals");
  if (k > max_arity)
    throw std::length_error("xor_clause_expansion: arity " + std::to_string(k) + " exceeds limit " +
                            std::to_string(max_arity));
  std::vector<int> vars;
  vars.reserve(lits.size());
  for (Literal l : lits) {
    if (l == 0) throw std::invalid_argument("xor_clause_expansion: literal 0");
    if (l < 0) parity = !parity;
    vars.push_back(var_of(l));
  }
  {
    auto sorted = vars;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("xor_clause_expansion: repeated variable");
  }
  ClauseList clauses;
  clauses.reserve(std::size_t{1} << (k - 1), static_cast<std::size_t>(k) << (k - 1));
  std::vector<Literal> clause(static_cast<std::size_t>(k));
  for (std::uint32_t a = 0; a < (std::uint32_t{1} << k); ++a) {
    if (static_cast<bool>(std::popcount(a) & 1) == parity) continue;
    for (int t = 0; t < k; ++t) clause[t] = ((a >> t) & 1u) ? -vars[t] : vars[t];
    clauses.add(clause);
  }
  return clauses;
}

bool Assignment::value(int var) const {
  const auto v = get(var);
  if (!v) throw std::invalid_argument("variable " + std::to_string(var) + " is unassigned");
  return *v;
}

bool Assignment::complete() const {
  return std::none_of(values_.begin(), values_.end(), [](std::int8_t v) { return v < 0; });
}

Assignment Assignment::from_literals(int num_vars, std::span<const Literal> lits) {
  Assignment a(num_vars);
  for (Literal l : lits) {
    if (l == 0 || var_of(l) > num_vars)
      throw std::invalid_argument("literal " + std::to_string(l) + " outside 1.." + std::to_string(num_vars));
    a.set(var_of(l), l > 0);
  }
  return a;
}

std::vector<Literal> Assignment::to_literals() const {
  std::vector<Literal> out;
  for (int v = 1; v <= num_vars(); ++v)
    if (auto b = get(v)) out.push_back(*b ? v : -v);
  return out;
}

CheckResult check_assignment(const ClauseList& clauses, int num_vars, const Assignment& assignment) {
  if (assignment.num_vars() < num_vars || !assignment.complete())
    throw std::invalid_argument("check_assignment: assignment does not cover all variables");
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const auto clause = clauses[i];
    const bool sat = std::any_of(clause.begin(), clause.end(), [&](Literal l) { return assignment.satisfies(l); });
    if (!sat) return {false, i};
  }
  return {true, std::nullopt};
}

}  // namespace srkpa
