#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "srkpa/gf.hpp"

namespace srkpa {

/// DIMACS literal: +v asserts variable v true, -v asserts it false. v >= 1.
using Literal = std::int32_t;

inline int var_of(Literal l) { return std::abs(l); }

/// Flat clause storage: one literal buffer plus clause end offsets.
class ClauseList {
 public:
  void add(std::span<const Literal> clause);
  void add(std::initializer_list<Literal> clause) { add(std::span<const Literal>(clause.begin(), clause.size())); }
  void append(const ClauseList& other);
  void reserve(std::size_t clauses, std::size_t literals);

  std::size_t size() const { return ends_.size(); }
  bool empty() const { return ends_.empty(); }
  std::size_t literal_count() const { return lits_.size(); }
  int max_variable() const;

  std::span<const Literal> operator[](std::size_t i) const {
    const std::size_t begin = i == 0 ? 0 : ends_[i - 1];
    return {lits_.data() + begin, ends_[i] - begin};
  }

  class Iterator {
   public:
    using difference_type = std::ptrdiff_t;
    using value_type = std::span<const Literal>;
    Iterator() = default;
    Iterator(const ClauseList* list, std::size_t i) : list_(list), i_(i) {}
    value_type operator*() const { return (*list_)[i_]; }
    Iterator& operator++() { ++i_; return *this; }
    Iterator operator++(int) { auto t = *this; ++i_; return t; }
    bool operator==(const Iterator& o) const { return i_ == o.i_; }
   private:
    const ClauseList* list_ = nullptr;
    std::size_t i_ = 0;
  };
  Iterator begin() const { return {this, 0}; }
  Iterator end() const { return {this, size()}; }

  bool operator==(const ClauseList&) const = default;

 private:
  std::vector<Literal> lits_;
  std::vector<std::size_t> ends_;
};

/// A relation position: either a literal or a known constant bit.
struct Term {
  Literal lit = 0;
  bool value = false;

  static Term var(Literal l) { return {l, false}; }
  static Term constant(bool v) { return {0, v}; }
  bool is_constant() const { return lit == 0; }
};

/// Emits one clause per forbidden combination of `positions`.
///
/// Combination a assigns bit t of a to position t. Combinations that
/// disagree with a constant position, or that need one variable to take two
/// values, cannot occur and produce no clause. Constant positions matching
/// the combination vanish from its clause; repeated literals are merged.
template <class Allowed>
void emit_relation(ClauseList& out, std::span<const Term> positions, Allowed&& allowed) {
  const std::size_t m = positions.size();
  if (m > 24) throw std::invalid_argument("relation over more than 24 positions");
  std::vector<Literal> clause;
  clause.reserve(m);
  for (std::uint32_t a = 0; a < (std::uint32_t{1} << m); ++a) {
    if (allowed(a)) continue;
    clause.clear();
    bool possible = true;
    for (std::size_t t = 0; t < m && possible; ++t) {
      const bool want = (a >> t) & 1u;
      const Term& term = positions[t];
      if (term.is_constant()) {
        possible = term.value == want;
        continue;
      }
      // clause literal is "term != want"
      const Literal lit = want ? -term.lit : term.lit;
      bool duplicate = false;
      for (Literal seen : clause) {
        if (seen == lit) duplicate = true;
        if (seen == -lit) possible = false;
      }
      if (!duplicate) clause.push_back(lit);
    }
    if (!possible) continue;
    if (clause.empty()) throw std::invalid_argument("relation forbids every assignment of its constants");
    out.add(clause);
  }
}

/// Banned-combination encoding of y = S[x]: one clause per (x, y) with
/// S[x] != y. Input positions may be constants; all outputs are literals.
/// Rejects word sizes above 8 bits.
ClauseList sbox_relation_clauses(std::span<const Word> sbox, std::span<const Term> in,
                                 std::span<const Literal> out);

/// Plain-CNF expansion of XOR(lits) = parity without auxiliary variables:
/// 2^(k-1) clauses. Negative literals fold into the parity. Throws if
/// k == 0, k > max_arity or a variable repeats.
ClauseList xor_clause_expansion(std::span<const Literal> lits, bool parity, int max_arity = 16);

/// Truth assignment indexed by variable 1..L; entries may be unassigned.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int num_vars) : values_(static_cast<std::size_t>(num_vars), -1) {}

  int num_vars() const { return static_cast<int>(values_.size()); }
  void set(int var, bool value) { values_.at(static_cast<std::size_t>(var - 1)) = value ? 1 : 0; }
  std::optional<bool> get(int var) const {
    const auto v = values_.at(static_cast<std::size_t>(var - 1));
    if (v < 0) return std::nullopt;
    return v == 1;
  }
  bool value(int var) const;  // throws if unassigned
  bool satisfies(Literal l) const { return value(var_of(l)) == (l > 0); }
  bool complete() const;
  void flip(int var) { set(var, !value(var)); }

  /// Builds an assignment from signed literals; later literals win.
  static Assignment from_literals(int num_vars, std::span<const Literal> lits);
  std::vector<Literal> to_literals() const;

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<std::int8_t> values_;
};

struct CheckResult {
  bool satisfied = true;
  std::optional<std::size_t> first_falsified;
};

/// Evaluates every clause. Throws std::invalid_argument if the assignment
/// does not cover all `num_vars` variables.
CheckResult check_assignment(const ClauseList& clauses, int num_vars, const Assignment& assignment);

}  // namespace srkpa
