#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "srkpa/cnf.hpp"
#include "srkpa/dimacs.hpp"

namespace srkpa {

struct SolveOptions {
  /// Refuse instances with more clauses than this.
  std::size_t max_clauses = 200000;
  /// Wall-clock limit in seconds; the result is Timeout when it expires.
  std::optional<double> time_limit;
  bool restarts = true;
};

struct SolveStats {
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  Assignment model;  // complete when status == Sat
  SolveStats stats;
};

/// Small conflict-driven solver for desk-scale instances and tests.
///
/// Two watched literals, first-UIP learning with non-chronological
/// backjumping, Luby restarts and phase saving. Branching takes the lowest
/// unassigned variable index; there is no activity heuristic, so on the
/// generated instances the key bits (lowest ids) are decided first.
class CdclSolver {
 public:
  explicit CdclSolver(int num_vars);

  int num_vars() const { return num_vars_; }
  /// Adds a clause at decision level 0. Returns false once the formula is
  /// known to be unsatisfiable.
  bool add_clause(std::span<const Literal> clause);
  bool add_clauses(const ClauseList& clauses);

  SolveResult solve(const SolveOptions& options = {});

 private:
  using Lit = std::uint32_t;  // 2 * var + sign
  static Lit encode(Literal l) { return static_cast<Lit>(2 * var_of(l) + (l < 0 ? 1 : 0)); }
  static Literal decode(Lit l) { return (l & 1u) ? -static_cast<Literal>(l >> 1) : static_cast<Literal>(l >> 1); }

  std::int8_t value(Lit l) const {
    const std::int8_t v = assigns_[l >> 1];
    return v < 0 ? -1 : static_cast<std::int8_t>(v ^ static_cast<std::int8_t>(l & 1u));
  }
  int level() const { return static_cast<int>(trail_lim_.size()); }
  void enqueue(Lit l, int reason);
  int propagate();
  void analyze(int conflict, std::vector<Lit>& learnt, int& backjump_level);
  void backtrack(int target_level);
  int attach(std::vector<Lit> clause);
  int pick_branch_var();

  int num_vars_;
  bool unsat_ = false;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::vector<int>> watches_;  // per literal: clauses watching its negation
  std::vector<std::int8_t> assigns_;       // per var: -1 unassigned, 0 false, 1 true
  std::vector<int> reason_;
  std::vector<int> level_;
  std::vector<std::int8_t> phase_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  int next_var_hint_ = 1;
  std::vector<char> seen_;
  SolveStats stats_;
};

/// Solves a clause list with a fresh solver. Throws std::length_error when
/// the clause count exceeds options.max_clauses.
SolveResult solve_internal(const ClauseList& clauses, int num_vars, const SolveOptions& options = {});

struct EnumerationResult {
  std::vector<Assignment> models;
  bool exhausted = false;  // false if `limit` or the time limit stopped the search
};

/// Enumerates models by adding a blocking clause after each one. Models are
/// distinct on `projection` (all variables when empty).
EnumerationResult enumerate_models(const ClauseList& clauses, int num_vars, std::size_t limit,
                                   const std::vector<int>& projection = {}, const SolveOptions& options = {});

SolverModel to_solver_model(const SolveResult& result);

}  // namespace srkpa
