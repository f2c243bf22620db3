#include "srkpa/solver.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <string>

namespace srkpa {

namespace {

constexpr int kNoReason = -1;

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i) r *= y;
  return r;
}

}  // namespace

CdclSolver::CdclSolver(int num_vars)
    : num_vars_(num_vars),
      watches_(2 * static_cast<std::size_t>(num_vars) + 2),
      assigns_(static_cast<std::size_t>(num_vars) + 1, -1),
      reason_(static_cast<std::size_t>(num_vars) + 1, kNoReason),
      level_(static_cast<std::size_t>(num_vars) + 1, 0),
      phase_(static_cast<std::size_t>(num_vars) + 1, 0),
      seen_(static_cast<std::size_t>(num_vars) + 1, 0) {
  if (num_vars < 0) throw std::invalid_argument("CdclSolver: negative variable count");
}

void CdclSolver::enqueue(Lit l, int reason) {
  const auto v = l >> 1;
  assigns_[v] = static_cast<std::int8_t>((l & 1u) ? 0 : 1);
  reason_[v] = reason;
  level_[v] = level();
  trail_.push_back(l);
}

int CdclSolver::attach(std::vector<Lit> clause) {
  const int id = static_cast<int>(clauses_.size());
  watches_[clause[0] ^ 1u].push_back(id);
  watches_[clause[1] ^ 1u].push_back(id);
  clauses_.push_back(std::move(clause));
  return id;
}

bool CdclSolver::add_clause(std::span<const Literal> clause) {
  if (unsat_) return false;
  backtrack(0);
  std::vector<Lit> lits;
  lits.reserve(clause.size());
  for (Literal l : clause) {
    if (l == 0 || var_of(l) > num_vars_)
      throw std::invalid_argument("CdclSolver: literal " + std::to_string(l) + " out of range");
    lits.push_back(encode(l));
  }
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i)
    if ((lits[i] ^ 1u) == lits[i - 1]) return true;  // tautology
  // drop literals false at level 0; satisfied clauses are redundant
  std::vector<Lit> kept;
  for (Lit l : lits) {
    const auto v = value(l);
    if (v == 1) return true;
    if (v < 0) kept.push_back(l);
  }
  if (kept.empty()) {
    unsat_ = true;
    return false;
  }
  if (kept.size() == 1) {
    enqueue(kept[0], kNoReason);
    if (propagate() != kNoReason) unsat_ = true;
    return !unsat_;
  }
  attach(std::move(kept));
  return true;
}

bool CdclSolver::add_clauses(const ClauseList& clauses) {
  for (auto c : clauses)
    if (!add_clause(c)) return false;
  return true;
}

int CdclSolver::propagate() {
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];  // p became true; clauses watching ~p must move
    ++stats_.propagations;
    auto& ws = watches_[p];
    std::size_t keep = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const int cid = ws[i];
      auto& c = clauses_[static_cast<std::size_t>(cid)];
      const Lit false_lit = p ^ 1u;
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      if (value(c[0]) == 1) {
        ws[keep++] = cid;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k)
        if (value(c[k]) != 0) {
          std::swap(c[1], c[k]);
          watches_[c[1] ^ 1u].push_back(cid);
          moved = true;
          break;
        }
      if (moved) continue;
      ws[keep++] = cid;
      if (value(c[0]) == 0) {
        for (std::size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
        ws.resize(keep);
        qhead_ = trail_.size();
        return cid;
      }
      enqueue(c[0], cid);
    }
    ws.resize(keep);
  }
  return kNoReason;
}

void CdclSolver::analyze(int conflict, std::vector<Lit>& learnt, int& backjump_level) {
  learnt.assign(1, 0);
  int pending = 0;
  Lit p = 0;
  bool first = true;
  std::size_t index = trail_.size();
  int cid = conflict;
  do {
    const auto& c = clauses_[static_cast<std::size_t>(cid)];
    for (std::size_t k = first ? 0 : 1; k < c.size(); ++k) {
      const Lit q = c[k];
      const auto v = q >> 1;
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = 1;
      if (level_[v] >= level()) ++pending;
      else learnt.push_back(q);
    }
    first = false;
    do {
      p = trail_[--index];
    } while (!seen_[p >> 1]);
    cid = reason_[p >> 1];
    seen_[p >> 1] = 0;
    --pending;
  } while (pending > 0);
  learnt[0] = p ^ 1u;

  backjump_level = 0;
  std::size_t max_i = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i) {
    seen_[learnt[i] >> 1] = 0;
    if (level_[learnt[i] >> 1] > backjump_level) {
      backjump_level = level_[learnt[i] >> 1];
      max_i = i;
    }
  }
  if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
}

void CdclSolver::backtrack(int target_level) {
  if (level() <= target_level) return;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[static_cast<std::size_t>(target_level)];) {
    const auto v = trail_[i] >> 1;
    phase_[v] = assigns_[v];
    assigns_[v] = -1;
    reason_[v] = kNoReason;
    next_var_hint_ = std::min(next_var_hint_, static_cast<int>(v));
  }
  trail_.resize(trail_lim_[static_cast<std::size_t>(target_level)]);
  trail_lim_.resize(static_cast<std::size_t>(target_level));
  qhead_ = trail_.size();
}

int CdclSolver::pick_branch_var() {
  while (next_var_hint_ <= num_vars_ && assigns_[static_cast<std::size_t>(next_var_hint_)] >= 0) ++next_var_hint_;
  return next_var_hint_ <= num_vars_ ? next_var_hint_ : 0;
}

SolveResult CdclSolver::solve(const SolveOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  SolveResult result;
  auto finish = [&](SolveStatus s) {
    result.status = s;
    result.stats = stats_;
    return result;
  };
  if (unsat_) return finish(SolveStatus::Unsat);
  backtrack(0);
  if (propagate() != kNoReason) {
    unsat_ = true;
    return finish(SolveStatus::Unsat);
  }

  std::vector<Lit> learnt;
  int restart_round = 0;
  std::uint64_t conflicts_until_restart = static_cast<std::uint64_t>(luby(2, restart_round) * 100);
  std::uint64_t conflicts_here = 0;
  for (;;) {
    const int conflict = propagate();
    if (conflict != kNoReason) {
      ++stats_.conflicts;
      ++conflicts_here;
      if (level() == 0) {
        unsat_ = true;
        return finish(SolveStatus::Unsat);
      }
      int bj = 0;
      analyze(conflict, learnt, bj);
      backtrack(bj);
      if (learnt.size() == 1) {
        enqueue(learnt[0], kNoReason);
      } else {
        const int id = attach(learnt);
        enqueue(learnt[0], id);
      }
      if ((stats_.conflicts & 255u) == 0 && options.time_limit &&
          std::chrono::duration<double>(Clock::now() - start).count() > *options.time_limit)
        return finish(SolveStatus::Timeout);
      continue;
    }
    if (options.restarts && conflicts_here >= conflicts_until_restart) {
      ++stats_.restarts;
      conflicts_here = 0;
      conflicts_until_restart = static_cast<std::uint64_t>(luby(2, ++restart_round) * 100);
      backtrack(0);
      continue;
    }
    const int v = pick_branch_var();
    if (v == 0) {
      result.model = Assignment(num_vars_);
      for (int var = 1; var <= num_vars_; ++var) result.model.set(var, assigns_[static_cast<std::size_t>(var)] == 1);
      return finish(SolveStatus::Sat);
    }
    ++stats_.decisions;
    trail_lim_.push_back(trail_.size());
    enqueue(static_cast<Lit>(2 * v + (phase_[static_cast<std::size_t>(v)] == 1 ? 0 : 1)), kNoReason);
  }
}

SolveResult solve_internal(const ClauseList& clauses, int num_vars, const SolveOptions& options) {
  if (clauses.size() > options.max_clauses)
    throw std::length_error("internal solver: " + std::to_string(clauses.size()) + " clauses exceed the limit of " +
                            std::to_string(options.max_clauses));
  CdclSolver solver(num_vars);
  solver.add_clauses(clauses);
  return solver.solve(options);
}

EnumerationResult enumerate_models(const ClauseList& clauses, int num_vars, std::size_t limit,
                                   const std::vector<int>& projection, const SolveOptions& options) {
  if (clauses.size() > options.max_clauses)
    throw std::length_error("internal solver: clause limit exceeded");
  std::vector<int> vars = projection;
  if (vars.empty())
    for (int v = 1; v <= num_vars; ++v) vars.push_back(v);
  CdclSolver solver(num_vars);
  EnumerationResult out;
  if (!solver.add_clauses(clauses)) {
    out.exhausted = true;
    return out;
  }
  std::vector<Literal> block;
  while (out.models.size() < limit) {
    auto r = solver.solve(options);
    if (r.status == SolveStatus::Unsat) {
      out.exhausted = true;
      break;
    }
    if (r.status != SolveStatus::Sat) break;
    block.clear();
    for (int v : vars) block.push_back(r.model.value(v) ? -v : v);
    out.models.push_back(std::move(r.model));
    if (block.empty() || !solver.add_clause(block)) {
      out.exhausted = true;
      break;
    }
  }
  return out;
}

SolverModel to_solver_model(const SolveResult& result) {
  SolverModel m;
  m.status = result.status;
  if (result.status == SolveStatus::Sat) m.assignment = result.model.to_literals();
  return m;
}

}  // namespace srkpa
