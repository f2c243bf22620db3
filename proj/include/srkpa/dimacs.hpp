#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "srkpa/encoder.hpp"
#include "srkpa/errors.hpp"

namespace srkpa {

enum class DimacsErrorKind { MalformedHeader, MalformedLiteral, LiteralOutOfRange, UnterminatedClause, CountMismatch };

class DimacsError : public InputError {
 public:
  DimacsError(DimacsErrorKind kind, std::size_t line, const std::string& what)
      : InputError("DIMACS line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}
  DimacsErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  DimacsErrorKind kind_;
  std::size_t line_;
};

/// Canonical DIMACS: `c key=value` metadata lines, then `c key_included=0|1`
/// (and `c key=<hex>` when included), the `p cnf L N` header and one
/// 0-terminated clause per line.
void write_dimacs(std::ostream& out, const CnfInstance& cnf, bool include_key_comment = false);
std::string to_dimacs(const CnfInstance& cnf, bool include_key_comment = false);

/// Parses DIMACS text. `c key=value` comments are collected into metadata
/// (the key, when present, into secret_key_hex); other comments are ignored.
/// The result has no variable layout.
CnfInstance read_dimacs(std::string_view text);
CnfInstance read_dimacs(std::istream& in);

enum class SolveStatus { Sat, Unsat, Unknown, Timeout };

std::string_view to_string(SolveStatus s);

struct SolverModel {
  SolveStatus status = SolveStatus::Unknown;
  std::vector<Literal> assignment;  // only for Sat
};

/// Reads the competition output format: an `s SATISFIABLE` or
/// `s UNSATISFIABLE` line and `v` lines whose literals end with 0. No status
/// line gives Unknown; a SAT model missing its terminating 0 throws
/// InputError.
SolverModel parse_solver_output(std::string_view text);

}  // namespace srkpa
