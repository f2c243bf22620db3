#include "srkpa/dimacs.hpp"

#include <charconv>
#include <cstdlib>
#include <iterator>
#include <ostream>
#include <sstream>

namespace srkpa {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool is_space(char ch) { return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n'; }

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}
  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    const auto nl = text_.find('\n', pos_);
    const auto end = nl == std::string_view::npos ? text_.size() : nl;
    line = text_.substr(pos_, end - pos_);
    pos_ = end + 1;
    ++line_no_;
    return true;
  }
  std::size_t line_no() const { return line_no_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

template <class Fn>
bool for_each_token(std::string_view line, Fn&& fn) {
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (!fn(line.substr(i, j - i))) return false;
    i = j;
  }
  return true;
}

bool parse_int(std::string_view tok, long long& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

void write_dimacs(std::ostream& out, const CnfInstance& cnf, bool include_key_comment) {
  std::string buf;
  buf.reserve(1 << 16);
  auto flush = [&] {
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    buf.clear();
  };
  for (const auto& [k, v] : cnf.metadata) {
    if (k == "key" || k == "key_included") continue;
    buf += "c " + k + "=" + v + "\n";
  }
  const bool with_key = include_key_comment && cnf.secret_key_hex.has_value();
  buf += with_key ? "c key_included=1\n" : "c key_included=0\n";
  if (with_key) buf += "c key=" + *cnf.secret_key_hex + "\n";
  buf += "p cnf " + std::to_string(cnf.num_vars) + " " + std::to_string(cnf.clauses.size()) + "\n";
  char num[16];
  for (auto clause : cnf.clauses) {
    for (Literal l : clause) {
      auto [end, ec] = std::to_chars(num, num + sizeof num, l);
      buf.append(num, end);
      buf.push_back(' ');
    }
    buf += "0\n";
    if (buf.size() > (1 << 16) - 256) flush();
  }
  flush();
}

std::string to_dimacs(const CnfInstance& cnf, bool include_key_comment) {
  std::ostringstream out;
  write_dimacs(out, cnf, include_key_comment);
  return out.str();
}

CnfInstance read_dimacs(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return read_dimacs(std::string_view(text));
}

CnfInstance read_dimacs(std::string_view text) {
  CnfInstance cnf;
  LineReader reader(text);
  std::string_view line;
  bool have_header = false;
  long long declared_vars = 0, declared_clauses = 0;
  std::vector<Literal> pending;
  std::size_t pending_line = 0;

  while (reader.next(line)) {
    const auto body = trim(line);
    if (body.empty()) continue;
    if (body.front() == 'c') {
      auto rest = trim(body.substr(1));
      const auto eq = rest.find('=');
      if (eq != std::string_view::npos && rest.find(' ') > eq && eq > 0) {
        std::string key(rest.substr(0, eq));
        std::string value(rest.substr(eq + 1));
        if (key == "key") cnf.secret_key_hex = value;
        else if (key != "key_included") cnf.metadata.emplace_back(std::move(key), std::move(value));
      }
      continue;
    }
    if (body.front() == '%') break;
    if (body.front() == 'p') {
      if (have_header) throw DimacsError(DimacsErrorKind::MalformedHeader, reader.line_no(), "duplicate header");
      std::vector<std::string_view> toks;
      for_each_token(body, [&](std::string_view t) { toks.push_back(t); return true; });
      if (toks.size() != 4 || toks[0] != "p" || toks[1] != "cnf" || !parse_int(toks[2], declared_vars) ||
          !parse_int(toks[3], declared_clauses) || declared_vars < 0 || declared_clauses < 0)
        throw DimacsError(DimacsErrorKind::MalformedHeader, reader.line_no(), "expected 'p cnf <vars> <clauses>'");
      have_header = true;
      cnf.clauses.reserve(static_cast<std::size_t>(declared_clauses), static_cast<std::size_t>(declared_clauses) * 4);
      continue;
    }
    if (!have_header)
      throw DimacsError(DimacsErrorKind::MalformedHeader, reader.line_no(), "clause data before 'p cnf' header");
    for_each_token(body, [&](std::string_view tok) {
      long long v = 0;
      if (!parse_int(tok, v))
        throw DimacsError(DimacsErrorKind::MalformedLiteral, reader.line_no(), "bad literal '" + std::string(tok) + "'");
      if (v == 0) {
        if (pending.empty())
          throw DimacsError(DimacsErrorKind::MalformedLiteral, reader.line_no(), "empty clause");
        cnf.clauses.add(pending);
        pending.clear();
        return true;
      }
      if (std::llabs(v) > declared_vars)
        throw DimacsError(DimacsErrorKind::LiteralOutOfRange, reader.line_no(),
                          "literal " + std::string(tok) + " exceeds declared variable count " +
                              std::to_string(declared_vars));
      if (pending.empty()) pending_line = reader.line_no();
      pending.push_back(static_cast<Literal>(v));
      return true;
    });
  }
  if (!have_header) throw DimacsError(DimacsErrorKind::MalformedHeader, reader.line_no(), "missing 'p cnf' header");
  if (!pending.empty())
    throw DimacsError(DimacsErrorKind::UnterminatedClause, pending_line, "clause not terminated by 0");
  if (static_cast<long long>(cnf.clauses.size()) != declared_clauses)
    throw DimacsError(DimacsErrorKind::CountMismatch, reader.line_no(),
                      "header declares " + std::to_string(declared_clauses) + " clauses, body has " +
                          std::to_string(cnf.clauses.size()));
  cnf.num_vars = static_cast<int>(declared_vars);
  if (const std::string* t = find_meta(cnf.metadata, "token")) cnf.token = *t;
  return cnf;
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "SAT";
    case SolveStatus::Unsat: return "UNSAT";
    case SolveStatus::Timeout: return "TIMEOUT";
    case SolveStatus::Unknown: break;
  }
  return "UNKNOWN";
}

SolverModel parse_solver_output(std::string_view text) {
  SolverModel model;
  LineReader reader(text);
  std::string_view line;
  bool terminated = false;
  while (reader.next(line)) {
    const auto body = trim(line);
    if (body.starts_with("s ")) {
      const auto status = trim(body.substr(2));
      if (status == "SATISFIABLE") model.status = SolveStatus::Sat;
      else if (status == "UNSATISFIABLE") model.status = SolveStatus::Unsat;
      else model.status = SolveStatus::Unknown;
    } else if (body.starts_with("v ") || body == "v") {
      for_each_token(body.substr(1), [&](std::string_view tok) {
        long long v = 0;
        if (!parse_int(tok, v)) throw InputError("solver output line " + std::to_string(reader.line_no()) +
                                                 ": bad literal '" + std::string(tok) + "'");
        if (terminated) throw InputError("solver output: literals after terminating 0");
        if (v == 0) terminated = true;
        else model.assignment.push_back(static_cast<Literal>(v));
        return true;
      });
    }
  }
  if (model.status == SolveStatus::Sat) {
    if (!model.assignment.empty() && !terminated) throw InputError("solver output: model not terminated by 0");
  } else {
    model.assignment.clear();
  }
  return model;
}

}  // namespace srkpa
