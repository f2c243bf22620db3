// Stand-in for an external SAT solver. Solves the instance with the
// internal solver; MOCK_MODE selects a misbehaviour instead:
//   unsat    report UNSATISFIABLE
//   sleep    sleep MOCK_SLEEP seconds (default 30) before solving
//   orphan   leave a sleeping grandchild behind, then solve
//   garbage  print a model without its terminating 0
//   wrong    flip the first key word of the model
//   silent   print nothing, exit 0
//   crash    exit 1 without output
// MOCK_TIME overrides the reported solve time. Arguments are echoed as
// comment lines.

#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "srkpa/dimacs.hpp"
#include "srkpa/solver.hpp"

using namespace srkpa;

int main(int argc, char** argv) {
  const char* mode_env = std::getenv("MOCK_MODE");
  const std::string mode = mode_env ? mode_env : "";
  std::cout << "c mock solver version 0.1\n";
  std::string instance;
  for (int i = 1; i < argc; ++i) {
    std::cout << "c arg " << argv[i] << "\n";
    if (argv[i][0] != '-') instance = argv[i];
  }
  std::cout.flush();
  if (mode == "crash") return 1;
  if (mode == "silent") return 0;
  if (mode == "sleep") {
    const char* s = std::getenv("MOCK_SLEEP");
    sleep(static_cast<unsigned>(s ? std::atoi(s) : 30));
  }
  if (mode == "orphan" && fork() == 0) {
    close(STDOUT_FILENO);
    sleep(30);
    _exit(0);
  }
  if (mode == "unsat") {
    std::cout << "s UNSATISFIABLE\n";
    return 20;
  }
  std::ifstream in(instance);
  if (!in) {
    std::cerr << "cannot open " << instance << "\n";
    return 1;
  }
  const CnfInstance cnf = read_dimacs(in);
  const SolveResult r = solve_internal(cnf.clauses, cnf.num_vars);
  const char* t = std::getenv("MOCK_TIME");
  std::cout << "c Total time (this thread) : " << (t ? t : "0.42") << "\n";
  if (r.status != SolveStatus::Sat) {
    std::cout << "s UNSATISFIABLE\n";
    return 20;
  }
  std::cout << "s SATISFIABLE\nv";
  auto lits = r.model.to_literals();
  if (mode == "wrong") {
    // key variables come first in the layout; flip the first key word
    for (std::size_t i = 0; i < lits.size() && i < 4; ++i) lits[i] = -lits[i];
  }
  for (Literal l : lits) std::cout << " " << l;
  std::cout << (mode == "garbage" ? "\n" : " 0\n");
  return 10;
}
