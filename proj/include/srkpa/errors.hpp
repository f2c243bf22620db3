#pragma once

#include <stdexcept>
#include <string>

namespace srkpa {

/// Malformed user input: hex strings, DIMACS, PCS, config files, flags.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure to run or talk to an external solver process.
class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace srkpa
