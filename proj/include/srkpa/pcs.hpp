#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "srkpa/harness.hpp"

namespace srkpa {

enum class ParamKind { Integer, Real, Categorical };
std::string_view to_string(ParamKind k);

/// One tunable solver option. Values travel as canonical strings (integers
/// in decimal, reals in shortest round-trip form, categorical tokens
/// verbatim) so that a configuration renders to flags without loss.
struct ParamDef {
  std::string name;
  ParamKind kind = ParamKind::Integer;
  double lo = 0, hi = 0;             // numeric kinds
  std::vector<std::string> choices;  // categorical
  std::string default_value;

  /// Canonical form of `value` when legal for this parameter.
  std::optional<std::string> canonical(std::string_view value) const;
  bool operator==(const ParamDef&) const = default;
};

struct ParamSpace {
  std::vector<ParamDef> params;

  const ParamDef* find(std::string_view name) const;
  bool operator==(const ParamSpace&) const = default;
};

/// Error with the 1-based line of the offending PCS line (0 when the error
/// is not tied to a line).
class PcsError : public InputError {
 public:
  PcsError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Grammar, one parameter per line:
///   name [lo, hi] [default]i     integer
///   name [lo, hi] [default]      real
///   name {v1, v2, ...} [default] categorical
/// `#` starts a comment. Conditions and forbidden clauses are not supported.
ParamSpace parse_pcs(std::string_view text);
std::string write_pcs(const ParamSpace& space);

enum class Provenance { Default, Sampled, User };
std::string_view to_string(Provenance p);

/// Values in the order of the space's parameters.
struct Configuration {
  std::vector<std::pair<std::string, std::string>> values;
  Provenance provenance = Provenance::Default;

  /// 16 hex digits of a FNV-1a hash over the values; provenance excluded.
  std::string id() const;
  const std::string& get(std::string_view name) const;
  std::vector<Flag> flags() const;
  /// Same values (provenance ignored).
  bool same_values(const Configuration& other) const { return values == other.values; }
};

Configuration default_config(const ParamSpace& space);
/// Uniform over integer and real ranges and categorical sets.
Configuration sample_config(const ParamSpace& space, std::mt19937_64& rng);
/// Throws InputError when a value is missing, unknown or out of range.
void validate_config(const ParamSpace& space, const Configuration& config);
/// Inverse of Configuration::flags(); parameters absent from `flags` take
/// their defaults. Unknown flags throw InputError.
Configuration config_from_flags(const ParamSpace& space, const std::vector<Flag>& flags);

}  // namespace srkpa
