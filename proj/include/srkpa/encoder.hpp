#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "srkpa/cipher.hpp"
#include "srkpa/cnf.hpp"

namespace srkpa {

/// Variable numbering of a known-plaintext CNF instance.
///
/// Key variables cover all n + 1 round keys. Each text pair owns 2n - 1
/// states: the S-box outputs y_1..y_n and the S-box inputs x_2..x_n (x_1 is
/// k_0 xor plaintext and folds into literal polarities; the ciphertext folds
/// into XOR parities). Per pair the states are laid out y_1, x_2, y_2, ...,
/// x_n, y_n. Within a state, bit j of word w sits at offset w * e + j.
class VarLayout {
 public:
  VarLayout(int rounds, int rows, int cols, int word_bits, int pairs);
  static VarLayout for_params(const CipherParams& params, int pairs) {
    return {params.rounds, params.rows, params.cols, params.word_bits, pairs};
  }

  int rounds() const { return rounds_; }
  int pairs() const { return pairs_; }
  int word_bits() const { return word_bits_; }
  int words() const { return words_; }
  int block_bits() const { return words_ * word_bits_; }
  int key_var_count() const { return block_bits() * (rounds_ + 1); }
  int total() const { return key_var_count() + pairs_ * block_bits() * (2 * rounds_ - 1); }

  /// round in 0..n
  int key_var(int round, int word, int bit) const;
  /// round in 2..n
  int sbox_input_var(int pair, int round, int word, int bit) const;
  /// round in 1..n
  int sbox_output_var(int pair, int round, int word, int bit) const;

  bool operator==(const VarLayout&) const = default;

 private:
  int state_var(int pair, int slot, int word, int bit) const;

  int rounds_, words_, word_bits_, pairs_;
};

/// L = b(n+1) + p*b(2n-1) with b = r*c*e.
std::int64_t num_vars(int rounds, int rows, int cols, int word_bits, int pairs);

struct TextPair {
  State plaintext;
  State ciphertext;
};

struct InstanceSpec {
  CipherParams params;
  std::string key_token = "kx";
  std::optional<State> secret_key;  // absent when loaded from an attack-only file
  std::vector<TextPair> pairs;

  int pair_count() const { return static_cast<int>(pairs.size()); }
  /// "<rounds>-<key token>-<pairs>", e.g. 3-k3-22.
  std::string token() const;
};

/// Encrypts each plaintext under `secret_key`. Rejects duplicate plaintexts.
InstanceSpec make_instance_spec(const CipherParams& params, std::string key_token, const State& secret_key,
                                const std::vector<State>& plaintexts);

/// Ordered `key=value` pairs carried in DIMACS comment lines.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Self-describing instance metadata (cipher parameters and text pairs).
/// The secret key is never part of it.
Metadata instance_metadata(const InstanceSpec& spec);
/// Inverse of instance_metadata; the returned spec has no secret key.
/// Throws InputError on missing or malformed entries.
InstanceSpec spec_from_metadata(const Metadata& meta);
const std::string* find_meta(const Metadata& meta, const std::string& key);

struct CnfInstance {
  std::optional<VarLayout> layout;  // absent for instances read back from DIMACS
  int num_vars = 0;
  ClauseList clauses;
  std::string token;
  Metadata metadata;
  std::optional<std::string> secret_key_hex;

  std::size_t num_clauses() const { return clauses.size(); }
  double density() const { return num_vars == 0 ? 0.0 : static_cast<double>(clauses.size()) / num_vars; }
};

struct EncoderOptions {
  int max_xor_arity = 16;
  /// Merge clause pairs that differ in the sign of one literal, per relation.
  bool minimize = false;
  /// Threads producing per-pair clause blocks; output order is fixed.
  int workers = 1;
};

/// For each output bit of the linear layer (bit index w*e + j), the input
/// bits whose XOR forms it.
std::vector<std::vector<int>> linear_dependencies(const SmallScaleAes& cipher);

/// Widest relation the key schedule encoder writes out; limits e to 6.
inline constexpr int kMaxKeyRelationBits = 18;

/// Throws std::invalid_argument when 3e exceeds kMaxKeyRelationBits.
ClauseList encode_key_schedule(const InstanceSpec& spec, const VarLayout& layout,
                               const EncoderOptions& options = {});
/// Round equations of a single text pair.
ClauseList encode_pair(const InstanceSpec& spec, const VarLayout& layout, int pair,
                       const EncoderOptions& options = {});
/// Round equations of all pairs, concatenated in pair order.
ClauseList encode_rounds(const InstanceSpec& spec, const VarLayout& layout, const EncoderOptions& options = {});

/// Key schedule clauses followed by every pair's round clauses.
CnfInstance encode_instance(const InstanceSpec& spec, const EncoderOptions& options = {});

CnfInstance generate_instance(const CipherParams& params, const State& secret_key, const std::vector<State>& plaintexts,
                              std::string key_token = "kx", const EncoderOptions& options = {});

/// The assignment induced by the true key and every pair's encryption trace.
Assignment witness_assignment(const InstanceSpec& spec, const VarLayout& layout);

/// Round-key-0 bits of an assignment decoded into a state.
State key_from_assignment(const Assignment& assignment, const VarLayout& layout, const CipherParams& params);

/// True iff `key` encrypts every plaintext of `spec` to its ciphertext.
bool key_matches_pairs(const InstanceSpec& spec, const State& key);

}  // namespace srkpa
