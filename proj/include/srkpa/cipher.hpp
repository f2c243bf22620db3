#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srkpa/gf.hpp"

namespace srkpa {

/// Parameters of the small-scale AES family SR(n, r, c, e).
///
/// Everything the cipher needs is data: the field modulus, the r x r
/// MixColumns matrix over GF(2^e), the e x e affine layer of the S-box over
/// GF(2) (row i selects the input bits feeding output bit i) and the base of
/// the round-constant sequence.
struct CipherParams {
  int rounds = 1;
  int rows = 4;
  int cols = 4;
  int word_bits = 4;
  unsigned modulus = 0x13;
  FieldMatrix mix_matrix;
  std::vector<std::uint32_t> affine_rows;
  Word affine_const = 0;
  Word rcon_base = 2;

  /// Default SR(n, r, c, e) instance. e = 4 uses x^4 + x + 1 with the
  /// small-scale affine layer (S-box 6,b,5,4,...), e = 8 the AES field and
  /// affine map. MixColumns is circulant(2,3,1,1) for r = 4, circulant(3,2)
  /// for r = 2, circulant(2,1,1) for r = 3 and (1) for r = 1.
  static CipherParams small_scale(int rounds, int rows, int cols, int word_bits);

  int words() const { return rows * cols; }
  int block_bits() const { return rows * cols * word_bits; }
  int hex_digits() const { return block_bits() / 4; }

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  bool operator==(const CipherParams&) const = default;
};

/// r x c array of words stored column-major: word index = col * rows + row.
class State {
 public:
  State() = default;
  State(int rows, int cols) : rows_(rows), cols_(cols), words_(static_cast<std::size_t>(rows * cols), 0) {}
  State(int rows, int cols, std::vector<Word> words);

  /// Parses exactly r*c*e/4 hex digits; digit groups map to words in index
  /// order, so "0123..." puts 0x0 in word 0. Throws InputError.
  static State from_hex(std::string_view hex, const CipherParams& params);
  std::string to_hex(int word_bits) const;

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return words_.size(); }

  Word& at(int row, int col) { return words_[static_cast<std::size_t>(col * rows_ + row)]; }
  Word at(int row, int col) const { return words_[static_cast<std::size_t>(col * rows_ + row)]; }
  Word& operator[](std::size_t i) { return words_[i]; }
  Word operator[](std::size_t i) const { return words_[i]; }
  std::span<const Word> words() const { return words_; }

  bool bit(std::size_t word, int bit) const { return (words_[word] >> bit) & 1u; }

  State& operator^=(const State& other);
  friend State operator^(State a, const State& b) { return a ^= b; }
  bool operator==(const State&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Word> words_;
};

struct KeyMaterial {
  State secret_key;
  std::vector<State> round_keys;  // n + 1 entries, round_keys[0] == secret_key
};

/// Per-round S-box inputs x_i and outputs y_i (i = 1..n) plus the ciphertext.
struct EncryptionTrace {
  std::vector<State> sbox_inputs;
  std::vector<State> sbox_outputs;
  State ciphertext;
};

/// S[x] = A * bits(inv(x)) + const. Throws if the affine matrix is singular.
std::vector<Word> build_sbox(const CipherParams& params);

/// SR(n, r, c, e) with all tables precomputed. Rounds are
/// AddRoundKey, SubWords, ShiftRows, MixColumns; MixColumns runs in every
/// round including the last, and a final AddRoundKey follows round n.
class SmallScaleAes {
 public:
  explicit SmallScaleAes(CipherParams params);

  const CipherParams& params() const { return params_; }
  const GaloisField& field() const { return field_; }
  std::span<const Word> sbox() const { return sbox_; }
  std::span<const Word> inverse_sbox() const { return inv_sbox_; }
  const FieldMatrix& inverse_mix_matrix() const { return inv_mix_; }

  State sub_words(const State& s) const;
  State inv_sub_words(const State& s) const;
  State shift_rows(const State& s) const;
  State inv_shift_rows(const State& s) const;
  State mix_columns(const State& s) const;
  State inv_mix_columns(const State& s) const;
  /// MixColumns(ShiftRows(s)); GF(2)-linear in the bits of s.
  State linear(const State& s) const { return mix_columns(shift_rows(s)); }
  State inverse_linear(const State& s) const { return inv_shift_rows(inv_mix_columns(s)); }

  /// rcon_base^step, used when deriving round key step + 1.
  Word round_constant(int step) const { return field_.pow(params_.rcon_base, static_cast<unsigned>(step)); }

  KeyMaterial expand_key(const State& secret_key) const;
  EncryptionTrace encrypt(const State& plaintext, const KeyMaterial& key) const;
  State decrypt(const State& ciphertext, const KeyMaterial& key) const;

 private:
  void check_shape(const State& s) const;

  CipherParams params_;
  GaloisField field_;
  std::vector<Word> sbox_;
  std::vector<Word> inv_sbox_;
  FieldMatrix inv_mix_;
};

Word gf_mul(Word a, Word b, const CipherParams& params);
Word gf_inv(Word a, const CipherParams& params);
KeyMaterial expand_key(const State& secret_key, const CipherParams& params);
EncryptionTrace encrypt_block(const State& plaintext, const KeyMaterial& key, const CipherParams& params);
State decrypt_block(const State& ciphertext, const KeyMaterial& key, const CipherParams& params);

}  // namespace srkpa
