#include "srkpa/cipher.hpp"

#include <stdexcept>

#include "srkpa/errors.hpp"

namespace srkpa {

namespace {

FieldMatrix circulant(std::vector<Word> first_row) {
  const std::size_t n = first_row.size();
  FieldMatrix m(n, std::vector<Word>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = first_row[(j + n - i) % n];
  return m;
}

int hex_value(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
  if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
  return -1;
}

}  // namespace

CipherParams CipherParams::small_scale(int rounds, int rows, int cols, int word_bits) {
  CipherParams p;
  p.rounds = rounds;
  p.rows = rows;
  p.cols = cols;
  p.word_bits = word_bits;
  p.rcon_base = 2;
  if (word_bits == 4) {
    p.modulus = 0x13;
    p.affine_rows = {0x7, 0xE, 0xD, 0xB};
    p.affine_const = 0x6;
  } else if (word_bits == 8) {
    p.modulus = 0x11B;
    for (int i = 0; i < 8; ++i) {
      std::uint32_t row = 0;
      for (int k : {0, 4, 5, 6, 7}) row |= 1u << ((i + k) % 8);
      p.affine_rows.push_back(row);
    }
    p.affine_const = 0x63;
  } else {
    throw std::invalid_argument("no default parameters for word size " + std::to_string(word_bits));
  }
  switch (rows) {
    case 1: p.mix_matrix = {{1}}; break;
    case 2: p.mix_matrix = circulant({3, 2}); break;
    case 3: p.mix_matrix = circulant({2, 1, 1}); break;
    case 4: p.mix_matrix = circulant({2, 3, 1, 1}); break;
    default: throw std::invalid_argument("no default MixColumns matrix for " + std::to_string(rows) + " rows");
  }
  return p;
}

void CipherParams::validate() const {
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (rows < 1 || cols < 1) throw std::invalid_argument("rows and cols must be >= 1");
  if (word_bits != 4 && word_bits != 8) throw std::invalid_argument("word size must be 4 or 8 bits");
  if (!is_irreducible(modulus, word_bits))
    throw std::invalid_argument("modulus must be an irreducible polynomial of degree e");
  if (mix_matrix.size() != static_cast<std::size_t>(rows))
    throw std::invalid_argument("mix_matrix must be r x r");
  for (const auto& row : mix_matrix) {
    if (row.size() != static_cast<std::size_t>(rows)) throw std::invalid_argument("mix_matrix must be r x r");
    for (Word w : row)
      if (w >> word_bits) throw std::invalid_argument("mix_matrix entry exceeds word size");
  }
  if (!GaloisField(word_bits, modulus).invert(mix_matrix))
    throw std::invalid_argument("mix_matrix is singular over GF(2^e)");
  if (affine_rows.size() != static_cast<std::size_t>(word_bits))
    throw std::invalid_argument("affine matrix must be e x e");
  for (auto row : affine_rows)
    if (row >> word_bits) throw std::invalid_argument("affine row exceeds word size");
  if (gf2_rank(affine_rows) != word_bits) throw std::invalid_argument("affine matrix is singular over GF(2)");
  if (affine_const >> word_bits) throw std::invalid_argument("affine constant exceeds word size");
  if (rcon_base == 0 || rcon_base >> word_bits) throw std::invalid_argument("rcon_base must be a nonzero field element");
}

State::State(int rows, int cols, std::vector<Word> words) : rows_(rows), cols_(cols), words_(std::move(words)) {
  if (words_.size() != static_cast<std::size_t>(rows * cols))
    throw std::invalid_argument("State: word count does not match r x c");
}

State State::from_hex(std::string_view hex, const CipherParams& params) {
  if (static_cast<int>(hex.size()) != params.hex_digits())
    throw InputError("expected " + std::to_string(params.hex_digits()) + " hex digits, got " +
                     std::to_string(hex.size()));
  const int per_word = params.word_bits / 4;
  State s(params.rows, params.cols);
  for (std::size_t w = 0; w < s.size(); ++w) {
    unsigned v = 0;
    for (int d = 0; d < per_word; ++d) {
      const int h = hex_value(hex[w * per_word + d]);
      if (h < 0) throw InputError("invalid hex digit in '" + std::string(hex) + "'");
      v = (v << 4) | static_cast<unsigned>(h);
    }
    s[w] = static_cast<Word>(v);
  }
  return s;
}

std::string State::to_hex(int word_bits) const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const int per_word = word_bits / 4;
  std::string out;
  out.reserve(words_.size() * per_word);
  for (Word w : words_)
    for (int d = per_word - 1; d >= 0; --d) out.push_back(kDigits[(w >> (4 * d)) & 0xF]);
  return out;
}

State& State::operator^=(const State& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_) throw std::invalid_argument("State: shape mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

std::vector<Word> build_sbox(const CipherParams& params) {
  if (params.affine_rows.size() != static_cast<std::size_t>(params.word_bits) ||
      gf2_rank(params.affine_rows) != params.word_bits)
    throw std::invalid_argument("build_sbox: affine matrix is singular");
  const GaloisField field(params.word_bits, params.modulus);
  std::vector<Word> table(field.order());
  for (unsigned x = 0; x < field.order(); ++x)
    table[x] = static_cast<Word>(apply_bit_matrix(params.affine_rows, field.inv(static_cast<Word>(x))) ^
                                 params.affine_const);
  return table;
}

SmallScaleAes::SmallScaleAes(CipherParams params)
    : params_((params.validate(), std::move(params))),
      field_(params_.word_bits, params_.modulus),
      sbox_(build_sbox(params_)),
      inv_sbox_(sbox_.size()),
      inv_mix_(*field_.invert(params_.mix_matrix)) {
  for (std::size_t x = 0; x < sbox_.size(); ++x) inv_sbox_[sbox_[x]] = static_cast<Word>(x);
}

void SmallScaleAes::check_shape(const State& s) const {
  if (s.rows() != params_.rows || s.cols() != params_.cols)
    throw std::invalid_argument("state shape does not match cipher parameters");
}

State SmallScaleAes::sub_words(const State& s) const {
  State out = s;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sbox_[s[i]];
  return out;
}

State SmallScaleAes::inv_sub_words(const State& s) const {
  State out = s;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = inv_sbox_[s[i]];
  return out;
}

State SmallScaleAes::shift_rows(const State& s) const {
  State out(s.rows(), s.cols());
  for (int row = 0; row < s.rows(); ++row)
    for (int col = 0; col < s.cols(); ++col) out.at(row, col) = s.at(row, (col + row) % s.cols());
  return out;
}

State SmallScaleAes::inv_shift_rows(const State& s) const {
  State out(s.rows(), s.cols());
  for (int row = 0; row < s.rows(); ++row)
    for (int col = 0; col < s.cols(); ++col) out.at(row, (col + row) % s.cols()) = s.at(row, col);
  return out;
}

namespace {

State apply_columns(const State& s, const FieldMatrix& m, const GaloisField& f) {
  State out(s.rows(), s.cols());
  for (int col = 0; col < s.cols(); ++col)
    for (int i = 0; i < s.rows(); ++i) {
      Word acc = 0;
      for (int j = 0; j < s.rows(); ++j) acc ^= f.mul(m[i][j], s.at(j, col));
      out.at(i, col) = acc;
    }
  return out;
}

}  // namespace

State SmallScaleAes::mix_columns(const State& s) const { return apply_columns(s, params_.mix_matrix, field_); }

State SmallScaleAes::inv_mix_columns(const State& s) const { return apply_columns(s, inv_mix_, field_); }

KeyMaterial SmallScaleAes::expand_key(const State& secret_key) const {
  check_shape(secret_key);
  const int r = params_.rows;
  const int c = params_.cols;
  KeyMaterial km{secret_key, {secret_key}};
  km.round_keys.reserve(static_cast<std::size_t>(params_.rounds) + 1);
  for (int step = 0; step < params_.rounds; ++step) {
    const State& prev = km.round_keys.back();
    State next(r, c);
    for (int row = 0; row < r; ++row) {
      next.at(row, 0) = prev.at(row, 0) ^ sbox_[prev.at((row + 1) % r, c - 1)];
      if (row == 0) next.at(row, 0) ^= round_constant(step);
    }
    for (int col = 1; col < c; ++col)
      for (int row = 0; row < r; ++row) next.at(row, col) = prev.at(row, col) ^ next.at(row, col - 1);
    km.round_keys.push_back(std::move(next));
  }
  return km;
}

EncryptionTrace SmallScaleAes::encrypt(const State& plaintext, const KeyMaterial& key) const {
  check_shape(plaintext);
  if (key.round_keys.size() != static_cast<std::size_t>(params_.rounds) + 1)
    throw std::invalid_argument("key material does not have n + 1 round keys");
  EncryptionTrace trace;
  State x = plaintext ^ key.round_keys[0];
  for (int i = 1; i <= params_.rounds; ++i) {
    State y = sub_words(x);
    trace.sbox_inputs.push_back(std::move(x));
    x = linear(y) ^ key.round_keys[static_cast<std::size_t>(i)];
    trace.sbox_outputs.push_back(std::move(y));
  }
  trace.ciphertext = std::move(x);
  return trace;
}

State SmallScaleAes::decrypt(const State& ciphertext, const KeyMaterial& key) const {
  check_shape(ciphertext);
  if (key.round_keys.size() != static_cast<std::size_t>(params_.rounds) + 1)
    throw std::invalid_argument("key material does not have n + 1 round keys");
  State s = ciphertext;
  for (int i = params_.rounds; i >= 1; --i)
    s = inv_sub_words(inverse_linear(s ^ key.round_keys[static_cast<std::size_t>(i)]));
  return s ^ key.round_keys[0];
}

Word gf_mul(Word a, Word b, const CipherParams& params) { return gf_mul(a, b, params.word_bits, params.modulus); }

Word gf_inv(Word a, const CipherParams& params) { return gf_inv(a, params.word_bits, params.modulus); }

KeyMaterial expand_key(const State& secret_key, const CipherParams& params) {
  return SmallScaleAes(params).expand_key(secret_key);
}

EncryptionTrace encrypt_block(const State& plaintext, const KeyMaterial& key, const CipherParams& params) {
  return SmallScaleAes(params).encrypt(plaintext, key);
}

State decrypt_block(const State& ciphertext, const KeyMaterial& key, const CipherParams& params) {
  return SmallScaleAes(params).decrypt(ciphertext, key);
}

}  // namespace srkpa
