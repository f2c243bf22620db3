#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace srkpa {

/// Element of GF(2^e) in polynomial basis, bit i = coefficient of x^i.
using Word = std::uint8_t;

/// Square matrix over GF(2^e), row-major.
using FieldMatrix = std::vector<std::vector<Word>>;

/// Binary field GF(2^e) for 1 <= e <= 8, given by its reduction polynomial.
///
/// The modulus is a bitmask including the leading x^e term, e.g. 0x13 for
/// x^4 + x + 1. Multiplication and inversion go through lookup tables built
/// once at construction.
class GaloisField {
 public:
  GaloisField(int bits, unsigned modulus);

  int bits() const { return bits_; }
  unsigned modulus() const { return modulus_; }
  unsigned order() const { return 1u << bits_; }

  Word mul(Word a, Word b) const { return mul_[(std::size_t{a} << bits_) | b]; }
  /// Multiplicative inverse with inv(0) = 0.
  Word inv(Word a) const { return inv_[a]; }
  Word pow(Word a, unsigned exponent) const;

  /// Inverse of a square matrix, or nullopt if it is singular.
  std::optional<FieldMatrix> invert(const FieldMatrix& m) const;

 private:
  int bits_;
  unsigned modulus_;
  std::vector<Word> mul_;
  std::vector<Word> inv_;
};

/// Carry-less product of a and b reduced modulo `modulus` (degree `bits`).
Word gf_mul(Word a, Word b, int bits, unsigned modulus);

/// Multiplicative inverse by exhaustive search; gf_inv(0) = 0.
Word gf_inv(Word a, int bits, unsigned modulus);

/// True iff `modulus` has degree exactly `degree` and no factor of degree
/// 1..degree/2 over GF(2).
bool is_irreducible(unsigned modulus, int degree);

/// Affine bit map over GF(2): bit i of the output is parity(rows[i] & x).
unsigned apply_bit_matrix(std::span<const std::uint32_t> rows, unsigned x);

/// Rank of a GF(2) matrix given as row bitmasks.
int gf2_rank(std::vector<std::uint32_t> rows);

}  // namespace srkpa
