#include "srkpa/gf.hpp"

#include <bit>
#include <stdexcept>

namespace srkpa {

namespace {

int degree_of(unsigned poly) { return poly == 0 ? -1 : std::bit_width(poly) - 1; }

unsigned poly_mod(unsigned a, unsigned m) {
  const int dm = degree_of(m);
  for (int d = degree_of(a); d >= dm; d = degree_of(a)) a ^= m << (d - dm);
  return a;
}

}  // namespace

Word gf_mul(Word a, Word b, int bits, unsigned modulus) {
  unsigned acc = 0;
  unsigned shifted = a;
  const unsigned top = 1u << bits;
  for (int i = 0; i < bits; ++i) {
    if ((b >> i) & 1u) acc ^= shifted;
    shifted <<= 1;
    if (shifted & top) shifted ^= modulus;
  }
  return static_cast<Word>(acc);
}

Word gf_inv(Word a, int bits, unsigned modulus) {
  if (a == 0) return 0;
  for (unsigned b = 1; b < (1u << bits); ++b)
    if (gf_mul(a, static_cast<Word>(b), bits, modulus) == 1) return static_cast<Word>(b);
  throw std::domain_error("gf_inv: modulus is not irreducible");
}

bool is_irreducible(unsigned modulus, int degree) {
  if (degree < 1 || degree_of(modulus) != degree) return false;
  for (unsigned f = 2; degree_of(f) <= degree / 2; ++f)
    if (poly_mod(modulus, f) == 0) return false;
  return true;
}

unsigned apply_bit_matrix(std::span<const std::uint32_t> rows, unsigned x) {
  unsigned out = 0;
  for (std::size_t i = 0; i < rows.size(); ++i)
    out |= static_cast<unsigned>(std::popcount(rows[i] & x) & 1) << i;
  return out;
}

int gf2_rank(std::vector<std::uint32_t> rows) {
  int rank = 0;
  for (int bit = 31; bit >= 0; --bit) {
    const std::uint32_t mask = 1u << bit;
    auto pivot = rows.begin() + rank;
    while (pivot != rows.end() && !(*pivot & mask)) ++pivot;
    if (pivot == rows.end()) continue;
    std::swap(*pivot, rows[rank]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (static_cast<int>(i) != rank && (rows[i] & mask)) rows[i] ^= rows[rank];
    ++rank;
  }
  return rank;
}

GaloisField::GaloisField(int bits, unsigned modulus) : bits_(bits), modulus_(modulus) {
  if (bits < 1 || bits > 8) throw std::invalid_argument("GaloisField: word size must be 1..8 bits");
  if (!is_irreducible(modulus, bits))
    throw std::invalid_argument("GaloisField: modulus is not an irreducible polynomial of degree e");
  const unsigned q = order();
  mul_.resize(std::size_t{q} * q);
  inv_.assign(q, 0);
  for (unsigned a = 0; a < q; ++a)
    for (unsigned b = 0; b < q; ++b) {
      const Word p = gf_mul(static_cast<Word>(a), static_cast<Word>(b), bits, modulus);
      mul_[(std::size_t{a} << bits) | b] = p;
      if (p == 1) inv_[a] = static_cast<Word>(b);
    }
}

Word GaloisField::pow(Word a, unsigned exponent) const {
  Word result = 1;
  for (unsigned i = 0; i < exponent; ++i) result = mul(result, a);
  return result;
}

std::optional<FieldMatrix> GaloisField::invert(const FieldMatrix& m) const {
  const std::size_t n = m.size();
  FieldMatrix a = m;
  FieldMatrix inv(n, std::vector<Word>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw std::invalid_argument("GaloisField::invert: matrix is not square");
    inv[i][i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const Word scale = this->inv(a[col][col]);
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] = mul(a[col][j], scale);
      inv[col][j] = mul(inv[col][j], scale);
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const Word f = a[row][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[row][j] ^= mul(f, a[col][j]);
        inv[row][j] ^= mul(f, inv[col][j]);
      }
    }
  }
  return inv;
}

}  // namespace srkpa
