// SPDX-License-Identifier: Apache-2.0
//
// Reference multi-precision arithmetic for tests and verification. Slow,
// scalar, and deliberately independent of the batch modules: nothing here
// includes or links the lane engine.

#ifndef BATCHMP_ORACLE_HPP
#define BATCHMP_ORACLE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace batchmp::oracle {

/// Non-negative integer, 64-bit words least significant first. Canonical:
/// no high zero words, and zero is the single word {0}.
class RefInt {
 public:
  RefInt() : words_{0} {}
  RefInt(std::uint64_t value) : words_{value} {}  // NOLINT(google-explicit-constructor)
  explicit RefInt(std::vector<std::uint64_t> words);

  static RefInt pow2(std::size_t exponent);
  /// Big-endian hex digits, no prefix. Throws std::invalid_argument.
  static RefInt from_hex(std::string_view text);

  [[nodiscard]] const std::vector<std::uint64_t>& words() const noexcept { return words_; }
  [[nodiscard]] bool is_zero() const noexcept { return words_.size() == 1 && words_[0] == 0; }
  [[nodiscard]] bool is_odd() const noexcept { return (words_[0] & 1) != 0; }
  [[nodiscard]] std::size_t bit_length() const noexcept;
  [[nodiscard]] bool bit(std::size_t i) const noexcept;
  [[nodiscard]] std::string to_hex() const;

  friend bool operator==(const RefInt&, const RefInt&) = default;
  friend std::strong_ordering operator<=>(const RefInt& a, const RefInt& b) noexcept;

 private:
  void trim() noexcept;
  std::vector<std::uint64_t> words_;
};

RefInt ref_add(const RefInt& a, const RefInt& b);
/// a - b; throws std::domain_error if b > a.
RefInt ref_sub(const RefInt& a, const RefInt& b);
RefInt ref_mul(const RefInt& a, const RefInt& b);
RefInt ref_square(const RefInt& a);
RefInt ref_shl(const RefInt& a, std::size_t bits);
RefInt ref_shr(const RefInt& a, std::size_t bits);
/// a mod 2^bits.
RefInt ref_low_bits(const RefInt& a, std::size_t bits);

/// (quotient, remainder); throws std::domain_error on a zero divisor.
std::pair<RefInt, RefInt> ref_divmod(const RefInt& a, const RefInt& b);
RefInt ref_mod(const RefInt& a, const RefInt& m);

/// a^e mod m by left-to-right square-and-multiply; m > 0. a^0 mod 1 = 0.
RefInt ref_modexp(const RefInt& a, const RefInt& e, const RefInt& m);

/// Integer with a sign, for Bezout coefficients.
struct SignedRef {
  RefInt magnitude;
  bool negative = false;
};

struct EgcdResult {
  RefInt g;
  SignedRef x;
  SignedRef y;
};

/// g = gcd(a, b) and a*x + b*y = g.
EgcdResult ref_egcd(const RefInt& a, const RefInt& b);

/// a^-1 mod m; throws std::domain_error if gcd(a, m) != 1.
RefInt ref_mod_inverse(const RefInt& a, const RefInt& m);

/// Textbook Montgomery reduction with R = 2^r_bits:
/// q = T * n_prime mod R, returns (T + q * n) / R.
RefInt ref_montred(const RefInt& t, const RefInt& n, const RefInt& n_prime, std::size_t r_bits);

}  // namespace batchmp::oracle

#endif  // BATCHMP_ORACLE_HPP
