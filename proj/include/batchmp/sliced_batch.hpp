// SPDX-License-Identifier: Apache-2.0

#ifndef BATCHMP_SLICED_BATCH_HPP
#define BATCHMP_SLICED_BATCH_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "batchmp/lane.hpp"

namespace batchmp {

/// A conventional big integer: 64-bit words, least significant first.
using Words = std::vector<std::uint64_t>;

/// Number of 52-bit limbs needed for `bits` bits.
constexpr std::size_t limbs_for_bits(std::size_t bits) noexcept {
  return (bits + kLimbBits - 1) / kLimbBits;
}

constexpr std::size_t words_for_bits(std::size_t bits) noexcept { return (bits + 63) / 64; }

/// L big integers in word-sliced radix-2^52 form: limb i of every lane
/// lives in limbs()[i]. Normalized batches keep every limb below 2^52;
/// functions that return unnormalized intermediates say so.
template <std::size_t L>
  requires SupportedLanes<L>
class SlicedBatch {
 public:
  using Lane = LaneVector<L>;

  SlicedBatch() = default;
  explicit SlicedBatch(std::size_t n_limbs) : limbs_(n_limbs) {}

  [[nodiscard]] std::size_t limb_count() const noexcept { return limbs_.size(); }
  [[nodiscard]] std::size_t bit_capacity() const noexcept { return kLimbBits * limbs_.size(); }

  [[nodiscard]] const Lane& operator[](std::size_t i) const noexcept { return limbs_[i]; }
  [[nodiscard]] Lane& operator[](std::size_t i) noexcept { return limbs_[i]; }

  [[nodiscard]] std::span<const Lane> limbs() const noexcept { return limbs_; }
  [[nodiscard]] std::span<Lane> limbs() noexcept { return limbs_; }

  [[nodiscard]] std::uint64_t limb(std::size_t i, std::size_t lane) const noexcept {
    return limbs_[i].lane[lane];
  }

  /// True when every limb of every lane is below 2^52.
  [[nodiscard]] bool is_normalized() const noexcept;

  /// Copy with the limb count changed: zero-extends, or drops top limbs.
  [[nodiscard]] SlicedBatch resized(std::size_t n_limbs) const;

  friend bool operator==(const SlicedBatch&, const SlicedBatch&) = default;

 private:
  std::vector<Lane> limbs_;
};

/// L exponents as raw 64-bit word slices (no radix change).
template <std::size_t L>
  requires SupportedLanes<L>
struct ExponentBatch {
  std::vector<LaneVector<L>> words;  // ceil(bit_length / 64) entries
  std::size_t bit_length = 0;
};

/// Forward conversion. `target_bits` must be a positive multiple of 52 and
/// every value below 2^target_bits.
/// Throws ShapeError (values.size() != L), ConfigError, SizeError.
template <std::size_t L>
SlicedBatch<L> expand(std::span<const Words> values, std::size_t target_bits);

/// Backward conversion of a normalized batch; each result has
/// ceil(bit_capacity / 64) words.
template <std::size_t L>
std::vector<Words> contract(const SlicedBatch<L>& batch);

/// Transposes L exponents into 64-bit slices of a common bit length s.
/// Throws SizeError when an exponent needs more than s bits.
template <std::size_t L>
ExponentBatch<L> expand64(std::span<const Words> exponents, std::size_t bit_length);

/// Carry-propagates a batch whose limbs are below 2^63.
/// Throws OverflowError when the value does not fit the limb count.
template <std::size_t L>
SlicedBatch<L> normalize(const SlicedBatch<L>& batch);

/// Branch-free `value mod modulus` for values in [0, 2 * modulus).
/// The lane operation sequence does not depend on the data.
template <std::size_t L>
SlicedBatch<L> cond_sub_modulus(const SlicedBatch<L>& batch, const SlicedBatch<L>& moduli);

// Hexadecimal I/O: big-endian, lowercase, no prefix.

/// Accepts upper or lower case digits; an optional "0x" prefix is rejected.
/// Throws ParseError.
Words parse_hex(std::string_view text);

/// Exactly ceil(bits / 4) digits. Throws SizeError if the value needs more.
std::string to_hex(std::span<const std::uint64_t> value, std::size_t bits);

/// Drops high zero words, keeping at least one word.
Words trimmed(Words value);

/// Number of significant bits (0 for zero).
std::size_t bit_length(std::span<const std::uint64_t> value) noexcept;

}  // namespace batchmp

#endif  // BATCHMP_SLICED_BATCH_HPP
