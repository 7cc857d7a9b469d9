// SPDX-License-Identifier: Apache-2.0

#include "batchmp/sliced_batch.hpp"

#include <algorithm>
#include <string>

#include "batchmp/errors.hpp"
#include "wide_ops.hpp"

namespace batchmp {

namespace {

// Bits [pos, pos + count) of a word array, count <= 64. Missing words read as zero.
std::uint64_t extract_bits(std::span<const std::uint64_t> words, std::size_t pos,
                           unsigned count) noexcept {
  const std::size_t w = pos / 64;
  const unsigned off = static_cast<unsigned>(pos % 64);
  std::uint64_t v = w < words.size() ? words[w] >> off : 0;
  if (off != 0 && off + count > 64 && w + 1 < words.size()) v |= words[w + 1] << (64 - off);
  return count == 64 ? v : v & ((std::uint64_t{1} << count) - 1);
}

template <std::size_t L>
void require_lane_count(std::span<const Words> values, const char* what) {
  if (values.size() != L) {
    throw ShapeError(std::string(what) + ": expected " + std::to_string(L) + " values, got " +
                     std::to_string(values.size()));
  }
}

}  // namespace

std::size_t bit_length(std::span<const std::uint64_t> value) noexcept {
  for (std::size_t i = value.size(); i-- > 0;) {
    if (value[i] != 0) return 64 * i + (64 - static_cast<std::size_t>(__builtin_clzll(value[i])));
  }
  return 0;
}

Words trimmed(Words value) {
  while (value.size() > 1 && value.back() == 0) value.pop_back();
  if (value.empty()) value.push_back(0);
  return value;
}

template <std::size_t L>
  requires SupportedLanes<L>
bool SlicedBatch<L>::is_normalized() const noexcept {
  return std::all_of(limbs_.begin(), limbs_.end(),
                     [](const Lane& v) { return detail::fits_limb(v); });
}

template <std::size_t L>
  requires SupportedLanes<L>
SlicedBatch<L> SlicedBatch<L>::resized(std::size_t n_limbs) const {
  SlicedBatch out(n_limbs);
  std::copy_n(limbs_.begin(), std::min(n_limbs, limbs_.size()), out.limbs_.begin());
  return out;
}

template <std::size_t L>
SlicedBatch<L> expand(std::span<const Words> values, std::size_t target_bits) {
  require_lane_count<L>(values, "expand");
  if (target_bits == 0 || target_bits % kLimbBits != 0) {
    throw ConfigError("expand: target size " + std::to_string(target_bits) +
                      " is not a positive multiple of 52 bits");
  }
  const std::size_t n = target_bits / kLimbBits;
  SlicedBatch<L> out(n);
  for (std::size_t k = 0; k < L; ++k) {
    const std::span<const std::uint64_t> v = values[k];
    if (bit_length(v) > target_bits) {
      throw SizeError("expand: lane " + std::to_string(k) + " has " +
                      std::to_string(bit_length(v)) + " bits, capacity is " +
                      std::to_string(target_bits));
    }
    for (std::size_t i = 0; i < n; ++i) out[i].lane[k] = extract_bits(v, kLimbBits * i, kLimbBits);
  }
  return out;
}

template <std::size_t L>
std::vector<Words> contract(const SlicedBatch<L>& batch) {
  const std::size_t n_words = words_for_bits(batch.bit_capacity());
  std::vector<Words> out(L, Words(n_words, 0));
  for (std::size_t k = 0; k < L; ++k) {
    Words& w = out[k];
    for (std::size_t i = 0; i < batch.limb_count(); ++i) {
      const std::uint64_t limb = batch.limb(i, k);
      const std::size_t pos = kLimbBits * i;
      const std::size_t wi = pos / 64;
      const unsigned off = static_cast<unsigned>(pos % 64);
      w[wi] |= limb << off;
      if (off + kLimbBits > 64 && wi + 1 < n_words) w[wi + 1] |= limb >> (64 - off);
    }
  }
  return out;
}

template <std::size_t L>
ExponentBatch<L> expand64(std::span<const Words> exponents, std::size_t bit_length_s) {
  require_lane_count<L>(exponents, "expand64");
  ExponentBatch<L> out;
  out.bit_length = bit_length_s;
  out.words.resize(words_for_bits(bit_length_s));
  for (std::size_t k = 0; k < L; ++k) {
    const Words& e = exponents[k];
    if (bit_length(e) > bit_length_s) {
      throw SizeError("expand64: exponent in lane " + std::to_string(k) + " exceeds " +
                      std::to_string(bit_length_s) + " bits");
    }
    for (std::size_t i = 0; i < out.words.size(); ++i) {
      out.words[i].lane[k] = i < e.size() ? e[i] : 0;
    }
  }
  return out;
}

template <std::size_t L>
SlicedBatch<L> normalize(const SlicedBatch<L>& batch) {
  SlicedBatch<L> out = batch;
  if (out.limb_count() == 0) return out;
  detail::carry_pass<L>(out.limbs());
  detail::require_fits(out[out.limb_count() - 1], "normalize");
  return out;
}

template <std::size_t L>
SlicedBatch<L> cond_sub_modulus(const SlicedBatch<L>& batch, const SlicedBatch<L>& moduli) {
  detail::require_same_limbs(batch, moduli, "cond_sub_modulus");
  SlicedBatch<L> diff = batch;
  const LaneVector<L> borrow = detail::sub_in_place<L>(diff.limbs(), moduli.limbs());
  // borrow == 1 means value < modulus: keep the original.
  const LaneVector<L> keep = lane_eq_mask(borrow, LaneVector<L>::broadcast(1));
  SlicedBatch<L> out(batch.limb_count());
  for (std::size_t i = 0; i < batch.limb_count(); ++i) {
    out[i] = lane_select(keep, batch[i], diff[i]);
  }
  return out;
}

Words parse_hex(std::string_view text) {
  if (text.empty()) throw ParseError("empty hexadecimal string");
  Words out((text.size() + 15) / 16, 0);
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[text.size() - 1 - i];
    std::uint64_t digit = 0;
    if (c >= '0' && c <= '9') {
      digit = static_cast<std::uint64_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      digit = static_cast<std::uint64_t>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      digit = static_cast<std::uint64_t>(c - 'A' + 10);
    } else {
      throw ParseError("invalid hexadecimal digit '" + std::string(1, c) + "'");
    }
    out[i / 16] |= digit << (4 * (i % 16));
  }
  return trimmed(std::move(out));
}

std::string to_hex(std::span<const std::uint64_t> value, std::size_t bits) {
  if (bit_length(value) > bits) {
    throw SizeError("to_hex: value has " + std::to_string(bit_length(value)) +
                    " bits, field width is " + std::to_string(bits));
  }
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t n_digits = (bits + 3) / 4;
  std::string out(n_digits, '0');
  for (std::size_t i = 0; i < n_digits; ++i) {
    const std::size_t w = i / 16;
    const std::uint64_t word = w < value.size() ? value[w] : 0;
    out[n_digits - 1 - i] = kDigits[(word >> (4 * (i % 16))) & 0xF];
  }
  return out;
}

#define BATCHMP_INSTANTIATE(L)                                                              \
  template class SlicedBatch<L>;                                                            \
  template SlicedBatch<L> expand<L>(std::span<const Words>, std::size_t);                   \
  template std::vector<Words> contract<L>(const SlicedBatch<L>&);                           \
  template ExponentBatch<L> expand64<L>(std::span<const Words>, std::size_t);               \
  template SlicedBatch<L> normalize<L>(const SlicedBatch<L>&);                              \
  template SlicedBatch<L> cond_sub_modulus<L>(const SlicedBatch<L>&, const SlicedBatch<L>&);

BATCHMP_INSTANTIATE(8)
BATCHMP_INSTANTIATE(4)

#undef BATCHMP_INSTANTIATE

}  // namespace batchmp
